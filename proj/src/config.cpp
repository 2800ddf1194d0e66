#include "atomint/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "atomint/error.hpp"

namespace atomint {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

// Object reader that remembers which keys were consumed so leftovers can be
// rejected by name.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }
  std::string child(const std::string& key) const { return path_ + "." + key; }

  const json& at(const std::string& key) {
    if (!has(key)) fail(child(key), "missing required field");
    seen_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(child(key), "must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }
  double positive(const std::string& key) {
    const double x = number(key);
    if (!(x > 0)) fail(child(key), "must be positive");
    return x;
  }
  double positive(const std::string& key, double fallback) {
    return has(key) ? positive(key) : fallback;
  }
  double non_negative(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (x < 0) fail(child(key), "must be non-negative");
    return x;
  }
  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    return v.get<long>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) fail(child(key), "unknown key");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& path, const std::string& value,
                const std::array<std::pair<const char*, Enum>, N>& table) {
  for (const auto& [name, e] : table)
    if (value == name) return e;
  std::string allowed;
  for (const auto& [name, e] : table) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  fail(path, "unknown value \"" + value + "\" (expected one of " + allowed + ")");
}

std::optional<double> parse_mirror(ObjectReader& r, const std::string& key) {
  if (!r.has(key)) return std::nullopt;
  const json& v = r.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != "classical")
      fail(r.child(key), "expected a number or \"classical\"");
    return std::nullopt;
  }
  if (!v.is_number()) fail(r.child(key), "expected a number or \"classical\"");
  return v.get<double>();
}

BarrierConfig reference_barrier(const AtomSpecies& species) {
  BarrierConfig b;
  b.p0 = 10.0 * species.recoil_momentum;
  b.delta_p0 = 0.05 * species.recoil_momentum;
  b.decay_length = 1e-8;
  b.location = 0.0;
  b.strength = barrier_strength_for(b.p0, species.mass, 20.0);
  return b;
}

}  // namespace

void validate_sweep(const SweepSpec& sweep) {
  const bool known = std::find(std::begin(sweepable_parameters), std::end(sweepable_parameters),
                               sweep.parameter) != std::end(sweepable_parameters);
  if (!known) {
    std::string allowed;
    for (auto name : sweepable_parameters)
      allowed += std::string(allowed.empty() ? "" : ", ") + std::string(name);
    throw ValidationError("sweep: parameter \"" + sweep.parameter +
                          "\" cannot be swept (expected one of " + allowed + ")");
  }
  require(sweep.count >= 2, "sweep: count must be at least 2");
  require(sweep.start != sweep.stop, "sweep: start and stop must differ");
  require(std::isfinite(sweep.start) && std::isfinite(sweep.stop), "sweep: bounds must be finite");
  if (sweep.parameter == "T_s")
    require(sweep.start > 0 && sweep.stop > 0, "sweep: T_s values must be positive");
}

SweepSpec parse_sweep(std::string_view text) {
  std::vector<std::string> fields;
  std::stringstream in{std::string(text)};
  for (std::string item; std::getline(in, item, ',');) fields.push_back(item);
  require(fields.size() == 4, "sweep: expected name,start,stop,count");
  SweepSpec s;
  s.parameter = fields[0];
  try {
    std::size_t used = 0;
    s.start = std::stod(fields[1], &used);
    require(used == fields[1].size(), "sweep: bad start value");
    s.stop = std::stod(fields[2], &used);
    require(used == fields[2].size(), "sweep: bad stop value");
    s.count = std::stoi(fields[3], &used);
    require(used == fields[3].size(), "sweep: bad count value");
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ValidationError*>(&e)) throw;
    throw ValidationError("sweep: expected name,start,stop,count with numeric bounds");
  }
  validate_sweep(s);
  return s;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  ObjectReader root(doc, "config");
  ExperimentConfig c;

  c.geometry = parse_enum<Geometry, 2>(root.child("geometry"), root.text("geometry", "MZI"),
                                       {{{"MZI", Geometry::mzi}, {"SMI", Geometry::smi}}});
  c.diffraction = parse_enum<Diffraction, 2>(
      root.child("diffraction"), root.text("diffraction", "raman"),
      {{{"raman", Diffraction::raman}, {"bragg", Diffraction::bragg}}});
  c.frame = parse_enum<Frame, 2>(
      root.child("frame"), root.text("frame", "laboratory"),
      {{{"laboratory", Frame::laboratory}, {"freely_falling", Frame::freely_falling}}});

  if (root.has("species")) {
    const json& sp = root.at("species");
    if (sp.is_string()) {
      if (sp.get<std::string>() != "Rb87")
        fail(root.child("species"), "unknown species \"" + sp.get<std::string>() + "\"");
      c.species = rubidium87();
    } else {
      ObjectReader r(sp, root.child("species"));
      c.species.mass = r.positive("mass_kg");
      c.species.internal_splitting = r.non_negative("omega_rad_per_s", 0.0);
      c.species.recoil_momentum = r.positive("p_rec_kg_m_per_s");
      r.finish();
    }
  }

  c.k = root.positive("k_per_m");
  c.g = root.number("g_m_per_s2");
  c.T = root.positive("T_s");

  if (root.has("phases_rad")) {
    ObjectReader r(root.at("phases_rad"), root.child("phases_rad"));
    c.phi0 = r.number("phi_0", 0.0);
    c.phiT = r.number("phi_T", 0.0);
    c.phi2T = r.number("phi_2T", 0.0);
    r.finish();
  }

  if (root.has("mirrors")) {
    ObjectReader r(root.at("mirrors"), root.child("mirrors"));
    c.zeta_e = parse_mirror(r, "zeta_e_m");
    c.zeta_g = parse_mirror(r, "zeta_g_m");
    r.finish();
  } else if (c.geometry == Geometry::smi) {
    fail(root.child("mirrors"), "required for SMI (use \"classical\" for the classical heights)");
  }

  c.packet = {hbar * c.k / 2, 0.05 * c.species.recoil_momentum, 0.0};
  if (root.has("wave_packet")) {
    ObjectReader r(root.at("wave_packet"), root.child("wave_packet"));
    c.packet.p_center = r.number("p_center_kg_m_per_s", c.packet.p_center);
    c.packet.delta_p = r.positive("delta_p_kg_m_per_s", c.packet.delta_p);
    c.packet.z_center = r.number("z_center_m", c.packet.z_center);
    r.finish();
  }
  c.z0 = root.number("z0_m", c.packet.z_center);
  c.v0 = root.number("v0_m_per_s", c.packet.p_center / c.species.mass);

  if (root.has("clock_phase")) {
    const json& v = root.at("clock_phase");
    if (v.is_boolean()) {
      c.clock_phase = v.get<bool>();
    } else if (v.is_string() && (v == "on" || v == "off")) {
      c.clock_phase = v == "on";
    } else {
      fail(root.child("clock_phase"), "expected true, false, \"on\" or \"off\"");
    }
  }

  if (root.has("grid")) {
    ObjectReader r(root.at("grid"), root.child("grid"));
    const long n = r.integer("N", c.grid.count);
    if (n < 16) fail(r.child("N"), "must be at least 16");
    c.grid.count = n;
    c.grid.span_sigmas = r.positive("span_sigmas", c.grid.span_sigmas);
    r.finish();
  }

  if (root.has("barrier")) {
    ObjectReader r(root.at("barrier"), root.child("barrier"));
    BarrierConfig b = reference_barrier(c.species);
    b.p0 = r.positive("p0_kg_m_per_s", b.p0);
    b.delta_p0 = r.positive("delta_p0_kg_m_per_s", b.delta_p0);
    // V0 follows p0 unless given: 20 times the incident kinetic energy.
    b.strength = r.positive("V0_J", barrier_strength_for(b.p0, c.species.mass, 20.0));
    b.decay_length = r.positive("lambda_m", b.decay_length);
    b.location = r.number("s_m", b.location);
    b.window_sigmas = r.positive("window_sigmas", b.window_sigmas);
    const long samples = r.integer("samples", b.samples);
    if (samples < 2 || samples > 100000) fail(r.child("samples"), "must lie in [2, 100000]");
    b.samples = static_cast<int>(samples);
    b.numerov_tolerance = r.positive("numerov_tolerance_rad", b.numerov_tolerance);
    const long refinements = r.integer("numerov_max_refinements", b.numerov_max_refinements);
    if (refinements < 1 || refinements > 20)
      fail(r.child("numerov_max_refinements"), "must lie in [1, 20]");
    b.numerov_max_refinements = static_cast<int>(refinements);
    if (b.window_sigmas * b.delta_p0 >= b.p0)
      fail(r.child("window_sigmas"), "window reaches p <= 0");
    r.finish();
    c.barrier = b;
  }

  if (root.has("sweep")) {
    ObjectReader r(root.at("sweep"), root.child("sweep"));
    SweepSpec s;
    s.parameter = r.text("parameter", "");
    s.start = r.number("start");
    s.stop = r.number("stop");
    const long count = r.integer("count", 0);
    if (count < 2 || count > 1000000) fail(r.child("count"), "must lie in [2, 1000000]");
    s.count = static_cast<int>(count);
    r.finish();
    try {
      validate_sweep(s);
    } catch (const ValidationError& e) {
      throw ValidationError(std::string("config.") + e.what());
    }
    c.sweep = s;
  }

  root.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json doc;
  doc["geometry"] = std::string(to_string(c.geometry));
  doc["diffraction"] = std::string(to_string(c.diffraction));
  doc["frame"] = std::string(to_string(c.frame));
  doc["species"] = {{"mass_kg", c.species.mass},
                    {"omega_rad_per_s", c.species.internal_splitting},
                    {"p_rec_kg_m_per_s", c.species.recoil_momentum}};
  doc["k_per_m"] = c.k;
  doc["g_m_per_s2"] = c.g;
  doc["T_s"] = c.T;
  doc["phases_rad"] = {{"phi_0", c.phi0}, {"phi_T", c.phiT}, {"phi_2T", c.phi2T}};
  auto mirror = [](const std::optional<double>& z) { return z ? json(*z) : json("classical"); };
  doc["mirrors"] = {{"zeta_e_m", mirror(c.zeta_e)}, {"zeta_g_m", mirror(c.zeta_g)}};
  doc["wave_packet"] = {{"p_center_kg_m_per_s", c.packet.p_center},
                        {"delta_p_kg_m_per_s", c.packet.delta_p},
                        {"z_center_m", c.packet.z_center}};
  doc["z0_m"] = c.z0;
  doc["v0_m_per_s"] = c.v0;
  doc["clock_phase"] = c.clock_phase;
  doc["grid"] = {{"N", c.grid.count}, {"span_sigmas", c.grid.span_sigmas}};
  if (c.barrier) {
    const BarrierConfig& b = *c.barrier;
    doc["barrier"] = {{"V0_J", b.strength},          {"lambda_m", b.decay_length},
                      {"s_m", b.location},           {"p0_kg_m_per_s", b.p0},
                      {"delta_p0_kg_m_per_s", b.delta_p0}, {"window_sigmas", b.window_sigmas},
                      {"samples", b.samples},
                      {"numerov_tolerance_rad", b.numerov_tolerance},
                      {"numerov_max_refinements", b.numerov_max_refinements}};
  }
  if (c.sweep) {
    doc["sweep"] = {{"parameter", c.sweep->parameter},
                    {"start", c.sweep->start},
                    {"stop", c.sweep->stop},
                    {"count", c.sweep->count}};
  }
  return doc.dump(2);
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

MirrorPositions<double> resolved_mirrors(const ExperimentConfig& c) {
  const auto classical = classical_mirror_positions(c.z0, c.v0, c.g, c.T, c.k, c.species.mass);
  return {c.zeta_g.value_or(classical.lower), c.zeta_e.value_or(classical.upper)};
}

ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view parameter,
                                double value) {
  ExperimentConfig c = config;
  if (parameter == "phi_0") {
    c.phi0 = value;
  } else if (parameter == "phi_T") {
    c.phiT = value;
  } else if (parameter == "phi_2T") {
    c.phi2T = value;
  } else if (parameter == "phi_plus") {
    // Split evenly, phi_0 = phi_2T.
    c.phi0 = value / 2;
    c.phi2T = value / 2;
  } else if (parameter == "delta_phi") {
    // phi_0 - 2 phi_T + phi_2T = value through phi_T.
    c.phiT = (c.phi0 + c.phi2T - value) / 2;
  } else if (parameter == "T_s") {
    require(value > 0, "sweep: T_s must be positive");
    c.T = value;
  } else if (parameter == "g_m_per_s2") {
    c.g = value;
  } else if (parameter == "Z_m") {
    const auto mirrors = resolved_mirrors(config);
    c.zeta_g = mirrors.lower;
    c.zeta_e = mirrors.lower + hbar * c.k * c.T / c.species.mass + value;
  } else {
    throw ValidationError("sweep: parameter \"" + std::string(parameter) + "\" cannot be swept");
  }
  return c;
}

InterferometerSetup to_interferometer(const ExperimentConfig& c) {
  InterferometerSetup s;
  s.species = c.species;
  s.k = c.k;
  s.g = c.g;
  s.T = c.T;
  s.phi0 = c.phi0;
  s.phiT = c.phiT;
  s.phi2T = c.phi2T;
  const auto mirrors = resolved_mirrors(c);
  s.zeta_e = mirrors.upper;
  s.zeta_g = mirrors.lower;
  s.packet = c.packet;
  s.grid = c.grid;
  s.clock_phase = c.clock_phase;
  s.diffraction = c.diffraction;
  return s;
}

ClassicalSetup<Quad> to_classical(const ExperimentConfig& c) {
  ClassicalSetup<Quad> s;
  s.mass = c.species.mass;
  s.k = c.k;
  s.g = c.g;
  s.T = c.T;
  s.phi0 = c.phi0;
  s.phiT = c.phiT;
  s.phi2T = c.phi2T;
  s.z0 = c.z0;
  s.v0 = c.v0;
  // Classical heights are recomputed in quad so the SMI closes to rounding.
  const auto classical = classical_mirror_positions(s.z0, s.v0, s.g, s.T, s.k, s.mass);
  s.zeta_lower = c.zeta_g ? Quad(*c.zeta_g) : classical.lower;
  s.zeta_upper = c.zeta_e ? Quad(*c.zeta_e) : classical.upper;
  return s;
}

MirrorScenario to_mirror_scenario(const ExperimentConfig& c) {
  require(c.barrier.has_value(), "mirror-phase: config has no \"barrier\" section");
  const BarrierConfig& b = *c.barrier;
  MirrorScenario sc;
  sc.barrier = {b.strength, b.decay_length, b.location, c.species.mass};
  sc.p0 = b.p0;
  sc.delta_p0 = b.delta_p0;
  sc.recoil_momentum = c.species.recoil_momentum;
  return sc;
}

}  // namespace atomint
