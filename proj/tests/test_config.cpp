#include <doctest.h>

#include <cmath>
#include <string>

#include "atomint/config.hpp"
#include "atomint/error.hpp"

using namespace atomint;

namespace {

const char* minimal_mzi = R"({"k_per_m": 16105750.963, "g_m_per_s2": 9.81, "T_s": 0.01,
                              "phases_rad": {"phi_0": 0.1, "phi_T": 0.2, "phi_2T": 0.3}})";

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal MZI config parses with defaults") {
  const auto c = parse_config(minimal_mzi);
  CHECK(c.geometry == Geometry::mzi);
  CHECK(c.frame == Frame::laboratory);
  CHECK(c.diffraction == Diffraction::raman);
  CHECK(c.species == rubidium87());
  CHECK(c.phiT == 0.2);
  CHECK(c.packet.p_center == doctest::Approx(hbar * c.k / 2));
  CHECK(c.packet.delta_p == doctest::Approx(0.05 * rb87::recoil_momentum));
  CHECK(c.packet.z_center == 0.0);
  CHECK(c.z0 == 0.0);
  CHECK(c.v0 == doctest::Approx(hbar * c.k / (2 * rb87::mass)));
  CHECK_FALSE(c.clock_phase);
  CHECK(c.grid == GridSpec{});
  CHECK_FALSE(c.barrier.has_value());
  CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("classical mirrors resolve to the classical heights") {
  const auto c = parse_config(R"({"geometry": "SMI", "k_per_m": 16105750.963, "g_m_per_s2": 9.81,
      "T_s": 0.02, "mirrors": {"zeta_e_m": "classical", "zeta_g_m": "classical"}})");
  const auto m = resolved_mirrors(c);
  const auto expected = classical_mirror_positions(c.z0, c.v0, c.g, c.T, c.k, c.species.mass);
  CHECK(m.lower == expected.lower);
  CHECK(m.upper == expected.upper);
  const auto s = to_interferometer(c);
  CHECK(std::abs(s.mirror_mismatch()) < 1e-18);  // a few ulp of the heights

  const auto fixed = parse_config(R"({"geometry": "SMI", "k_per_m": 1e7, "g_m_per_s2": 9.81,
      "T_s": 0.02, "mirrors": {"zeta_e_m": 0.001, "zeta_g_m": "classical"}})");
  CHECK(resolved_mirrors(fixed).upper == 0.001);
}

TEST_CASE("validation errors carry the offending path") {
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": -0.01})").find("config.T_s") == 0);
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.0})").find("positive") !=
        std::string::npos);
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81})") == "config.T_s: missing required field");
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01, "wave_packet": {"width": 1}})") ==
        "config.wave_packet.width: unknown key");
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01, "colour": 1})") ==
        "config.colour: unknown key");
  CHECK(error_of(R"({"geometry": "SMI", "k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01})")
            .find("config.mirrors") == 0);
  CHECK(error_of(R"({"geometry": "RING", "k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01})")
            .find("config.geometry") == 0);
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01, "mirrors": {"zeta_e_m": "high"}})")
            .find("config.mirrors.zeta_e_m") == 0);
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01, "grid": {"N": 4.5}})")
            .find("config.grid.N") == 0);
  CHECK(error_of(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01,
                     "sweep": {"parameter": "mass", "start": 0, "stop": 1, "count": 3}})")
            .find("config.sweep") == 0);
  CHECK(error_of(R"({"k_per_m": 1e7,)").find("malformed") != std::string::npos);
  CHECK(error_of(R"([1, 2])").find("config: expected an object") == 0);
}

TEST_CASE("serialisation round-trips") {
  const std::string full = R"({
    "geometry": "SMI", "diffraction": "bragg", "frame": "freely_falling",
    "species": {"mass_kg": 1.0e-25, "omega_rad_per_s": 1.0e9, "p_rec_kg_m_per_s": 8.0e-28},
    "k_per_m": 1.2e7, "g_m_per_s2": 9.80665, "T_s": 0.0375,
    "phases_rad": {"phi_0": 0.1, "phi_T": 0.2, "phi_2T": 0.30000000000000004},
    "mirrors": {"zeta_e_m": 1.0e-3, "zeta_g_m": "classical"},
    "wave_packet": {"p_center_kg_m_per_s": 1.0e-27, "delta_p_kg_m_per_s": 3.0e-29, "z_center_m": -2.0e-4},
    "z0_m": 0.1, "clock_phase": "on", "grid": {"N": 2048, "span_sigmas": 9.5},
    "barrier": {"lambda_m": 2.0e-8, "samples": 41},
    "sweep": {"parameter": "Z_m", "start": -1.0e-6, "stop": 1.0e-6, "count": 21}})";
  for (const std::string& text : {std::string(minimal_mzi), full}) {
    const auto a = parse_config(text);
    const auto b = parse_config(serialize_config(a));
    CHECK(a == b);
    CHECK(serialize_config(a) == serialize_config(b));
    CHECK(config_hash(a) == config_hash(b));
  }
  const auto a = parse_config(full);
  CHECK(a.clock_phase);
  CHECK(a.barrier->decay_length == 2e-8);
  CHECK(a.barrier->samples == 41);
  auto changed = a;
  changed.T *= 1.0000001;
  CHECK(config_hash(changed) != config_hash(a));
}

TEST_CASE("reference barrier defaults") {
  const auto c = parse_config(R"({"k_per_m": 1e7, "g_m_per_s2": 9.81, "T_s": 0.01, "barrier": {}})");
  const auto sc = to_mirror_scenario(c);
  const auto ref = reference_mirror_scenario();
  CHECK(sc.p0 == ref.p0);
  CHECK(sc.delta_p0 == ref.delta_p0);
  CHECK(sc.barrier == ref.barrier);
  CHECK_THROWS_AS(to_mirror_scenario(parse_config(minimal_mzi)), ValidationError);
}

TEST_CASE("sweep strings") {
  const auto s = parse_sweep("phi_plus,0,6.2831853,9");
  CHECK(s.parameter == "phi_plus");
  CHECK(s.count == 9);
  CHECK(s.value(0) == 0.0);
  CHECK(s.value(8) == 6.2831853);
  CHECK_THROWS_AS(parse_sweep("phi_plus,0,1"), ValidationError);
  CHECK_THROWS_AS(parse_sweep("phi_plus,0,x,3"), ValidationError);
  CHECK_THROWS_AS(parse_sweep("phi_plus,1,1,3"), ValidationError);
  CHECK_THROWS_AS(parse_sweep("phi_plus,0,1,1"), ValidationError);
  CHECK_THROWS_AS(parse_sweep("mass,0,1,3"), ValidationError);
  CHECK_THROWS_AS(parse_sweep("T_s,-1,1,3"), ValidationError);
}

TEST_CASE("swept parameters land where expected") {
  const auto c = parse_config(minimal_mzi);
  CHECK(with_parameter(c, "phi_plus", 1.0).phi0 + with_parameter(c, "phi_plus", 1.0).phi2T == 1.0);
  const auto d = with_parameter(c, "delta_phi", 0.7);
  CHECK(d.phi0 - 2 * d.phiT + d.phi2T == doctest::Approx(0.7));
  CHECK(with_parameter(c, "T_s", 0.02).T == 0.02);
  CHECK(with_parameter(c, "g_m_per_s2", 1.0).g == 1.0);
  const auto z = with_parameter(c, "Z_m", 1e-7);
  CHECK(to_interferometer(z).mirror_mismatch() == doctest::Approx(1e-7).epsilon(1e-6));
  CHECK_THROWS_AS(with_parameter(c, "mass", 1.0), ValidationError);
}
