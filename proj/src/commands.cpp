#include "atomint/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include "atomint/error.hpp"

namespace atomint {

namespace {

constexpr double pi = std::numbers::pi;
using Engine = long double;  // lab-frame phases reach 1e8 rad at T ~ 0.1 s

std::string header(const char* command, const ExperimentConfig& config) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "# atomint %s %s\n# config_hash 0x%016" PRIx64 "\n",
                ATOMINT_VERSION, command, config_hash(config));
  return buf;
}

std::string row(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out + '\n';
}

std::string num(double x) { return format_number(x); }
std::string num(const Quad& x) { return format_number(static_cast<double>(x)); }

PortProbabilities run_engine(const InterferometerSetup& s, Geometry geometry, Frame frame) {
  return port_probabilities(run_sequence<Engine>(s, geometry, frame));
}

double wrap(double phase) { return std::remainder(phase, 2 * pi); }

// Reduction in quad first: budget phases reach 1e10 rad.
double wrap_quad(const Quad& phase) {
  const Quad two_pi = boost::math::constants::two_pi<Quad>();
  return wrap(static_cast<double>(phase - round(phase / two_pi) * two_pi));
}

// Coefficient of the swept parameter in the signal-port fringe phase, or 0 if
// the sweep is not a phase.
double phase_coefficient(std::string_view parameter, Geometry geometry) {
  if (parameter == "phi_0" || parameter == "phi_2T" || parameter == "phi_plus") return 1.0;
  if (parameter == "delta_phi") return geometry == Geometry::mzi ? 1.0 : 0.0;
  if (parameter == "phi_T") return geometry == Geometry::mzi ? -2.0 : 0.0;
  return 0.0;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double quadrature_visibility(const InterferometerSetup& setup, Geometry geometry, Frame frame) {
  const InternalLevel port = signal_port(geometry);
  double p[4];
  for (int q = 0; q < 4; ++q) {
    InterferometerSetup s = setup;
    s.phi0 += q * pi / 2;
    p[q] = run_engine(s, geometry, frame).at(port);
  }
  return std::hypot(p[0] - p[2], p[1] - p[3]);
}

CommandOutput cmd_budget(const ExperimentConfig& config) {
  const ClassicalSetup<Quad> s = to_classical(config);
  std::ostringstream out;
  out << header("budget", config);
  out << "# geometry " << to_string(config.geometry) << '\n';

  const Quad k = s.k, g = s.g, T = s.T;
  const Quad expected_signature =
      config.geometry == Geometry::mzi ? Quad(0) : Quad(-2) * gravity_phase(k, g, T);
  const Quad closed_form = config.geometry == Geometry::mzi
                               ? phase_mzi(k, g, T, s.phi0, s.phiT, s.phi2T)
                               : phase_smi(k, g, T, s.phi0, s.phi2T);
  out << "# expected_signature_rad " << num(expected_signature) << '\n';
  out << "# closed_form_phase_rad " << num(closed_form) << '\n';

  std::ostringstream body;
  body << row({"branch", "frame", "port", "S_kin/hbar", "S_grav/hbar", "S_kick/hbar",
               "S_phase/hbar", "total"});
  const Quad h(hbar);
  for (const Frame frame : {Frame::laboratory, Frame::freely_falling}) {
    for (const InternalLevel port : {InternalLevel::excited, InternalLevel::ground}) {
      const auto budgets = interferometer_budgets(config.geometry, s, frame, port);
      auto emit = [&](const char* name, const ActionBudget<Quad>& b) {
        body << row({name, std::string(to_string(frame)), std::string(to_string(port)),
                     num(b.kinetic / h), num(b.gravitational / h), num(b.kick / h),
                     num(b.phase / h), num(b.total() / h)});
      };
      emit("upper", budgets.upper);
      emit("lower", budgets.lower);
      emit("difference", budgets.difference());
      out << "# signature_rad " << to_string(frame) << ' ' << to_string(port) << ' '
          << num(budgets.signature()) << '\n';
      out << "# phase_mod_2pi " << to_string(frame) << ' ' << to_string(port) << ' '
          << num(wrap_quad(budgets.total_phase())) << '\n';
    }
  }
  out << body.str();
  return {out.str(), "", true};
}

CommandOutput cmd_fringe(const ExperimentConfig& config, const SweepSpec& sweep) {
  validate_sweep(sweep);
  std::ostringstream body;
  body << row({sweep.parameter, "P_g", "P_e", "visibility"});
  const InternalLevel port = signal_port(config.geometry);
  std::vector<double> xs, signal;
  for (int i = 0; i < sweep.count; ++i) {
    const double x = sweep.value(i);
    const InterferometerSetup s = to_interferometer(with_parameter(config, sweep.parameter, x));
    const PortProbabilities p = run_engine(s, config.geometry, config.frame);
    const double v = quadrature_visibility(s, config.geometry, config.frame);
    xs.push_back(x);
    signal.push_back(p.at(port));
    body << row({num(x), num(p.ground), num(p.excited), num(v)});
  }

  const auto [lo, hi] = std::minmax_element(signal.begin(), signal.end());
  const double sampled = (*hi - *lo) / (*hi + *lo);
  std::ostringstream out;
  out << header("fringe", config);
  out << "# geometry " << to_string(config.geometry) << " frame " << to_string(config.frame)
      << " signal_port " << to_string(port) << '\n';
  const double c = phase_coefficient(sweep.parameter, config.geometry);
  if (c != 0.0 && sweep.count >= 3) {
    // Least-squares P = a + b cos(c x) + d sin(c x); extremes a +- hypot(b, d).
    Eigen::MatrixXd A(sweep.count, 3);
    Eigen::VectorXd y(sweep.count);
    for (int i = 0; i < sweep.count; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = std::cos(c * xs[i]);
      A(i, 2) = std::sin(c * xs[i]);
      y(i) = signal[i];
    }
    const Eigen::Vector3d fit = A.colPivHouseholderQr().solve(y);
    out << "# fitted_visibility " << num(std::hypot(fit(1), fit(2)) / fit(0)) << '\n';
    out << "# fitted_phase_rad " << num(std::atan2(-fit(2), fit(1))) << '\n';
  }
  out << "# sampled_visibility " << num(sampled) << '\n';
  out << body.str();
  return {out.str(), "", true};
}

CommandOutput cmd_mirror_phase(const ExperimentConfig& config, const std::string& csv_name) {
  const MirrorScenario sc = to_mirror_scenario(config);
  const BarrierConfig& b = *config.barrier;
  const double half_width = b.window_sigmas * sc.delta_p0;
  const auto rows = figure2_curve(sc.barrier, sc.p0, half_width, b.samples, sc.recoil_momentum);
  const EffectiveMirror mirror = effective_mirror_position(sc.p0, sc.barrier);
  const Validity validity = quadratic_validity(sc.p0, sc.delta_p0, sc.barrier);

  // Numerov spot check at nine momenta across the window.
  NumerovControls controls;
  controls.tolerance = b.numerov_tolerance;
  controls.max_refinements = b.numerov_max_refinements;
  double worst = 0.0;
  for (int i = 0; i <= 8; ++i) {
    const double p = sc.p0 - half_width + half_width * i / 4.0;
    const double d = phase_distance_mod_pi(theta_analytic(p, sc.barrier).theta,
                                           theta_numeric(p, sc.barrier, controls).theta);
    worst = std::max(worst, std::abs(d));
  }

  std::ostringstream out;
  out << header("mirror-phase", config);
  out << "# p0_kg_m_per_s " << num(sc.p0) << " delta_p0_kg_m_per_s " << num(sc.delta_p0) << '\n';
  out << "# zeta_eff_m " << num(mirror.position) << '\n';
  out << "# theta0_rad " << num(mirror.theta0) << '\n';
  out << "# validity_number " << num(validity.number) << " valid "
      << (validity.valid ? "true" : "false") << '\n';
  out << "# numerov_max_deviation_rad " << num(worst) << '\n';
  out << row({"p_over_p_rec", "two_theta", "two_theta_linear", "two_theta_quadratic"});
  for (const auto& r : rows)
    out << row({num(r.p_over_recoil), num(r.two_theta), num(r.two_theta_linear),
                num(r.two_theta_quadratic)});

  std::string script =
      "# Plot the reflection phase curve written by `atomint mirror-phase`.\n"
      "import os\n"
      "import sys\n"
      "import numpy as np\n"
      "import matplotlib\n"
      "matplotlib.use(\"Agg\")\n"
      "import matplotlib.pyplot as plt\n"
      "\n"
      "here = os.path.dirname(os.path.abspath(__file__))\n"
      "path = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, \"" +
      csv_name +
      "\")\n"
      "with open(path) as f:\n"
      "    rows = [line for line in f if not line.startswith(\"#\")]\n"
      "d = np.genfromtxt(rows, delimiter=\",\", names=True)\n"
      "fig, (top, bottom) = plt.subplots(2, 1, sharex=True, figsize=(5, 6))\n"
      "top.plot(d[\"p_over_p_rec\"], d[\"two_theta\"], label=\"2 theta(p)\")\n"
      "top.plot(d[\"p_over_p_rec\"], d[\"two_theta_linear\"], \"--\", label=\"first order\")\n"
      "top.set_ylabel(\"phase [rad]\")\n"
      "top.legend()\n"
      "bottom.plot(d[\"p_over_p_rec\"], d[\"two_theta\"] - d[\"two_theta_linear\"], label=\"exact - "
      "linear\")\n"
      "bottom.plot(d[\"p_over_p_rec\"], d[\"two_theta_quadratic\"] - d[\"two_theta_linear\"], \":\", "
      "label=\"quadratic term\")\n"
      "bottom.set_xlabel(\"p / p_rec\")\n"
      "bottom.set_ylabel(\"residual [rad]\")\n"
      "bottom.legend()\n"
      "fig.tight_layout()\n"
      "fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  return {out.str(), script, validity.valid};
}

CommandOutput cmd_visibility(const ExperimentConfig& config, const std::optional<SweepSpec>& sweep) {
  require(config.geometry == Geometry::smi, "visibility: requires geometry \"SMI\"");
  SweepSpec z;
  if (sweep) {
    z = *sweep;
    require(z.parameter == "Z_m", "visibility: the sweep parameter must be Z_m");
  } else {
    const double reach = 2.0 * hbar / config.packet.delta_p;
    z = {"Z_m", -reach, reach, 41};
  }
  validate_sweep(z);

  std::ostringstream body;
  body << row({"Z_m", "Z_dp_over_hbar", "visibility", "gaussian_law", "abs_diff"});
  double worst = 0.0;
  const double dp = config.packet.delta_p;
  for (int i = 0; i < z.count; ++i) {
    const double Z = z.value(i);
    const InterferometerSetup s = to_interferometer(with_parameter(config, "Z_m", Z));
    const double v = quadrature_visibility(s, Geometry::smi, config.frame);
    const double law = std::exp(-2.0 * Z * Z * dp * dp / (hbar * hbar));
    worst = std::max(worst, std::abs(v - law));
    body << row({num(Z), num(Z * dp / hbar), num(v), num(law), num(std::abs(v - law))});
  }
  const bool ok = worst <= visibility_tolerance;
  std::ostringstream out;
  out << header("visibility", config);
  out << "# max_abs_diff " << num(worst) << " tolerance " << num(visibility_tolerance)
      << " result " << (ok ? "PASS" : "FAIL") << '\n';
  out << body.str();
  return {out.str(), "", ok};
}

CommandOutput cmd_frame_check(const ExperimentConfig& config, int random_cases,
                              std::uint64_t seed) {
  require(random_cases >= 0, "frame-check: random case count must be non-negative");
  std::vector<ExperimentConfig> cases{config};
  std::mt19937_64 rng(seed);
  auto uniform = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  for (int i = 0; i < random_cases; ++i) {
    ExperimentConfig c = config;
    c.T = uniform(1e-3, 0.05);
    c.g = uniform(0.0, 10.0);
    c.phi0 = uniform(0.0, 2 * pi);
    c.phiT = uniform(0.0, 2 * pi);
    c.phi2T = uniform(0.0, 2 * pi);
    c.packet.z_center = uniform(-1e-3, 1e-3);
    c.z0 = c.packet.z_center;
    c.zeta_e.reset();
    c.zeta_g.reset();
    if (c.geometry == Geometry::smi)
      c = with_parameter(c, "Z_m", uniform(-2.0, 2.0) * hbar / c.packet.delta_p);
    cases.push_back(c);
  }

  std::ostringstream body;
  body << row({"case", "geometry", "P_e_lab", "P_g_lab", "P_e_falling", "P_g_falling",
               "max_abs_diff"});
  double worst = 0.0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const InterferometerSetup s = to_interferometer(cases[i]);
    const auto lab = run_engine(s, cases[i].geometry, Frame::laboratory);
    const auto fall = run_engine(s, cases[i].geometry, Frame::freely_falling);
    const double d =
        std::max(std::abs(lab.excited - fall.excited), std::abs(lab.ground - fall.ground));
    worst = std::max(worst, d);
    body << row({std::to_string(i), std::string(to_string(cases[i].geometry)), num(lab.excited),
                 num(lab.ground), num(fall.excited), num(fall.ground), num(d)});
  }
  const bool ok = worst <= frame_check_tolerance;
  std::ostringstream out;
  out << header("frame-check", config);
  out << "# cases " << cases.size() << " max_abs_diff " << num(worst) << " tolerance "
      << num(frame_check_tolerance) << " result " << (ok ? "PASS" : "FAIL") << '\n';
  out << body.str();
  return {out.str(), "", ok};
}

}  // namespace atomint
