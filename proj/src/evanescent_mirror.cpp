#include "atomint/evanescent_mirror.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "atomint/error.hpp"
#include "atomint/log_gamma.hpp"

namespace atomint {

namespace {

constexpr double pi = std::numbers::pi;

double wave_number(double p) { return p / hbar; }

// One fixed-step pass of psi'' = f(z) psi, f = kappa^2 e^{2(z-s)/lambda} - q^2,
// from z_max down past z_min. Long double with the summed form of the
// recurrence: with a step this small the plain three-term form loses the
// curvature term to rounding in the oscillatory region.
double numerov_pass(double q_in, const ExponentialBarrier& barrier, double z_min, double z_max,
                    double h_in) {
  using R = long double;
  const R q = q_in, h = h_in;
  const R kappa = barrier.kappa();
  const R lambda = barrier.decay_length;
  const R s = barrier.location;
  const R zt = z_max;
  const R q2 = q * q, k2 = kappa * kappa, h2 = h * h;
  auto growth = [&](long n) { return std::exp(R(2) * (zt - R(n) * h - s) / lambda); };

  const auto quarter = static_cast<long>(std::lround(pi / (2.0 * q_in * h_in)));
  const auto n_a = static_cast<long>(std::ceil((z_max - z_min) / h_in));
  const long n_b = n_a + std::max(quarter, 1L);

  // Decaying seed: psi(z - h) / psi(z) ~ exp(sqrt(f) h) (f(z) / f(z - h))^{1/4}.
  const R step_ratio = std::exp(R(-2) * h / lambda);
  R e = growth(0);
  R f = k2 * e - q2;
  const R f1 = k2 * growth(1) - q2;
  R psi = 1;
  R phi = (1 - h2 * f / 12) * psi;
  const R psi1 = std::exp((std::sqrt(f) + std::sqrt(f1)) * h / 2) * std::pow(f / f1, R(0.25));
  R delta = (1 - h2 * f1 / 12) * psi1 - phi;
  phi += delta;
  e = growth(1);
  f = f1;
  psi = psi1;
  R psi_a = 0, psi_b = 0;

  for (long n = 1; n < n_b; ++n) {
    delta += h2 * f * psi;
    phi += delta;
    e = (n + 1) % 256 == 0 ? growth(n + 1) : e * step_ratio;
    f = k2 * e - q2;
    psi = phi / (1 - h2 * f / 12);
    if (std::abs(psi) > R(1e150)) {
      psi *= R(1e-150);
      phi *= R(1e-150);
      delta *= R(1e-150);
    }
    if (n + 1 == n_a) psi_a = psi;
  }
  psi_b = psi;
  const double z_a = static_cast<double>(zt - R(n_a) * h);
  const double z_b = static_cast<double>(zt - R(n_b) * h);

  // psi = a e^{iqz} + b e^{-iqz} at both points.
  using C = std::complex<double>;
  const double scale = static_cast<double>(std::max(std::abs(psi_a), std::abs(psi_b)));
  Eigen::Matrix2cd waves;
  waves << std::polar(1.0, q_in * z_a), std::polar(1.0, -q_in * z_a), std::polar(1.0, q_in * z_b),
      std::polar(1.0, -q_in * z_b);
  const Eigen::Vector2cd values(C(static_cast<double>(psi_a) / scale, 0.0),
                                C(static_cast<double>(psi_b) / scale, 0.0));
  const Eigen::Vector2cd ab = waves.fullPivLu().solve(values);
  const C reflection = -ab(1) / ab(0);  // e^{2 i theta}
  double theta = 0.5 * std::arg(reflection);
  if (theta <= -pi / 2) theta += pi;
  return theta;
}

}  // namespace

double ExponentialBarrier::kappa() const { return std::sqrt(2.0 * mass * strength) / hbar; }

void ExponentialBarrier::validate() const {
  require(strength > 0, "barrier: V0 must be positive");
  require(decay_length > 0, "barrier: decay length must be positive");
  require(mass > 0, "barrier: mass must be positive");
  require(std::isfinite(location), "barrier: location must be finite");
}

double barrier_strength_for(double p0, double mass, double ratio) {
  return ratio * p0 * p0 / (2.0 * mass);
}

MirrorScenario reference_mirror_scenario() {
  MirrorScenario sc;
  sc.recoil_momentum = rb87::recoil_momentum;
  sc.p0 = 10.0 * sc.recoil_momentum;
  sc.delta_p0 = 0.05 * sc.recoil_momentum;
  sc.barrier.mass = rb87::mass;
  sc.barrier.decay_length = 1e-8;
  sc.barrier.location = 0.0;
  sc.barrier.strength = barrier_strength_for(sc.p0, rb87::mass, 20.0);
  return sc;
}

double vartheta_of_y(double y) { return arg_gamma_one_plus_iy(y); }

double vartheta_y_derivative(double y, double step) {
  const double h = step;
  return (vartheta_of_y(y - 2 * h) - 8 * vartheta_of_y(y - h) + 8 * vartheta_of_y(y + h) -
          vartheta_of_y(y + 2 * h)) /
         (12 * h);
}

double vartheta_y_second_derivative(double y, double step) {
  const double h = step;
  return (-vartheta_of_y(y - 2 * h) + 16 * vartheta_of_y(y - h) - 30 * vartheta_of_y(y) +
          16 * vartheta_of_y(y + h) - vartheta_of_y(y + 2 * h)) /
         (12 * h * h);
}

double theta_formula(double p, const ExponentialBarrier& barrier) {
  const double lambda = barrier.decay_length;
  const double y = p * lambda / hbar;
  return vartheta_of_y(y) -
         (std::log(barrier.kappa() * lambda / 2.0) - barrier.location / lambda) * y;
}

ScatterPhase theta_analytic(double p, const ExponentialBarrier& barrier) {
  require(p > 0, "theta_analytic: momentum must be positive");
  barrier.validate();
  const double lambda = barrier.decay_length;
  const double y = p * lambda / hbar;
  const double scale = lambda / hbar;  // dy/dp
  ScatterPhase out;
  out.momentum = p;
  out.vartheta = vartheta_of_y(y);
  out.theta = theta_formula(p, barrier);
  // Richardson-combined five-point estimates.
  const double d1 = vartheta_y_derivative(y, 1e-3), d1h = vartheta_y_derivative(y, 5e-4);
  out.vartheta_derivative = (16.0 * d1h - d1) / 15.0 * scale;
  out.theta_second_derivative = vartheta_y_second_derivative(y) * scale * scale;
  return out;
}

double phase_distance_mod_pi(double a, double b) {
  double d = std::remainder(a - b, pi);
  if (d <= -pi / 2) d += pi;
  return d;
}

NumerovResult theta_numeric(double p, const ExponentialBarrier& barrier,
                            const NumerovControls& controls) {
  require(p > 0, "theta_numeric: momentum must be positive");
  barrier.validate();
  const double q = wave_number(p);
  const double kappa = barrier.kappa();
  const double lambda = barrier.decay_length;
  const double s = barrier.location;

  NumerovResult out;
  out.z_max = controls.z_max.value_or(s + lambda * std::log(std::max(1e3 * q / kappa, 10.0)));
  out.z_min = controls.z_min.value_or(s + lambda * std::log(1e-6 * q / kappa));
  const double v_max = kappa * kappa * std::exp(2.0 * (out.z_max - s) / lambda);
  if (v_max < (1e6 - 1e-6) * q * q) {
    std::ostringstream msg;
    msg << "theta_numeric: barrier too weak at z_max (kappa^2 e^{2(z_max-s)/lambda} = "
        << v_max / (q * q) << " q^2, need >= 1e6 q^2)";
    throw ValidationError(msg.str());
  }
  require(out.z_min < out.z_max, "theta_numeric: z_min must lie below z_max");

  double h = controls.initial_step_factor / std::max(std::sqrt(v_max), q);
  double previous = numerov_pass(q, barrier, out.z_min, out.z_max, h);
  for (int r = 1; r <= controls.max_refinements; ++r) {
    h /= 2;
    const double current = numerov_pass(q, barrier, out.z_min, out.z_max, h);
    if (std::abs(phase_distance_mod_pi(current, previous)) < controls.tolerance) {
      out.theta = current;
      out.step = h;
      out.refinements = r;
      return out;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "theta_numeric: no convergence after " << controls.max_refinements
      << " step halvings (p = " << p << ")";
  throw ConvergenceError(msg.str());
}

EffectiveMirror effective_mirror_position(double p0, const ExponentialBarrier& barrier) {
  require(p0 > 0, "effective_mirror_position: p0 must be positive");
  const ScatterPhase phase = theta_analytic(p0, barrier);
  const double lambda = barrier.decay_length;
  EffectiveMirror out;
  out.p0 = p0;
  out.position = hbar * phase.vartheta_derivative -
                 lambda * std::log(barrier.kappa() * lambda / 2.0) + barrier.location;
  out.theta0 = phase.theta - out.position * p0 / hbar;
  return out;
}

Validity quadratic_validity(double p0, double delta_p, const ExponentialBarrier& barrier,
                            double threshold) {
  require(p0 > 0 && delta_p > 0, "quadratic_validity: p0 and delta_p must be positive");
  const ScatterPhase phase = theta_analytic(p0, barrier);
  Validity v;
  v.number = std::abs(phase.theta_second_derivative) * delta_p * delta_p;
  v.valid = v.number < threshold;
  return v;
}

Reflection reflect_wavepacket(const BranchState<double>& incoming, const ExponentialBarrier& barrier,
                              double p0) {
  barrier.validate();
  const auto p = incoming.grid.momenta();
  const double total = incoming.norm_squared();
  const double backward = (p <= 0.0).select(incoming.amplitudes.abs2(), 0.0).sum() *
                          incoming.grid.spacing;
  if (backward >= 1e-12 * total) {
    std::ostringstream msg;
    msg << "reflect_wavepacket: " << backward / total
        << " of the norm sits at p <= 0 (must be < 1e-12)";
    throw ValidationError(msg.str());
  }

  Reflection out;
  out.exact = incoming;
  for (Eigen::Index j = 0; j < p.size(); ++j)
    out.exact.amplitudes(j) *= std::polar(1.0, 2.0 * theta_formula(p(j), barrier) + pi);
  out.exact.amplitudes = out.exact.amplitudes.reverse().eval();
  out.exact.grid.center = -out.exact.grid.center;

  const EffectiveMirror mirror = effective_mirror_position(p0, barrier);
  out.parity = apply_parity(incoming, mirror.position);
  out.parity.scalar_phase += pi + 2.0 * mirror.theta0;

  out.fidelity = std::abs(inner_product(out.parity, out.exact)) /
                 std::sqrt(out.parity.norm_squared() * out.exact.norm_squared());
  return out;
}

std::vector<CurveRow> figure2_curve(const ExponentialBarrier& barrier, double p0,
                                    double half_width, int samples, double recoil_momentum) {
  require(samples >= 2, "figure2_curve: need at least two samples");
  require(p0 > half_width && half_width > 0, "figure2_curve: window must stay at p > 0");
  require(recoil_momentum > 0, "figure2_curve: recoil momentum must be positive");
  const ScatterPhase anchor = theta_analytic(p0, barrier);
  const EffectiveMirror mirror = effective_mirror_position(p0, barrier);
  std::vector<CurveRow> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double p = p0 - half_width + 2.0 * half_width * i / (samples - 1);
    const double dp = p - p0;
    const double linear = mirror.theta0 + mirror.position * p / hbar;
    const double quadratic = linear + 0.5 * anchor.theta_second_derivative * dp * dp;
    rows.push_back({p / recoil_momentum, 2.0 * theta_formula(p, barrier), 2.0 * linear,
                    2.0 * quadratic});
  }
  return rows;
}

}  // namespace atomint
