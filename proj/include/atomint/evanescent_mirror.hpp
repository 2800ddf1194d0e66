#pragma once

// Reflection of a matter wave from the exponential potential V0 exp[2(z - s)/lambda].
//
// Far from the barrier psi(z) ~ exp(ipz/hbar) - exp(2i theta) exp(-ipz/hbar) with
//   theta(p) = arg Gamma(1 + i p lambda / hbar) - [ln(kappa lambda / 2) - s / lambda] p lambda / hbar.
// theta_numeric integrates the Schroedinger equation directly and is kept
// independent of the Gamma-function route.

#include <optional>
#include <vector>

#include "atomint/constants.hpp"
#include "atomint/momentum_state.hpp"

namespace atomint {

struct ExponentialBarrier {
  double strength = 0.0;      ///< V0, J
  double decay_length = 0.0;  ///< lambda, m
  double location = 0.0;      ///< s, m
  double mass = 0.0;          ///< kg

  /// kappa = sqrt(2 m V0) / hbar, 1/m.
  double kappa() const;
  void validate() const;

  bool operator==(const ExponentialBarrier&) const = default;
};

struct ScatterPhase {
  double momentum = 0.0;
  double theta = 0.0;                     ///< rad
  double vartheta = 0.0;                  ///< arg Gamma(1 + i p lambda / hbar), rad
  double vartheta_derivative = 0.0;       ///< d vartheta / dp, s/(kg m)
  double theta_second_derivative = 0.0;   ///< d^2 theta / dp^2
};

struct EffectiveMirror {
  double position = 0.0;  ///< zeta_eff, m
  double theta0 = 0.0;    ///< rad
  double p0 = 0.0;        ///< kg m/s
};

/// Parameters behind the published evanescent-mirror phase curve: 87Rb at
/// ten D2 recoils, lambda = 10 nm, V0 = 20 E0, s = 0, width 0.05 recoils.
struct MirrorScenario {
  ExponentialBarrier barrier;
  double p0 = 0.0;
  double delta_p0 = 0.0;
  double recoil_momentum = 0.0;
};
MirrorScenario reference_mirror_scenario();

/// Strength V0 = ratio * p0^2 / (2 m).
double barrier_strength_for(double p0, double mass, double ratio);

/// arg Gamma(1 + iy) and its first two derivatives in y by five-point central
/// differences. `step` is the finite-difference step in y.
double vartheta_of_y(double y);
double vartheta_y_derivative(double y, double step = 1e-3);
double vartheta_y_second_derivative(double y, double step = 4e-3);

ScatterPhase theta_analytic(double p, const ExponentialBarrier& barrier);

/// theta with no positivity check, for wave-packet tails.
double theta_formula(double p, const ExponentialBarrier& barrier);

struct NumerovControls {
  std::optional<double> z_min;  ///< default: potential <= 1e-12 (p/hbar)^2
  std::optional<double> z_max;  ///< default: s + lambda ln(max(1e3 q / kappa, 10))
  double initial_step_factor = 0.05;  ///< h0 = factor / max(sqrt(V_max), q)
  double tolerance = 1e-10;           ///< rad, between successive halvings
  int max_refinements = 12;
};

struct NumerovResult {
  double theta = 0.0;  ///< in (-pi/2, pi/2]
  double step = 0.0;
  int refinements = 0;
  double z_min = 0.0, z_max = 0.0;
};

/// -psi'' + kappa^2 e^{2(z-s)/lambda} psi = (p/hbar)^2 psi, integrated inward
/// from the decaying solution inside the barrier with a fixed-step Numerov scheme,
/// halving the step until theta moves by less than the tolerance.
NumerovResult theta_numeric(double p, const ExponentialBarrier& barrier,
                            const NumerovControls& controls = {});

/// a - b reduced to (-pi/2, pi/2]: theta is only defined modulo pi.
double phase_distance_mod_pi(double a, double b);

EffectiveMirror effective_mirror_position(double p0, const ExponentialBarrier& barrier);

inline constexpr double default_validity_threshold = 0.1;

struct Validity {
  double number = 0.0;  ///< |theta''(p0)| dp^2
  bool valid = false;
};
Validity quadratic_validity(double p0, double delta_p, const ExponentialBarrier& barrier,
                            double threshold = default_validity_threshold);

enum class ReflectionMode { exact, parity_approx };

struct Reflection {
  BranchState<double> exact;
  BranchState<double> parity;
  double fidelity = 0.0;  ///< |<parity|exact>| for normalised states

  const BranchState<double>& outgoing(ReflectionMode mode) const {
    return mode == ReflectionMode::exact ? exact : parity;
  }
};

/// Exact: amplitude at p goes to -p times -exp(2 i theta(p)).
/// Parity: -exp(2 i theta0) Pi(zeta_eff) with the effective mirror at p0.
Reflection reflect_wavepacket(const BranchState<double>& incoming, const ExponentialBarrier& barrier,
                              double p0);

struct CurveRow {
  double p_over_recoil = 0.0;
  double two_theta = 0.0;
  double two_theta_linear = 0.0;
  double two_theta_quadratic = 0.0;
};

/// 2 theta(p), the first-order expansion 2(theta0 + zeta p / hbar) and the
/// second-order expansion on `samples` points across p0 +- half_width.
std::vector<CurveRow> figure2_curve(const ExponentialBarrier& barrier, double p0,
                                    double half_width, int samples, double recoil_momentum);

}  // namespace atomint
