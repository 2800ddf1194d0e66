#pragma once

// Momentum-space branch wavefunctions on affine grids. Momentum kicks and the
// gravitational drift move the grid centre instead of resampling, and every
// position-dependent operator is an exact diagonal phase.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Core>

#include "atomint/constants.hpp"
#include "atomint/error.hpp"
#include "atomint/types.hpp"

namespace atomint {

/// Samples p_j = center + (j - (N - 1) / 2) dp, j = 0 .. N-1. Storing the centre
/// keeps the grid exactly symmetric under p -> -p.
template <class Scalar>
struct MomentumGrid {
  Scalar center{};
  Scalar spacing{};
  Eigen::Index count = 0;

  Scalar momentum(Eigen::Index j) const {
    return center + (Scalar(j) - Scalar(count - 1) / 2) * spacing;
  }
  Scalar offset() const { return momentum(0); }
  Scalar lowest() const { return momentum(0); }
  Scalar highest() const { return momentum(count - 1); }

  Eigen::Array<Scalar, Eigen::Dynamic, 1> momenta() const {
    using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    return Vec::LinSpaced(count, Scalar(0), Scalar(count - 1))
        .unaryExpr([this](Scalar j) { return center + (j - Scalar(count - 1) / 2) * spacing; });
  }

  /// Same spacing and count, centres within tolerance * spacing.
  bool aligned_with(const MomentumGrid& other, Scalar tolerance = Scalar(1e-9)) const {
    using std::abs;
    return count == other.count && abs(spacing - other.spacing) <= Scalar(1e-12) * spacing &&
           abs(center - other.center) <= tolerance * spacing;
  }
  bool overlaps(const MomentumGrid& other) const {
    return !(highest() < other.lowest() || other.highest() < lowest());
  }
};

template <class Scalar>
struct BranchState {
  using Complex = std::complex<Scalar>;
  using Amplitudes = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  InternalLevel level = InternalLevel::excited;
  MomentumGrid<Scalar> grid;
  Amplitudes amplitudes;
  Scalar scalar_phase{};  ///< global factor exp(i scalar_phase), rad

  Scalar norm_squared() const { return amplitudes.abs2().sum() * grid.spacing; }

  /// Amplitudes with the scalar phase folded in.
  Amplitudes resolved() const { return amplitudes * std::polar(Scalar(1), scalar_phase); }
};

struct GridSpec {
  Eigen::Index count = 4096;
  double span_sigmas = 8.0;  ///< grid covers p_center +- span_sigmas * delta_p

  bool operator==(const GridSpec&) const = default;
};

namespace detail {
template <class Scalar, class PhaseFn>
typename BranchState<Scalar>::Amplitudes diagonal_phase(const MomentumGrid<Scalar>& grid,
                                                        PhaseFn phase) {
  return grid.momenta().unaryExpr([&](Scalar p) { return std::polar(Scalar(1), phase(p)); });
}
}  // namespace detail

/// psi(p) proportional to exp[-(p - p_c)^2 / (4 dp^2)] exp(-i p z_c / hbar),
/// normalised so that sum |a|^2 dp = 1. delta_p is the momentum standard deviation.
template <class Scalar = double>
BranchState<Scalar> make_gaussian(Scalar p_center, Scalar delta_p, Scalar z_center,
                                  const GridSpec& spec,
                                  InternalLevel level = InternalLevel::excited) {
  using std::exp;
  require(delta_p > 0, "make_gaussian: delta_p must be positive");
  require(spec.count >= 2, "make_gaussian: grid needs at least two samples");
  const Scalar span = Scalar(spec.span_sigmas) * delta_p;
  const Scalar spacing = 2 * span / Scalar(spec.count);
  if (spec.span_sigmas < 5.0) {
    std::ostringstream msg;
    msg << "make_gaussian: grid too narrow, spans +-" << spec.span_sigmas
        << " delta_p around p_center (need >= 5)";
    throw ValidationError(msg.str());
  }
  if (spacing > delta_p / 8) {
    std::ostringstream msg;
    msg << "make_gaussian: grid too coarse, dp = " << static_cast<double>(spacing / delta_p)
        << " delta_p (need <= 1/8); increase count";
    throw ValidationError(msg.str());
  }

  BranchState<Scalar> state;
  state.level = level;
  state.grid = {p_center, spacing, spec.count};
  const Scalar inv_hbar = Scalar(1) / Scalar(hbar);
  const auto p = state.grid.momenta();
  state.amplitudes = p.unaryExpr([&](Scalar q) {
    const Scalar x = (q - p_center) / delta_p;
    return std::polar(exp(-x * x / 4), -q * z_center * inv_hbar);
  });
  using std::sqrt;
  state.amplitudes /= Scalar(sqrt(state.norm_squared()));
  return state;
}

/// exp(i dp z / hbar): shifts the grid by dp.
template <class Scalar>
BranchState<Scalar> kick(BranchState<Scalar> state, Scalar momentum_change) {
  state.grid.center += momentum_change;
  return state;
}

template <class Scalar>
BranchState<Scalar> add_phase(BranchState<Scalar> state, Scalar phase) {
  state.scalar_phase += phase;
  return state;
}

/// Pi(zeta) = int dp exp(2 i p zeta / hbar) |-p><p|.
template <class Scalar>
BranchState<Scalar> apply_parity(BranchState<Scalar> state, Scalar zeta) {
  const Scalar factor = 2 * zeta / Scalar(hbar);
  state.amplitudes =
      (state.amplitudes * detail::diagonal_phase(state.grid, [&](Scalar p) { return factor * p; }))
          .reverse()
          .eval();
  state.grid.center = -state.grid.center;
  return state;
}

/// Parity seen from the freely-falling frame:
/// int dp exp[2 i (p + wp_t)(zeta - zeta_t) / hbar] |-p - 2 wp_t><p|.
template <class Scalar>
BranchState<Scalar> apply_parity_falling(BranchState<Scalar> state, Scalar zeta, Scalar zeta_t,
                                         Scalar wp_t) {
  const Scalar factor = 2 * (zeta - zeta_t) / Scalar(hbar);
  state.amplitudes = (state.amplitudes * detail::diagonal_phase(state.grid, [&](Scalar p) {
                        return factor * (p + wp_t);
                      }))
                         .reverse()
                         .eval();
  state.grid.center = -state.grid.center - 2 * wp_t;
  return state;
}

/// D(zeta, wp) = exp[i (wp z - zeta p) / hbar]
///            = exp(i wp z / hbar) exp(-i zeta p / hbar) exp(-i zeta wp / (2 hbar)).
template <class Scalar>
BranchState<Scalar> apply_displacement(BranchState<Scalar> state, Scalar zeta, Scalar wp) {
  const Scalar inv_hbar = Scalar(1) / Scalar(hbar);
  state.amplitudes *= detail::diagonal_phase(state.grid, [&](Scalar p) { return -zeta * p * inv_hbar; });
  state.grid.center += wp;
  state.scalar_phase -= zeta * wp * inv_hbar / 2;
  return state;
}

/// Internal-energy phase -+ omega t / 2 for |e> / |g>.
template <class Scalar>
Scalar clock_phase(InternalLevel level, Scalar omega, Scalar t) {
  return level == InternalLevel::excited ? -omega * t / 2 : omega * t / 2;
}

/// Two equivalent factorisations of exp{-i [p^2/2m + m g z] t / hbar}.
enum class GravityOrdering {
  kick_last,   ///< e^{-imgzt} e^{-ip^2t/2m} e^{igt^2p/2} e^{-img^2t^3/6}
  kick_first,  ///< e^{-ip^2t/2m} e^{-igt^2p/2} e^{-imgzt} e^{-img^2t^3/6}
};

/// Time evolution in the linear gravitational potential. omega = 0 disables
/// the internal-energy phase.
template <class Scalar>
BranchState<Scalar> evolve_gravity(BranchState<Scalar> state, Scalar t, Scalar g, Scalar mass,
                                   Scalar omega = Scalar(0),
                                   GravityOrdering ordering = GravityOrdering::kick_last) {
  require(t >= 0, "evolve_gravity: t must be non-negative");
  require(mass > 0, "evolve_gravity: mass must be positive");
  const Scalar inv_hbar = Scalar(1) / Scalar(hbar);
  const Scalar kinetic = t / (2 * mass) * inv_hbar;
  const Scalar linear = g * t * t / 2 * inv_hbar;
  const Scalar drift = -mass * g * t;
  state.scalar_phase -= mass * g * g * t * t * t / 6 * inv_hbar;
  if (ordering == GravityOrdering::kick_last) {
    state.amplitudes *= detail::diagonal_phase(
        state.grid, [&](Scalar p) { return p * linear - p * p * kinetic; });
    state.grid.center += drift;
  } else {
    state.grid.center += drift;
    state.amplitudes *= detail::diagonal_phase(
        state.grid, [&](Scalar p) { return -p * linear - p * p * kinetic; });
  }
  state.scalar_phase += clock_phase(state.level, omega, t);
  return state;
}

/// Force-free evolution exp(-i p^2 t / (2 m hbar)) plus the internal-energy phase.
template <class Scalar>
BranchState<Scalar> evolve_free(BranchState<Scalar> state, Scalar t, Scalar mass,
                                Scalar omega = Scalar(0)) {
  require(t >= 0, "evolve_free: t must be non-negative");
  const Scalar kinetic = t / (2 * mass * Scalar(hbar));
  state.amplitudes *= detail::diagonal_phase(state.grid, [&](Scalar p) { return -p * p * kinetic; });
  state.scalar_phase += clock_phase(state.level, omega, t);
  return state;
}

/// <a|b>. Both states must live on aligned grids.
template <class Scalar>
std::complex<Scalar> inner_product(const BranchState<Scalar>& a, const BranchState<Scalar>& b,
                                   Scalar tolerance = Scalar(1e-9)) {
  if (!a.grid.aligned_with(b.grid, tolerance)) {
    std::ostringstream msg;
    msg << "momentum-open interferometer: grid centres differ by "
        << static_cast<double>((a.grid.center - b.grid.center) / a.grid.spacing)
        << " dp at recombination";
    throw MomentumOpenError(msg.str());
  }
  const std::complex<Scalar> overlap = (a.amplitudes.conjugate() * b.amplitudes).sum();
  return overlap * a.grid.spacing * std::polar(Scalar(1), b.scalar_phase - a.scalar_phase);
}

template <class Scalar>
Scalar mean_momentum(const BranchState<Scalar>& state) {
  return (state.amplitudes.abs2() * state.grid.momenta()).sum() * state.grid.spacing /
         state.norm_squared();
}

/// sum |a(p)|^2 exp(i alpha p) dp, i.e. <psi| exp(i alpha p) |psi>.
template <class Scalar>
std::complex<Scalar> momentum_characteristic(const BranchState<Scalar>& state, Scalar alpha) {
  const auto phases = detail::diagonal_phase(state.grid, [&](Scalar p) { return alpha * p; });
  return (state.amplitudes.abs2().template cast<std::complex<Scalar>>() * phases).sum() *
         state.grid.spacing;
}

/// max_j |a_j - b_j| / max_j |a_j| using resolved amplitudes on aligned grids.
template <class Scalar>
Scalar max_relative_difference(const BranchState<Scalar>& a, const BranchState<Scalar>& b,
                               Scalar tolerance = Scalar(1e-9)) {
  require(a.grid.aligned_with(b.grid, tolerance), "max_relative_difference: grids differ");
  return (a.resolved() - b.resolved()).abs().maxCoeff() / a.amplitudes.abs().maxCoeff();
}

}  // namespace atomint
