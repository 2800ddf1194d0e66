#pragma once

// Operator-level MZI and SMI sequences acting on superpositions of branch
// states, plus the closed-form SMI pattern used as the cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "atomint/constants.hpp"
#include "atomint/error.hpp"
#include "atomint/momentum_state.hpp"
#include "atomint/types.hpp"

namespace atomint {

template <class Scalar>
using Superposition = std::vector<BranchState<Scalar>>;

inline constexpr double beamsplitter_area = std::numbers::pi / 4;
inline constexpr double mirror_area = std::numbers::pi / 2;

/// Merge branches that share an internal level and a momentum grid.
template <class Scalar>
Superposition<Scalar> coalesce(Superposition<Scalar> branches, Scalar tolerance = Scalar(1e-9)) {
  Superposition<Scalar> out;
  for (auto& b : branches) {
    auto same = std::find_if(out.begin(), out.end(), [&](const BranchState<Scalar>& o) {
      return o.level == b.level && o.grid.aligned_with(b.grid, tolerance);
    });
    if (same == out.end()) {
      out.push_back(std::move(b));
    } else {
      same->amplitudes += b.amplitudes * std::polar(Scalar(1), b.scalar_phase - same->scalar_phase);
    }
  }
  return out;
}

/// cos(theta) 1 - i sin(theta) [e^{+-i(kz + phi)} |e><g| + h.c.].
/// Components whose weight is exactly zero in exact arithmetic (cos(pi/2)) are dropped.
template <class Scalar>
Superposition<Scalar> apply_raman(const Superposition<Scalar>& in, Scalar area, Scalar k,
                                  Scalar phi, int momentum_sign) {
  require(momentum_sign == 1 || momentum_sign == -1, "apply_raman: momentum_sign must be +-1");
  using std::abs;
  using std::cos;
  using std::sin;
  const Scalar c = cos(area), s = sin(area);
  const Scalar zero_weight(1e-15);
  const Scalar hbar_k = Scalar(hbar) * k;
  Superposition<Scalar> out;
  for (const auto& b : in) {
    require(b.grid.spacing == in.front().grid.spacing,
            "apply_raman: branches have mismatched momentum spacing");
    if (abs(c) > zero_weight) {
      BranchState<Scalar> stay = b;
      stay.amplitudes *= c;
      out.push_back(std::move(stay));
    }
    if (abs(s) > zero_weight) {
      // g -> e carries e^{+-i(kz + phi)}, e -> g the conjugate.
      const int dir = b.level == InternalLevel::ground ? momentum_sign : -momentum_sign;
      BranchState<Scalar> flip = kick(b, Scalar(dir) * hbar_k);
      flip.amplitudes *= s;
      flip.scalar_phase += Scalar(dir) * phi - Scalar(std::numbers::pi / 2);
      flip.level = b.level == InternalLevel::ground ? InternalLevel::excited : InternalLevel::ground;
      out.push_back(std::move(flip));
    }
  }
  return coalesce(std::move(out));
}

/// M = -Pi(zeta_e)|e><e| - Pi(zeta_g)|g><g|.
template <class Scalar>
BranchState<Scalar> apply_mirror(const BranchState<Scalar>& branch, Scalar zeta_e, Scalar zeta_g) {
  auto out = apply_parity(branch, branch.level == InternalLevel::excited ? zeta_e : zeta_g);
  out.scalar_phase += Scalar(std::numbers::pi);
  return out;
}

/// Pair form: the upper branch must be in |e>, the lower in |g>.
template <class Scalar>
std::pair<BranchState<Scalar>, BranchState<Scalar>> apply_mirror(const BranchState<Scalar>& upper,
                                                                 const BranchState<Scalar>& lower,
                                                                 Scalar zeta_e, Scalar zeta_g) {
  require(upper.level == InternalLevel::excited, "apply_mirror: upper branch must be in |e>");
  require(lower.level == InternalLevel::ground, "apply_mirror: lower branch must be in |g>");
  return {apply_mirror(upper, zeta_e, zeta_g), apply_mirror(lower, zeta_e, zeta_g)};
}

/// Probability of finding the superposition in `port`. All branches in the port
/// must share one grid; anything else is reported as momentum-open.
template <class Scalar>
Scalar port_probability(const Superposition<Scalar>& branches, InternalLevel port,
                        Scalar tolerance = Scalar(1e-9)) {
  const BranchState<Scalar>* reference = nullptr;
  typename BranchState<Scalar>::Amplitudes sum;
  for (const auto& b : branches) {
    if (b.level != port) continue;
    if (reference == nullptr) {
      reference = &b;
      sum = b.amplitudes;
      continue;
    }
    if (!reference->grid.aligned_with(b.grid, tolerance)) {
      throw MomentumOpenError(
          "momentum-open interferometer: branches reach the output port on different momentum "
          "grids");
    }
    sum += b.amplitudes * std::polar(Scalar(1), b.scalar_phase - reference->scalar_phase);
  }
  if (reference == nullptr) return Scalar(0);
  return sum.abs2().sum() * reference->grid.spacing;
}

struct WavePacket {
  double p_center = 0.0;  ///< kg m/s
  double delta_p = 0.0;   ///< momentum standard deviation, kg m/s
  double z_center = 0.0;  ///< m

  bool operator==(const WavePacket&) const = default;
};

/// Physical parameters of one interferometer run.
struct InterferometerSetup {
  AtomSpecies species = rubidium87();
  double k = rb87::raman_wavenumber;  ///< 1/m
  double g = 9.81;                    ///< m/s^2
  double T = 0.01;                    ///< s
  double phi0 = 0.0, phiT = 0.0, phi2T = 0.0;
  double zeta_e = 0.0, zeta_g = 0.0;  ///< SMI mirror heights, m
  WavePacket packet;
  GridSpec grid;
  bool clock_phase = false;
  Diffraction diffraction = Diffraction::raman;
  GravityOrdering ordering = GravityOrdering::kick_last;

  bool operator==(const InterferometerSetup&) const = default;

  /// omega entering the propagators: zero unless the clock phase is requested
  /// for Raman diffraction.
  double effective_omega() const {
    return clock_phase && diffraction == Diffraction::raman ? species.internal_splitting : 0.0;
  }
  /// Z = zeta_e - zeta_g - hbar k T / m.
  double mirror_mismatch() const { return zeta_e - zeta_g - hbar * k * T / species.mass; }
};

/// Canonical set-up: z(0) = 0, p(0) = hbar k / 2, mirrors at the classical heights.
inline InterferometerSetup canonical_interferometer(double T, double g = 9.81,
                                                    double k = rb87::raman_wavenumber) {
  InterferometerSetup s;
  s.k = k;
  s.g = g;
  s.T = T;
  s.packet = {hbar * k / 2, 0.05 * rb87::recoil_momentum, 0.0};
  const double recoil_velocity = hbar * k / s.species.mass;
  s.zeta_g = (s.packet.p_center / s.species.mass - recoil_velocity) * T - g * T * T / 2;
  s.zeta_e = s.zeta_g + recoil_velocity * T;
  return s;
}

struct PortProbabilities {
  double excited = 0.0;
  double ground = 0.0;

  double at(InternalLevel port) const { return port == InternalLevel::excited ? excited : ground; }
};

/// Output port that carries the standard fringe of each geometry.
constexpr InternalLevel signal_port(Geometry geometry) {
  return geometry == Geometry::mzi ? InternalLevel::excited : InternalLevel::ground;
}

template <class Scalar = double>
BranchState<Scalar> initial_state(const InterferometerSetup& s) {
  return make_gaussian<Scalar>(Scalar(s.packet.p_center), Scalar(s.packet.delta_p),
                               Scalar(s.packet.z_center), s.grid, InternalLevel::excited);
}

/// Superposition after the final pulse. The laboratory run uses U(T) in the
/// gravitational field; the freely-falling run uses free evolution with
/// displaced pulses and mirrors, then maps back with D(zeta_2T, wp_2T) and the
/// cubic phase so that both runs describe the same laboratory state.
template <class Scalar = double>
Superposition<Scalar> run_sequence(const InterferometerSetup& s, Geometry geometry, Frame frame) {
  require(s.T > 0, "run_sequence: T must be positive");
  require(s.species.mass > 0, "run_sequence: mass must be positive");
  const Scalar m(s.species.mass), g(s.g), k(s.k), T(s.T), omega(s.effective_omega());
  const bool falling = frame == Frame::freely_falling;
  auto zeta_at = [&](Scalar t) { return -g * t * t / 2; };
  auto wp_at = [&](Scalar t) { return -m * g * t; };
  auto laser_phase = [&](double phi, Scalar t) {
    return falling ? Scalar(phi) + k * zeta_at(t) : Scalar(phi);
  };
  auto propagate = [&](Superposition<Scalar> in) {
    for (auto& b : in)
      b = falling ? evolve_free(std::move(b), T, m, omega)
                  : evolve_gravity(std::move(b), T, g, m, omega, s.ordering);
    return in;
  };

  Superposition<Scalar> state{initial_state<Scalar>(s)};
  state = apply_raman(state, Scalar(beamsplitter_area), k, laser_phase(s.phi0, Scalar(0)), +1);
  state = propagate(std::move(state));
  if (geometry == Geometry::mzi) {
    state = apply_raman(state, Scalar(mirror_area), k, laser_phase(s.phiT, T), +1);
  } else {
    const Scalar zeta_e(s.zeta_e), zeta_g(s.zeta_g);
    for (auto& b : state) {
      if (falling) {
        const Scalar zeta = b.level == InternalLevel::excited ? zeta_e : zeta_g;
        b = apply_parity_falling(std::move(b), zeta, zeta_at(T), wp_at(T));
        b.scalar_phase += Scalar(std::numbers::pi);
      } else {
        b = apply_mirror(b, zeta_e, zeta_g);
      }
    }
  }
  state = propagate(std::move(state));
  const int final_sign = geometry == Geometry::mzi ? +1 : -1;
  state = apply_raman(state, Scalar(beamsplitter_area), k, laser_phase(s.phi2T, 2 * T), final_sign);

  if (falling) {
    const Scalar t2 = 2 * T;
    const Scalar cubic = m * g * g * t2 * t2 * t2 / (12 * Scalar(hbar));
    for (auto& b : state) {
      b = apply_displacement(std::move(b), zeta_at(t2), wp_at(t2));
      b.scalar_phase += cubic;
    }
  }
  return state;
}

template <class Scalar = double>
PortProbabilities port_probabilities(const Superposition<Scalar>& state) {
  return {static_cast<double>(port_probability(state, InternalLevel::excited)),
          static_cast<double>(port_probability(state, InternalLevel::ground))};
}

/// R+_B(0) U(T) R+_M(T) U(T) R+_B(2T) starting in |e>.
template <class Scalar = double>
PortProbabilities run_mzi(const InterferometerSetup& s, Frame frame = Frame::laboratory) {
  return port_probabilities(run_sequence<Scalar>(s, Geometry::mzi, frame));
}

/// R+_B(0) U(T) M(zeta_e, zeta_g) U(T) R-_B(2T) starting in |e>.
template <class Scalar = double>
PortProbabilities run_smi_direct(const InterferometerSetup& s) {
  return port_probabilities(run_sequence<Scalar>(s, Geometry::smi, Frame::laboratory));
}

template <class Scalar = double>
PortProbabilities run_in_freefall_frame(const InterferometerSetup& s, Geometry geometry) {
  return port_probabilities(run_sequence<Scalar>(s, geometry, Frame::freely_falling));
}

/// phi~ = phi_+ - k g T^2 + 2 k zeta_g + hbar k^2 T / m.
template <class Scalar = double>
Scalar smi_closed_form_phase(const InterferometerSetup& s) {
  const Scalar k(s.k), T(s.T);
  return (Scalar(s.phi0) + Scalar(s.phi2T)) - k * Scalar(s.g) * T * T + 2 * k * Scalar(s.zeta_g) +
         Scalar(hbar) * k * k * T / Scalar(s.species.mass);
}

/// P_g = 1/2 + 1/4 <psi| e^{-2i omega T} e^{i phi~} e^{2i(p - mgT)Z/hbar} |psi> + c.c.
template <class Scalar>
PortProbabilities run_smi_closed_form(const InterferometerSetup& s, const BranchState<Scalar>& psi) {
  const Scalar Z = Scalar(s.zeta_e) - Scalar(s.zeta_g) -
                   Scalar(hbar) * Scalar(s.k) * Scalar(s.T) / Scalar(s.species.mass);
  const Scalar alpha = 2 * Z / Scalar(hbar);
  const Scalar shift = Scalar(s.species.mass) * Scalar(s.g) * Scalar(s.T);
  const Scalar phase = smi_closed_form_phase<Scalar>(s) - 2 * Scalar(s.effective_omega()) * Scalar(s.T) -
                       alpha * shift;
  const std::complex<Scalar> expectation =
      momentum_characteristic(psi, alpha) * std::polar(Scalar(1), phase) / psi.norm_squared();
  const double ground = 0.5 + 0.5 * static_cast<double>(expectation.real());
  return {1.0 - ground, ground};
}

template <class Scalar = double>
PortProbabilities run_smi_closed_form(const InterferometerSetup& s) {
  return run_smi_closed_form(s, initial_state<Scalar>(s));
}

}  // namespace atomint
