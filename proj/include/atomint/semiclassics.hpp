#pragma once

// Classical branch trajectories and the four-way action budget of light-pulse
// interferometers. Every integral is evaluated in closed form on the parabolic
// segments between events, so the only error is floating-point rounding.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "atomint/constants.hpp"
#include "atomint/error.hpp"
#include "atomint/types.hpp"

namespace atomint {

enum class PulseKind { beamsplitter, mirror };

/// Laser pulse as seen by one branch. `direction` is the sign of the momentum
/// transfer on this branch; pulses that leave the branch untouched are omitted.
template <class Scalar>
struct PulseEvent {
  Scalar time{};
  int direction = +1;
  Scalar wavenumber{};   ///< effective two-photon k, 1/m
  Scalar laser_phase{};  ///< rad
  PulseKind kind = PulseKind::beamsplitter;
  int momentum_sign = +1;  ///< R_+ or R_- family of the pulse
};

/// Specular reflection v -> -v + extra_kick / m at a mirror located at `position`.
/// `extra_kick` is zero in the laboratory frame and 2 m g t for a mirror
/// accelerating upward relative to a freely-falling observer.
template <class Scalar>
struct MirrorEvent {
  Scalar time{};
  Branch branch = Branch::upper;
  Scalar position{};
  Scalar extra_kick{};
};

template <class Scalar>
using Event = std::variant<PulseEvent<Scalar>, MirrorEvent<Scalar>>;

template <class Scalar>
Scalar event_time(const Event<Scalar>& event) {
  return std::visit([](const auto& e) { return e.time; }, event);
}

/// z(t) = z0 + v0 (t - t0) - a (t - t0)^2 / 2 on [t0, t1].
template <class Scalar>
struct Segment {
  Scalar t0{}, t1{}, z0{}, v0{}, gravity{};

  Scalar position(const Scalar& t) const {
    const Scalar tau = t - t0;
    return z0 + v0 * tau - gravity * tau * tau / 2;
  }
  Scalar velocity(const Scalar& t) const { return v0 - gravity * (t - t0); }

  /// Antiderivatives of v^2 and z over the full segment.
  Scalar integral_v_squared() const {
    const Scalar d = t1 - t0;
    return v0 * v0 * d - v0 * gravity * d * d + gravity * gravity * d * d * d / 3;
  }
  Scalar integral_z() const {
    const Scalar d = t1 - t0;
    return z0 * d + v0 * d * d / 2 - gravity * d * d * d / 6;
  }
};

template <class Scalar>
struct Kick {
  Scalar time{};
  Scalar momentum_change{};  ///< direction * hbar k
  Scalar imprinted_phase{};  ///< direction * laser phase
  Scalar position{};         ///< z(t_j)
};

template <class Scalar>
struct BranchPath {
  std::vector<Segment<Scalar>> segments;
  std::vector<Kick<Scalar>> kicks;

  const Segment<Scalar>& segment_at(const Scalar& t) const {
    for (const auto& s : segments)
      if (t <= s.t1) return s;
    return segments.back();
  }
  Scalar position(const Scalar& t) const { return segment_at(t).position(t); }
  Scalar velocity(const Scalar& t) const { return segment_at(t).velocity(t); }
  Scalar final_position() const { return segments.back().position(segments.back().t1); }
  Scalar final_velocity() const { return segments.back().velocity(segments.back().t1); }
};

/// Action integrals in J s. Their sum divided by hbar is the branch phase.
template <class Scalar>
struct ActionBudget {
  Scalar kinetic{};
  Scalar gravitational{};
  Scalar kick{};
  Scalar phase{};

  Scalar total() const { return kinetic + gravitational + kick + phase; }
  Scalar proper_time_part() const { return kinetic + gravitational; }

  friend ActionBudget operator-(const ActionBudget& a, const ActionBudget& b) {
    return {a.kinetic - b.kinetic, a.gravitational - b.gravitational, a.kick - b.kick,
            a.phase - b.phase};
  }
};

/// Piecewise-parabolic trajectory through an ordered event list.
template <class Scalar>
BranchPath<Scalar> propagate_branch(Scalar z0, Scalar v0, Scalar gravity, Scalar mass,
                                    const std::vector<Event<Scalar>>& events, Scalar t_end) {
  require(mass > 0, "propagate_branch: mass must be positive");
  require(t_end >= 0, "propagate_branch: t_end must be non-negative");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Scalar t = event_time(events[i]);
    require(t >= 0 && t <= t_end, "propagate_branch: event outside [0, t_end]");
    if (i > 0) {
      const Scalar prev = event_time(events[i - 1]);
      require(!(t < prev), "propagate_branch: events are not sorted by time");
      require(t != prev, "propagate_branch: two events at the same instant");
    }
  }

  const Scalar reduced_hbar(hbar);
  BranchPath<Scalar> path;
  Scalar t = 0, z = z0, v = v0;
  auto advance_to = [&](const Scalar& t_next) {
    if (t_next > t || path.segments.empty()) {
      Segment<Scalar> seg{t, t_next, z, v, gravity};
      path.segments.push_back(seg);
      z = seg.position(t_next);
      v = seg.velocity(t_next);
      t = t_next;
    }
  };

  for (const auto& event : events) {
    const Scalar te = event_time(event);
    if (te > t) advance_to(te);
    std::visit(
        [&](const auto& e) {
          using E = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<E, PulseEvent<Scalar>>) {
            const Scalar dp = Scalar(e.direction) * reduced_hbar * e.wavenumber;
            path.kicks.push_back({te, dp, Scalar(e.direction) * e.laser_phase, z});
            v += dp / mass;
          } else {
            v = -v + e.extra_kick / mass;
          }
        },
        event);
  }
  advance_to(t_end);
  return path;
}

/// S_kin = int m v^2 / 2, S_grav = -int m g z, S_kick = sum dp_j z(t_j),
/// S_phase = sum hbar (+-phi_j). Mirrors contribute only through the trajectory.
template <class Scalar>
ActionBudget<Scalar> action_budget(const BranchPath<Scalar>& path, Scalar gravity, Scalar mass) {
  ActionBudget<Scalar> budget;
  for (const auto& seg : path.segments) {
    budget.kinetic += mass * seg.integral_v_squared() / 2;
    budget.gravitational -= mass * gravity * seg.integral_z();
  }
  const Scalar reduced_hbar(hbar);
  for (const auto& kick : path.kicks) {
    budget.kick += kick.momentum_change * kick.position;
    budget.phase += reduced_hbar * kick.imprinted_phase;
  }
  return budget;
}

/// phi_g = k g T^2.
template <class Scalar>
Scalar gravity_phase(Scalar k, Scalar g, Scalar T) {
  return k * g * T * T;
}

/// Delta phi - k g T^2 with Delta phi = phi_0 - 2 phi_T + phi_2T.
template <class Scalar>
Scalar phase_mzi(Scalar k, Scalar g, Scalar T, Scalar phi0, Scalar phiT, Scalar phi2T) {
  require(T > 0, "phase_mzi: T must be positive");
  return (phi0 - 2 * phiT + phi2T) - gravity_phase(k, g, T);
}

/// phi_+ - 2 k g T^2 with phi_+ = phi_0 + phi_2T.
template <class Scalar>
Scalar phase_smi(Scalar k, Scalar g, Scalar T, Scalar phi0, Scalar phi2T) {
  require(T > 0, "phase_smi: T must be positive");
  return (phi0 + phi2T) - 2 * gravity_phase(k, g, T);
}

/// [(S_kin + S_grav)_upper - (S_kin + S_grav)_lower] / hbar.
template <class Scalar>
Scalar proper_time_signature(const ActionBudget<Scalar>& upper, const ActionBudget<Scalar>& lower) {
  return (upper.proper_time_part() - lower.proper_time_part()) / Scalar(hbar);
}

/// Laser phases pick up -k g t^2 / 2; mirrors move to zeta - zeta_t with
/// zeta_t = -g t^2 / 2 and gain the reflection kick -2 wp_t = 2 m g t.
template <class Scalar>
std::vector<Event<Scalar>> to_freely_falling(const std::vector<Event<Scalar>>& events,
                                             Scalar gravity, Scalar mass) {
  std::vector<Event<Scalar>> out;
  out.reserve(events.size());
  for (const auto& event : events) {
    std::visit(
        [&](auto e) {
          using E = std::decay_t<decltype(e)>;
          const Scalar t = e.time;
          const Scalar zeta_t = -gravity * t * t / 2;
          if constexpr (std::is_same_v<E, PulseEvent<Scalar>>) {
            e.laser_phase += e.wavenumber * zeta_t;
          } else {
            e.position -= zeta_t;
            e.extra_kick += 2 * mass * gravity * t;
          }
          out.push_back(e);
        },
        event);
  }
  return out;
}

template <class Scalar>
struct MirrorPositions {
  Scalar lower{};  ///< zeta_g
  Scalar upper{};  ///< zeta_e
};

/// Heights of the two branches at t = T, i.e. where specular mirrors must sit
/// for the SMI to close in phase space. The lower branch carries -hbar k.
template <class Scalar>
MirrorPositions<Scalar> classical_mirror_positions(Scalar z0, Scalar v0, Scalar g, Scalar T,
                                                   Scalar k, Scalar mass) {
  require(T > 0, "classical_mirror_positions: T must be positive");
  const Scalar recoil_velocity = Scalar(hbar) * k / mass;
  const Scalar lower = z0 + (v0 - recoil_velocity) * T - g * T * T / 2;
  return {lower, lower + recoil_velocity * T};
}

/// Everything needed to lay out an MZI or SMI in the classical picture.
template <class Scalar>
struct ClassicalSetup {
  Scalar mass{};
  Scalar k{};
  Scalar g{};
  Scalar T{};
  Scalar phi0{}, phiT{}, phi2T{};
  Scalar z0{}, v0{};
  Scalar zeta_upper{}, zeta_lower{};  ///< SMI mirror heights
};

template <class Scalar>
ClassicalSetup<Scalar> canonical_setup(Scalar mass, Scalar k, Scalar g, Scalar T) {
  ClassicalSetup<Scalar> s;
  s.mass = mass;
  s.k = k;
  s.g = g;
  s.T = T;
  s.z0 = 0;
  s.v0 = Scalar(hbar) * k / (2 * mass);
  const auto mirrors = classical_mirror_positions(s.z0, s.v0, g, T, k, mass);
  s.zeta_upper = mirrors.upper;
  s.zeta_lower = mirrors.lower;
  return s;
}

template <class Scalar>
struct BranchSequence {
  Branch branch = Branch::upper;
  std::vector<Event<Scalar>> events;
};

/// Per-branch event lists for the given geometry and output port. Starting
/// from |e>, the MZI pulse sequence is R+(0) R+(T) R+(2T); the SMI replaces the
/// middle pulse by two mirrors and reverses the final pulse, R-(2T).
template <class Scalar>
std::array<BranchSequence<Scalar>, 2> interferometer_sequence(Geometry geometry,
                                                               const ClassicalSetup<Scalar>& s,
                                                               InternalLevel port) {
  require(s.T > 0, "interferometer_sequence: T must be positive");
  using Pulse = PulseEvent<Scalar>;
  using Mirror = MirrorEvent<Scalar>;
  const Scalar T = s.T, T2 = 2 * s.T;
  BranchSequence<Scalar> upper{Branch::upper, {}}, lower{Branch::lower, {}};

  // Both geometries: lower branch leaves |e> with -hbar k at t = 0.
  lower.events.push_back(Pulse{Scalar(0), -1, s.k, s.phi0, PulseKind::beamsplitter, +1});

  if (geometry == Geometry::mzi) {
    upper.events.push_back(Pulse{T, -1, s.k, s.phiT, PulseKind::mirror, +1});
    lower.events.push_back(Pulse{T, +1, s.k, s.phiT, PulseKind::mirror, +1});
    // After the mirror pulse the upper branch is in |g>, the lower in |e>.
    if (port == InternalLevel::excited)
      upper.events.push_back(Pulse{T2, +1, s.k, s.phi2T, PulseKind::beamsplitter, +1});
    else
      lower.events.push_back(Pulse{T2, -1, s.k, s.phi2T, PulseKind::beamsplitter, +1});
  } else {
    upper.events.push_back(Mirror{T, Branch::upper, s.zeta_upper, Scalar(0)});
    lower.events.push_back(Mirror{T, Branch::lower, s.zeta_lower, Scalar(0)});
    // R-(2T): |e> -> |g> carries +hbar k, |g> -> |e> carries -hbar k.
    if (port == InternalLevel::ground)
      upper.events.push_back(Pulse{T2, +1, s.k, s.phi2T, PulseKind::beamsplitter, -1});
    else
      lower.events.push_back(Pulse{T2, -1, s.k, s.phi2T, PulseKind::beamsplitter, -1});
  }
  return {upper, lower};
}

template <class Scalar>
struct BranchBudgets {
  BranchPath<Scalar> upper_path, lower_path;
  ActionBudget<Scalar> upper, lower;

  ActionBudget<Scalar> difference() const { return upper - lower; }
  Scalar signature() const { return proper_time_signature(upper, lower); }
  Scalar total_phase() const { return difference().total() / Scalar(hbar); }
};

/// Paths and budgets of both branches in the requested frame.
template <class Scalar>
BranchBudgets<Scalar> interferometer_budgets(Geometry geometry, const ClassicalSetup<Scalar>& s,
                                             Frame frame, InternalLevel port) {
  auto sequence = interferometer_sequence(geometry, s, port);
  Scalar g = s.g;
  if (frame == Frame::freely_falling) {
    for (auto& branch : sequence) branch.events = to_freely_falling(branch.events, s.g, s.mass);
    g = 0;
  }
  const Scalar t_end = 2 * s.T;
  BranchBudgets<Scalar> out;
  out.upper_path = propagate_branch(s.z0, s.v0, g, s.mass, sequence[0].events, t_end);
  out.lower_path = propagate_branch(s.z0, s.v0, g, s.mass, sequence[1].events, t_end);
  out.upper = action_budget(out.upper_path, g, s.mass);
  out.lower = action_budget(out.lower_path, g, s.mass);
  return out;
}

}  // namespace atomint
