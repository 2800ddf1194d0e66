#pragma once

#include <numbers>

namespace atomint {

// CODATA 2018, SI.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double euler_gamma = std::numbers::egamma;

/// Atom parameters shared by every module.
struct AtomSpecies {
  double mass = 0.0;             ///< kg
  double internal_splitting = 0.0;  ///< omega, rad/s
  double recoil_momentum = 0.0;  ///< single-photon recoil, kg m/s

  bool operator==(const AtomSpecies&) const = default;
};

namespace rb87 {
inline constexpr double mass = 86.909180520 * atomic_mass_unit;
inline constexpr double d2_wavelength = 780.241209686e-9;  // m, vacuum
inline constexpr double d2_wavenumber = 2.0 * std::numbers::pi / d2_wavelength;
inline constexpr double recoil_momentum = hbar * d2_wavenumber;
inline constexpr double hyperfine_splitting = 2.0 * std::numbers::pi * 6.834682610904e9;
/// Effective two-photon wavevector for counter-propagating D2 Raman beams.
inline constexpr double raman_wavenumber = 2.0 * d2_wavenumber;
}  // namespace rb87

inline AtomSpecies rubidium87() {
  return {rb87::mass, rb87::hyperfine_splitting, rb87::recoil_momentum};
}

}  // namespace atomint
