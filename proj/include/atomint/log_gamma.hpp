#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "atomint/error.hpp"

namespace atomint {

/// ln Gamma(z) for Re z > 0 on the branch continuous from the positive real
/// axis, so Im ln Gamma(1 + iy) = arg Gamma(1 + iy) without 2 pi wrapping.
///
/// The argument is shifted to |z| >= 20 by the recurrence
/// ln Gamma(z) = ln Gamma(z + n) - sum_{j<n} ln(z + j), then the Stirling series
/// is summed through the z^{-17} term (truncation below 1e-22).
template <class Scalar>
std::complex<Scalar> log_gamma(std::complex<Scalar> z) {
  using C = std::complex<Scalar>;
  require(z.real() > 0, "log_gamma: requires Re z > 0");

  // B_{2n} / (2n (2n - 1)), n = 1..9
  static constexpr std::array<long double, 9> stirling = {
      1.0L / 12.0L,        -1.0L / 360.0L,     1.0L / 1260.0L,
      -1.0L / 1680.0L,     1.0L / 1188.0L,     -691.0L / 360360.0L,
      1.0L / 156.0L,       -3617.0L / 122400.0L, 43867.0L / 244188.0L};

  C shift_sum(0, 0);
  const Scalar threshold(20);
  while (std::abs(z) < threshold) {
    shift_sum += std::log(z);
    z += Scalar(1);
  }

  const C inv = Scalar(1) / z;
  const C inv2 = inv * inv;
  C series(0, 0);
  C power = inv;
  for (const long double c : stirling) {
    series += Scalar(c) * power;
    power *= inv2;
  }
  const Scalar half_log_two_pi = Scalar(0.5L * std::log(2.0L * std::numbers::pi_v<long double>));
  return (z - Scalar(0.5)) * std::log(z) - z + half_log_two_pi + series - shift_sum;
}

/// arg Gamma(1 + iy), continuous in y.
template <class Scalar>
Scalar arg_gamma_one_plus_iy(Scalar y) {
  return log_gamma(std::complex<Scalar>(Scalar(1), y)).imag();
}

}  // namespace atomint
