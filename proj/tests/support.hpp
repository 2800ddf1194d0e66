#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <boost/math/constants/constants.hpp>

#include "atomint/precision.hpp"

namespace testing {

/// Deterministic generator shared by the randomized checks.
class Random {
 public:
  explicit Random(std::uint64_t seed = 0x5eed) : engine_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  double normal() { return std::normal_distribution<double>()(engine_); }

 private:
  std::mt19937_64 engine_;
};

/// Reduce to [-pi, pi] in quad precision.
inline atomint::Quad wrap(const atomint::Quad& x) {
  const atomint::Quad two_pi = boost::math::constants::two_pi<atomint::Quad>();
  return x - round(x / two_pi) * two_pi;
}

inline double wrap(double x) { return std::remainder(x, 2 * boost::math::constants::pi<double>()); }

}  // namespace testing
