#pragma once

#include <string_view>

namespace atomint {

enum class InternalLevel { excited, ground };
enum class Geometry { mzi, smi };
enum class Frame { laboratory, freely_falling };
enum class Diffraction { raman, bragg };

/// Upper is the branch moving upward relative to its partner after the first
/// beamsplitter. Starting in |e> at p = hbar k / 2, the upper branch stays in
/// |e> and the lower branch is kicked by -hbar k into |g>.
enum class Branch { upper, lower };

constexpr std::string_view to_string(InternalLevel level) {
  return level == InternalLevel::excited ? "e" : "g";
}
constexpr std::string_view to_string(Geometry geometry) {
  return geometry == Geometry::mzi ? "MZI" : "SMI";
}
constexpr std::string_view to_string(Frame frame) {
  return frame == Frame::laboratory ? "laboratory" : "freely_falling";
}
constexpr std::string_view to_string(Diffraction diffraction) {
  return diffraction == Diffraction::raman ? "raman" : "bragg";
}
constexpr std::string_view to_string(Branch branch) {
  return branch == Branch::upper ? "upper" : "lower";
}

}  // namespace atomint
