#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace atomint {

/// IEEE binary128 emulation. Action integrals reach 1e10 rad at laboratory
/// scales, so branch differences need ~30 significant digits to resolve 1e-9 rad.
using Quad = boost::multiprecision::cpp_bin_float_quad;

}  // namespace atomint
