#pragma once

// Command drivers behind the atomint executable. Each returns the full text it
// would write, so tests can compare outputs byte for byte.

#include <cstdint>
#include <optional>
#include <string>

#include "atomint/config.hpp"

namespace atomint {

struct CommandOutput {
  std::string csv;
  std::string plot_script;  ///< mirror-phase only
  bool passed = true;       ///< frame-check and visibility verdicts
};

/// Exit status for a failed check (frame-check, visibility).
inline constexpr int exit_check_failed = 3;

/// Per-branch, per-frame action budgets in units of hbar for both output ports.
CommandOutput cmd_budget(const ExperimentConfig& config);

/// Port probabilities and local visibility along a sweep.
CommandOutput cmd_fringe(const ExperimentConfig& config, const SweepSpec& sweep);

/// Reflection phase curve of the exponential barrier, plus a plotting script
/// that reads `csv_name`.
CommandOutput cmd_mirror_phase(const ExperimentConfig& config,
                               const std::string& csv_name = "mirror_phase.csv");

/// SMI visibility against mirror mismatch Z, with the Gaussian law alongside.
/// Without a sweep, Z runs over |Z| delta_p / hbar <= 2 in 41 points.
CommandOutput cmd_visibility(const ExperimentConfig& config,
                             const std::optional<SweepSpec>& sweep = std::nullopt);

/// Laboratory against freely-falling port probabilities. `random_cases` extra
/// configurations are drawn around the given one from a fixed seed.
CommandOutput cmd_frame_check(const ExperimentConfig& config, int random_cases = 0,
                              std::uint64_t seed = 20240611);

inline constexpr double frame_check_tolerance = 1e-8;
inline constexpr double visibility_tolerance = 1e-6;

/// Local fringe visibility from four quadratures of phi_0:
/// sqrt((P(0) - P(pi))^2 + (P(pi/2) - P(3pi/2))^2) on the signal port.
double quadrature_visibility(const InterferometerSetup& setup, Geometry geometry, Frame frame);

/// "%.17g", the shortest format that round-trips every double.
std::string format_number(double x);

}  // namespace atomint
