#pragma once

// JSON experiment description. Every key carries its SI unit in the name:
//
//   geometry        "MZI" | "SMI"                        (default "MZI")
//   diffraction     "raman" | "bragg"                    (default "raman")
//   frame           "laboratory" | "freely_falling"      (default "laboratory")
//   species         "Rb87" | {mass_kg, omega_rad_per_s, p_rec_kg_m_per_s}
//   k_per_m, g_m_per_s2, T_s                             (required)
//   phases_rad      {phi_0, phi_T, phi_2T}               (default 0)
//   mirrors         {zeta_e_m, zeta_g_m}: number | "classical"  (required for SMI)
//   wave_packet     {p_center_kg_m_per_s, delta_p_kg_m_per_s, z_center_m}
//                   default hbar k / 2, 0.05 p_rec, 0
//   z0_m, v0_m_per_s  classical initial conditions for budgets; default from wave_packet
//   clock_phase     bool | "on" | "off"                  (default off)
//   grid            {N, span_sigmas}                     (default 4096, 8)
//   barrier         {V0_J, lambda_m, s_m, p0_kg_m_per_s, delta_p0_kg_m_per_s,
//                    window_sigmas, samples, numerov_tolerance_rad,
//                    numerov_max_refinements}; {} selects the reference barrier
//   sweep           {parameter, start, stop, count}

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "atomint/evanescent_mirror.hpp"
#include "atomint/interferometer.hpp"
#include "atomint/precision.hpp"
#include "atomint/semiclassics.hpp"
#include "atomint/types.hpp"

namespace atomint {

struct SweepSpec {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  bool operator==(const SweepSpec&) const = default;
  /// Value at index i, endpoints included.
  double value(int i) const { return start + (stop - start) * i / (count - 1); }
};

/// Names accepted by SweepSpec::parameter.
inline constexpr std::string_view sweepable_parameters[] = {
    "phi_0", "phi_T", "phi_2T", "phi_plus", "delta_phi", "T_s", "Z_m", "g_m_per_s2"};

struct BarrierConfig {
  double strength = 0.0;      ///< V0, J
  double decay_length = 0.0;  ///< lambda, m
  double location = 0.0;      ///< s, m
  double p0 = 0.0;            ///< incident momentum, kg m/s
  double delta_p0 = 0.0;      ///< packet width, kg m/s
  double window_sigmas = 4.0;
  int samples = 161;
  double numerov_tolerance = 1e-10;  ///< rad
  int numerov_max_refinements = 12;

  bool operator==(const BarrierConfig&) const = default;
};

struct ExperimentConfig {
  Geometry geometry = Geometry::mzi;
  Diffraction diffraction = Diffraction::raman;
  Frame frame = Frame::laboratory;
  AtomSpecies species = rubidium87();
  double k = 0.0;
  double g = 0.0;
  double T = 0.0;
  double phi0 = 0.0, phiT = 0.0, phi2T = 0.0;
  std::optional<double> zeta_e, zeta_g;  ///< empty: classical position
  WavePacket packet;
  double z0 = 0.0, v0 = 0.0;
  bool clock_phase = false;
  GridSpec grid;
  std::optional<BarrierConfig> barrier;
  std::optional<SweepSpec> sweep;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and validate. Throws ValidationError with a path-qualified message
/// ("config.wave_packet.delta_p_kg_m_per_s: must be positive").
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON (sorted keys, all defaults spelled out). parse_config of the
/// result reproduces the config exactly.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical serialisation.
std::uint64_t config_hash(const ExperimentConfig& config);

SweepSpec parse_sweep(std::string_view text);  ///< "name,start,stop,count"
void validate_sweep(const SweepSpec& sweep);

/// Returns a copy with the swept parameter set to `value`. Z_m pins zeta_g at
/// its resolved height and places zeta_e at zeta_g + hbar k T / m + Z.
ExperimentConfig with_parameter(const ExperimentConfig& config, std::string_view parameter,
                                double value);

/// Mirror heights with "classical" resolved from (z0, v0).
MirrorPositions<double> resolved_mirrors(const ExperimentConfig& config);

InterferometerSetup to_interferometer(const ExperimentConfig& config);
ClassicalSetup<Quad> to_classical(const ExperimentConfig& config);
MirrorScenario to_mirror_scenario(const ExperimentConfig& config);

}  // namespace atomint
