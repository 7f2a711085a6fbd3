#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "catsim/branching.hpp"
#include "catsim/density.hpp"
#include "catsim/interferometer.hpp"

namespace catsim {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment { decay_stats, packet_spread, overlap_scan, interfere, montecarlo, density, neutron };

const char* to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

enum class InterfereMode { unitary, collapse, half_silvered };

/// Fully resolved run description. Defaults are the one-hour setup: a
/// calibrated sample with a 50% chance of decay within the hour, a 1 g
/// mirror localized to one Bohr radius, and the default optical table.
struct RunConfig {
  Experiment experiment = Experiment::interfere;

  double n_nuclei = 1e6;
  std::optional<double> mean_life;  // s; calibrated against calibration_horizon when absent
  double calibration_horizon = 3600.0;
  double horizon = 3600.0;  // observation time, s

  double mirror_mass = 1.0;           // g
  double sigma0 = 5.29177210903e-9;   // cm
  double mirror_lift = 2.0;           // cm, up site = M2 + (0, 0, lift)
  double transit_time = 0.1;          // s

  double efficiency = 1.0;
  double delay = 1e-3;  // s
  bool imperfect_shielding = false;

  PhasePolicy::Kind phase_policy = PhasePolicy::Kind::random;
  std::array<double, 2> fixed_phases{0.0, 0.0};

  InterfereMode mode = InterfereMode::unitary;
  std::size_t trials = 10000;
  bool include_moving = false;

  OpticalConfig optics;

  std::size_t members = 1000;
  std::size_t max_members = Ensemble::default_max_members;
  std::optional<std::vector<MemberSpec>> ensemble;

  double bound_extent = 1e-12;  // cm
  double spread_extent = 1e2;   // cm
  std::size_t scan_points = 29;

  double neutron_mean_life = 887.0;  // s
  double neutron_time = 600.0;       // s

  std::uint64_t seed = 1;

  double resolved_mean_life() const;
  Chamber chamber() const;
};

/// Strict parse of a JSON object; every absent key takes its default.
/// Throws ConfigError listing every offending key and its constraint.
RunConfig validate_config(std::string_view json_text);

/// All keys with resolved values, as a JSON document.
std::string resolved_json(const RunConfig& config);

/// Keys accepted by validate_config.
const std::vector<std::string>& config_keys();

/// Closest accepted key within two edits (adjacent transpositions count
/// once), or "" if none.
std::string nearest_key(std::string_view unknown);

/// Optimal-string-alignment edit distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace catsim
