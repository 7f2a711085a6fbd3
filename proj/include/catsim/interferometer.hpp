#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "catsim/branching.hpp"
#include "catsim/units.hpp"

namespace catsim {

enum class MirrorSetting { down_full, up, down_half };
enum class PathKind { up, down };

/// Optical table: laser, fixed mirror M1, switchable mirror M2 and a screen
/// sampled along a line. The up path runs straight from the laser to the
/// screen through the vacated M2 site; the down path is laser -> M2 -> M1 ->
/// screen.
struct OpticalConfig {
  Vec3 laser_pos{0.0, 0.0, 0.0};
  Vec3 m2_pos{10.0, 0.0, 0.0};
  Vec3 m1_pos{10.0, -10.0, 0.0};
  Vec3 screen_origin{110.0, 0.0, 0.0};
  Vec3 screen_axis{0.0, 1.0, 0.0};  // unit vector
  double wavelength = 632.8 * units::nanometer;
  MirrorSetting m2_state = MirrorSetting::down_full;
  double screen_half_width = 2.0;
  std::size_t screen_points = 50001;
  double central_fraction = 0.1;
};

void validate(const OpticalConfig& config);

std::vector<double> screen_positions(const OpticalConfig& config);
Vec3 screen_point(const OpticalConfig& config, double s);

struct ScreenPattern {
  std::vector<double> positions;
  std::vector<double> intensities;
};

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
};

/// Middle `config.central_fraction` of n screen samples.
IndexRange central_window(const OpticalConfig& config, std::size_t n);

double path_length(const OpticalConfig& config, PathKind path, double s);

/// sqrt(weight) exp(i extra_phase) exp(2 pi i L / lambda) / L
std::complex<double> branch_amplitude(const OpticalConfig& config, PathKind path, double s,
                                      double extra_phase, double weight);

PathKind path_for(BranchKind kind);

/// Coherent two-branch intensity |A_down + A_up|^2, weights = branch norms,
/// extra phases = branch phases. Requires exactly two branches.
ScreenPattern pattern_unitary(const OpticalConfig& config, std::span<const Branch> branches,
                              std::span<const double> positions);

/// Trial-averaged single-path intensities. Runs whose mirror is mid-transit
/// at the horizon are skipped unless include_moving is set, in which case
/// they count as up.
ScreenPattern pattern_collapsed(const OpticalConfig& config, std::span<const TrialOutcome> outcomes,
                                std::span<const double> positions, bool include_moving = false);

/// Physical beam split 1/sqrt2 : 1/sqrt2 over both paths.
ScreenPattern pattern_half_silvered(const OpticalConfig& config, std::span<const double> positions);

/// Pattern for a classical mirror in `config.m2_state`.
ScreenPattern pattern_classical(const OpticalConfig& config, std::span<const double> positions);

double visibility(const ScreenPattern& pattern, IndexRange window);

/// Trapezoid integral of the intensity over the screen coordinate.
double integrated_intensity(const ScreenPattern& pattern);

std::string to_csv(const ScreenPattern& pattern);

}  // namespace catsim
