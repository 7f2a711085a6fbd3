#include "catsim/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "catsim/errors.hpp"

namespace catsim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive_segment(const Vec3& a, const Vec3& b, const char* what) {
  if (!(distance(a, b) > 0.0)) throw DomainError(std::string("degenerate optical path: ") + what);
}

// Phase of exp(2 pi i L / lambda) reduced to one period before scaling, so
// paths of ~1e6 wavelengths keep their sub-wavelength differences.
double optical_phase(double length, double wavelength) {
  const double cycles = length / wavelength;
  return kTwoPi * (cycles - std::floor(cycles));
}

ScreenPattern empty_pattern(std::span<const double> positions) {
  ScreenPattern p;
  p.positions.assign(positions.begin(), positions.end());
  p.intensities.assign(positions.size(), 0.0);
  return p;
}

}  // namespace

void validate(const OpticalConfig& c) {
  if (!(c.wavelength > 0.0) || !std::isfinite(c.wavelength)) throw DomainError("wavelength > 0 required");
  if (std::abs(c.screen_axis.norm() - 1.0) > 1e-12) throw DomainError("screen_axis must be a unit vector");
  if (!(c.screen_half_width > 0.0)) throw DomainError("screen_half_width > 0 required");
  if (c.screen_points < 2) throw DomainError("screen_points >= 2 required");
  if (!(c.central_fraction > 0.0 && c.central_fraction <= 1.0)) {
    throw DomainError("central_fraction must lie in (0, 1]");
  }
  require_positive_segment(c.laser_pos, c.m2_pos, "laser -> M2");
  require_positive_segment(c.m2_pos, c.m1_pos, "M2 -> M1");
  // The screen line must not pass through a source point.
  for (const Vec3* p : {&c.laser_pos, &c.m1_pos}) {
    const Vec3 rel = *p - c.screen_origin;
    const Vec3 perp = rel - rel.dot(c.screen_axis) * c.screen_axis;
    if (!(perp.norm() > 0.0)) throw DomainError("screen line passes through a beam source");
  }
}

std::vector<double> screen_positions(const OpticalConfig& c) {
  validate(c);
  std::vector<double> s(c.screen_points);
  const double step = 2.0 * c.screen_half_width / static_cast<double>(c.screen_points - 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = -c.screen_half_width + step * static_cast<double>(i);
  }
  return s;
}

Vec3 screen_point(const OpticalConfig& c, double s) { return c.screen_origin + s * c.screen_axis; }

IndexRange central_window(const OpticalConfig& c, std::size_t n) {
  const auto width = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(c.central_fraction * n)));
  const std::size_t begin = (n - std::min(width, n)) / 2;
  return {begin, std::min(n, begin + width)};
}

double path_length(const OpticalConfig& c, PathKind path, double s) {
  const Vec3 x = screen_point(c, s);
  if (path == PathKind::up) return distance(c.laser_pos, x);
  return distance(c.laser_pos, c.m2_pos) + distance(c.m2_pos, c.m1_pos) + distance(c.m1_pos, x);
}

std::complex<double> branch_amplitude(const OpticalConfig& c, PathKind path, double s,
                                      double extra_phase, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw DomainError("branch weight must lie in [0, 1]");
  const double length = path_length(c, path, s);
  return std::polar(std::sqrt(weight) / length, extra_phase + optical_phase(length, c.wavelength));
}

PathKind path_for(BranchKind kind) { return kind == BranchKind::intact ? PathKind::down : PathKind::up; }

ScreenPattern pattern_unitary(const OpticalConfig& c, std::span<const Branch> branches,
                              std::span<const double> positions) {
  validate(c);
  if (branches.size() != 2) {
    throw DomainError("pattern_unitary needs exactly two branches, got " + std::to_string(branches.size()));
  }
  ScreenPattern p = empty_pattern(positions);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    std::complex<double> sum;
    for (const auto& b : branches) {
      sum += branch_amplitude(c, path_for(b.kind), positions[i], b.phase, b.norm);
    }
    p.intensities[i] = std::norm(sum);
  }
  return p;
}

ScreenPattern pattern_collapsed(const OpticalConfig& c, std::span<const TrialOutcome> outcomes,
                                std::span<const double> positions, bool include_moving) {
  validate(c);
  if (outcomes.empty()) throw DomainError("pattern_collapsed needs at least one outcome");
  std::size_t n_down = 0;
  std::size_t n_up = 0;
  for (const auto& o : outcomes) {
    switch (o.final_config) {
      case MirrorConfig::down:
        ++n_down;
        break;
      case MirrorConfig::up:
        ++n_up;
        break;
      case MirrorConfig::moving:
        if (include_moving) ++n_up;
        break;
    }
  }
  const std::size_t used = n_down + n_up;
  if (used == 0) throw DomainError("pattern_collapsed: every outcome was caught moving");
  // Each trial contributes one single-path |A|^2, so the trial average is the
  // count-weighted mixture of the two single-path patterns.
  const double p_down = static_cast<double>(n_down) / static_cast<double>(used);
  const double p_up = static_cast<double>(n_up) / static_cast<double>(used);
  ScreenPattern p = empty_pattern(positions);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double i_down = std::norm(branch_amplitude(c, PathKind::down, positions[i], 0.0, 1.0));
    const double i_up = std::norm(branch_amplitude(c, PathKind::up, positions[i], 0.0, 1.0));
    p.intensities[i] = p_down * i_down + p_up * i_up;
  }
  return p;
}

ScreenPattern pattern_half_silvered(const OpticalConfig& c, std::span<const double> positions) {
  validate(c);
  ScreenPattern p = empty_pattern(positions);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    p.intensities[i] = std::norm(branch_amplitude(c, PathKind::down, positions[i], 0.0, 0.5) +
                                 branch_amplitude(c, PathKind::up, positions[i], 0.0, 0.5));
  }
  return p;
}

ScreenPattern pattern_classical(const OpticalConfig& c, std::span<const double> positions) {
  switch (c.m2_state) {
    case MirrorSetting::down_half:
      return pattern_half_silvered(c, positions);
    case MirrorSetting::down_full:
    case MirrorSetting::up: {
      validate(c);
      const PathKind path = c.m2_state == MirrorSetting::up ? PathKind::up : PathKind::down;
      ScreenPattern p = empty_pattern(positions);
      for (std::size_t i = 0; i < positions.size(); ++i) {
        p.intensities[i] = std::norm(branch_amplitude(c, path, positions[i], 0.0, 1.0));
      }
      return p;
    }
  }
  return empty_pattern(positions);
}

double visibility(const ScreenPattern& pattern, IndexRange window) {
  if (window.begin >= window.end || window.end > pattern.intensities.size()) {
    throw DomainError("visibility: empty or out-of-range window");
  }
  const auto first = pattern.intensities.begin() + static_cast<std::ptrdiff_t>(window.begin);
  const auto last = pattern.intensities.begin() + static_cast<std::ptrdiff_t>(window.end);
  const auto [lo, hi] = std::minmax_element(first, last);
  const double sum = *hi + *lo;
  if (sum <= 0.0) return 0.0;
  return (*hi - *lo) / sum;
}

double integrated_intensity(const ScreenPattern& pattern) {
  double total = 0.0;
  for (std::size_t i = 1; i < pattern.positions.size(); ++i) {
    total += 0.5 * (pattern.intensities[i] + pattern.intensities[i - 1]) *
             (pattern.positions[i] - pattern.positions[i - 1]);
  }
  return total;
}

std::string to_csv(const ScreenPattern& pattern) {
  std::string out = "position,intensity\n";
  char buf[64];
  for (std::size_t i = 0; i < pattern.positions.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", pattern.positions[i], pattern.intensities[i]);
    out += buf;
  }
  return out;
}

}  // namespace catsim
