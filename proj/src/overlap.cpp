#include "catsim/overlap.hpp"

#include <cmath>

#include "catsim/errors.hpp"

namespace catsim {

void validate(const RegionPair& regions) {
  if (!(regions.bound_extent > 0.0) || !(regions.bound_extent <= regions.spread_extent) ||
      !std::isfinite(regions.spread_extent)) {
    throw DomainError("0 < bound_extent <= spread_extent required");
  }
}

double ratio_overlap(const RegionPair& regions) {
  validate(regions);
  const double r = regions.bound_extent / regions.spread_extent;
  return r * r * r;
}

double gaussian_branch_overlap(double width1, double width2, double separation) {
  if (!(width1 > 0.0) || !(width2 > 0.0)) throw DomainError("widths > 0 required");
  if (!(separation >= 0.0)) throw DomainError("separation >= 0 required");
  // Written in the ratio q = w1/w2 so that w1^2 + w2^2 never overflows or
  // loses the smaller width.
  const double q = width1 / width2;
  const double amplitude = std::pow(2.0 * q / (1.0 + q * q), 1.5);
  const double s = separation / width2;
  return amplitude * std::exp(-s * s / (4.0 * (1.0 + q * q)));
}

}  // namespace catsim
