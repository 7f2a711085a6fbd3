#pragma once

namespace catsim {

/// Length scales of a localized bound state and of its spread-out decay
/// products.
struct RegionPair {
  double bound_extent;   // cm
  double spread_extent;  // cm
};

void validate(const RegionPair& regions);

/// Cube of the extent ratio, the volume-ratio estimate of the overlap.
double ratio_overlap(const RegionPair& regions);

/// |<g1|g2>| of two normalized isotropic 3-D Gaussians whose densities have
/// standard deviations width1, width2 and whose centers are `separation`
/// apart:
///   (2 w1 w2 / (w1^2 + w2^2))^{3/2} exp(-d^2 / (4 (w1^2 + w2^2))).
double gaussian_branch_overlap(double width1, double width2, double separation);

}  // namespace catsim
