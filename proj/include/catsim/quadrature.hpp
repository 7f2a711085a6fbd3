#pragma once

#include <functional>

namespace catsim {

/// Adaptive Simpson integration of f over [a, b] to relative tolerance
/// `rel_tol`. Throws NumericalError when the recursion depth is exhausted
/// before the tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, int max_depth = 40);

/// Overlap of two normalized 1-D Gaussian amplitudes with density widths w1,
/// w2 and center separation d, by adaptive quadrature on a box of +-12
/// product widths. The 3-D isotropic overlap with separation along one axis
/// is this value times the zero-separation value squared.
double gaussian_overlap_1d_quadrature(double w1, double w2, double d);

}  // namespace catsim
