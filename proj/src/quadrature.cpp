#include "catsim/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "catsim/errors.hpp"

namespace catsim {
namespace {

struct Simpson {
  const std::function<double(double)>& f;
  double abs_tol;
  int max_depth;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * abs_tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
      throw NumericalError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
    }
    return recurse(a, m, fa, flm, fm, left, depth + 1) + recurse(m, b, fm, frm, fb, right, depth + 1);
  }
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          int max_depth) {
  if (!(b > a)) throw DomainError("integrate_adaptive: b > a required");
  // A coarse pass sets the absolute scale for the relative tolerance.
  constexpr int kPanels = 64;
  const double h = (b - a) / kPanels;
  double coarse = 0.0;
  std::vector<double> fx(2 * kPanels + 1);
  for (int i = 0; i <= 2 * kPanels; ++i) fx[i] = f(a + 0.5 * h * i);
  for (int i = 0; i < kPanels; ++i) coarse += h / 6.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
  const double scale = std::abs(coarse) > 0.0 ? std::abs(coarse) : 1.0;

  const Simpson s{f, rel_tol * scale / kPanels, max_depth};
  double total = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double lo = a + h * i;
    const double whole = h / 6.0 * (fx[2 * i] + 4.0 * fx[2 * i + 1] + fx[2 * i + 2]);
    total += s.recurse(lo, lo + h, fx[2 * i], fx[2 * i + 1], fx[2 * i + 2], whole, 0);
  }
  if (!std::isfinite(total)) throw NumericalError("adaptive quadrature produced a non-finite value");
  return total;
}

double gaussian_overlap_1d_quadrature(double w1, double w2, double d) {
  if (!(w1 > 0.0) || !(w2 > 0.0) || !(d >= 0.0)) throw DomainError("widths > 0, d >= 0 required");
  // amplitude g(x) = (2 pi w^2)^{-1/4} exp(-x^2 / (4 w^2))
  const double c1 = std::pow(2.0 * std::numbers::pi * w1 * w1, -0.25);
  const double c2 = std::pow(2.0 * std::numbers::pi * w2 * w2, -0.25);
  const double k1 = 1.0 / (4.0 * w1 * w1);
  const double k2 = 1.0 / (4.0 * w2 * w2);
  const double center = k2 * d / (k1 + k2);
  const double width = std::sqrt(1.0 / (2.0 * (k1 + k2)));  // std dev of the product
  auto f = [&](double x) {
    const double u = x - center;
    // Exponent expanded about the product's center keeps it O(1) across the box.
    const double e = -(k1 + k2) * u * u - k1 * k2 / (k1 + k2) * d * d;
    return c1 * c2 * std::exp(e);
  };
  return integrate_adaptive(f, center - 12.0 * width, center + 12.0 * width, 1e-12);
}

}  // namespace catsim
