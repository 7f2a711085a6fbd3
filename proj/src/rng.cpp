#include "catsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace catsim {

double Rng::exponential(double mean) { return -mean * std::log(uniform_open_zero()); }

bool Rng::bernoulli(double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return uniform() < p;
}

double Rng::phase() { return 2.0 * std::numbers::pi * uniform(); }

}  // namespace catsim
