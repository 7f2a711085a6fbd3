#include "catsim/decay.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "catsim/errors.hpp"
#include "catsim/rng.hpp"

namespace catsim {
namespace {

void require_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(what) + " must be a finite time >= 0, got " + std::to_string(t));
  }
}

}  // namespace

DecayLaw::DecayLaw(double mean_life) : mean_life_(mean_life) {
  if (!(mean_life > 0.0) || !std::isfinite(mean_life)) {
    throw DomainError("mean_life > 0 and finite required, got " + std::to_string(mean_life));
  }
}

Sample::Sample(double n_nuclei, DecayLaw law) : n_nuclei_(n_nuclei), law_(law) {
  if (!(n_nuclei >= 1.0) || !std::isfinite(n_nuclei) || std::floor(n_nuclei) != n_nuclei) {
    throw DomainError("n_nuclei must be an integer >= 1, got " + std::to_string(n_nuclei));
  }
}

double survival_single(const DecayLaw& law, double t) {
  require_time(t, "t");
  return std::exp(-t / law.mean_life());
}

double decayed_single(const DecayLaw& law, double t) { return 1.0 - survival_single(law, t); }

double log_intact_norm(const Sample& sample, double t) {
  require_time(t, "t");
  // N * (t / tau) rather than (N * t) / tau keeps N = 1e23 away from overflow.
  return -sample.n_nuclei() * (t / sample.law().mean_life());
}

BranchNorms sample_branch_norms(const Sample& sample, double t) {
  const double log_n1 = log_intact_norm(sample, t);
  return {std::exp(log_n1), -std::expm1(log_n1)};
}

DecayLaw calibrate_mean_life(double n_nuclei, double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("horizon > 0 required, got " + std::to_string(horizon));
  }
  const Sample check(n_nuclei, DecayLaw(1.0));  // validates the count
  return DecayLaw(check.n_nuclei() * horizon / std::numbers::ln2);
}

double conditional_median_first_decay(const Sample& sample, double window) {
  require_time(window, "window");
  const double x = sample.n_nuclei() * (window / sample.law().mean_life());
  if (x < 1e-6) {
    // Series of -ln((1 + e^{-x}) / 2) / x * window.
    return window * (0.5 - x / 8.0);
  }
  // median m solves 1 - e^{-lambda m} = (1 - e^{-x}) / 2
  const double lambda_m = -std::log1p(std::expm1(-x) / 2.0);
  return window * (lambda_m / x);
}

std::vector<double> sample_decay_events(const Sample& sample, double window, std::uint64_t rng_seed,
                                        std::size_t max_events) {
  require_time(window, "window");
  std::vector<double> times;
  if (window == 0.0) return times;

  // Memorylessness: with k nuclei left the next decay follows after an
  // Exp(tau / k) gap. This yields the order statistics of N independent
  // exponential lifetimes without touching nuclei that never decay.
  Rng rng(rng_seed);
  const double tau = sample.law().mean_life();
  double remaining = sample.n_nuclei();
  double t = 0.0;
  while (remaining >= 1.0) {
    t += rng.exponential(tau / remaining);
    if (t > window) break;
    if (times.size() == max_events) {
      throw NumericalError("sample_decay_events: more than " + std::to_string(max_events) +
                           " decays in window");
    }
    times.push_back(t);
    remaining -= 1.0;
  }
  return times;
}

}  // namespace catsim
