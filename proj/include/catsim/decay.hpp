#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace catsim {

/// Exponential decay of a single nucleus, parameterized by its mean life
/// in seconds.
class DecayLaw {
 public:
  explicit DecayLaw(double mean_life);

  /// Mean life so long that no decay is representable over any realistic
  /// horizon: a sample of stable nuclei.
  static DecayLaw stable() { return DecayLaw(std::numeric_limits<double>::max()); }

  double mean_life() const noexcept { return mean_life_; }
  bool is_stable() const noexcept { return mean_life_ == std::numeric_limits<double>::max(); }

 private:
  double mean_life_;
};

/// N statistically independent nuclei sharing one decay law. The count is a
/// double so that macroscopic samples (N ~ 1e23) are representable; it must
/// hold an integral value >= 1.
class Sample {
 public:
  Sample(double n_nuclei, DecayLaw law);

  double n_nuclei() const noexcept { return n_nuclei_; }
  const DecayLaw& law() const noexcept { return law_; }

  /// Total decay rate of the undecayed sample, N / tau.
  double total_rate() const noexcept { return n_nuclei_ / law_.mean_life(); }

 private:
  double n_nuclei_;
  DecayLaw law_;
};

struct BranchNorms {
  double intact;   // no nucleus decayed
  double decayed;  // one or more decayed
};

double survival_single(const DecayLaw& law, double t);
double decayed_single(const DecayLaw& law, double t);

/// ln of the no-decay probability, -N t / tau; exact for arbitrarily large N.
double log_intact_norm(const Sample& sample, double t);

BranchNorms sample_branch_norms(const Sample& sample, double t);

/// Mean life for which the sample has a 50% chance of at least one decay by
/// `horizon`: tau = N * horizon / ln 2.
DecayLaw calibrate_mean_life(double n_nuclei, double horizon);

/// Median decay time of the first decay, conditioned on it falling in
/// [0, window]. Tends to window / 2 for a nearly stable sample.
double conditional_median_first_decay(const Sample& sample, double window);

/// One Monte Carlo realization: ascending decay times of all nuclei that
/// decay within [0, window], reproducible for a fixed seed. Throws
/// NumericalError if more than `max_events` decays would be produced.
std::vector<double> sample_decay_events(const Sample& sample, double window, std::uint64_t rng_seed,
                                        std::size_t max_events = 10'000'000);

}  // namespace catsim
