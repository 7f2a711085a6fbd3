#pragma once

#include <cstdint>
#include <random>

namespace catsim {

/// SplitMix64 finalizer. Used to derive independent per-trial seeds from a
/// run seed and a trial index.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index) {
  return splitmix64(splitmix64(run_seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

/// Reproducible random source. The engine is mt19937_64, whose output
/// sequence is fixed by the C++ standard; the transforms below are written
/// out so that draws do not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe to take the log of.
  double uniform_open_zero() { return 1.0 - uniform(); }

  double exponential(double mean);
  bool bernoulli(double p);
  double phase();  // uniform on [0, 2 pi)

 private:
  std::mt19937_64 engine_;
};

}  // namespace catsim
