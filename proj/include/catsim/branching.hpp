#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catsim/decay.hpp"
#include "catsim/rng.hpp"
#include "catsim/wavepacket.hpp"

namespace catsim {

enum class BranchKind { intact, decayed };
enum class EvolutionMode { unitary, collapse };

struct DetectorModel {
  double efficiency = 1.0;
  double delay = 1e-3;  // s, particle passage to discharge
};

void validate(const DetectorModel& detector);

/// How the unknown branch phases (intact, decayed) are chosen for a run.
struct PhasePolicy {
  enum class Kind { zero, fixed, random };
  Kind kind = Kind::random;
  std::array<double, 2> fixed{0.0, 0.0};
  std::uint64_t seed = 0;

  static PhasePolicy zero() { return {Kind::zero, {0.0, 0.0}, 0}; }
  static PhasePolicy fixed_at(double intact, double decayed) { return {Kind::fixed, {intact, decayed}, 0}; }
  static PhasePolicy random(std::uint64_t seed) { return {Kind::random, {0.0, 0.0}, seed}; }

  std::array<double, 2> resolve() const;
};

/// Everything inside the steel chamber: the radioactive sample, the Geiger
/// counter, and the switching mirror with its relay-driven path from the
/// down site (switch_path.start) to the up site (switch_path.end).
struct Chamber {
  Sample sample;
  GaussianPacket mirror;
  Trajectory switch_path;
  DetectorModel detector;
  PhasePolicy phases = PhasePolicy::zero();
  bool imperfect_shielding = false;  // recorded in outcomes only
};

struct Branch {
  BranchKind kind = BranchKind::intact;
  double norm = 1.0;
  double phase = 0.0;
  GaussianPacket packet;
  Trajectory trajectory;
  std::optional<double> decay_time;
  std::optional<double> departs_at;  // relay trigger; mirror leaves its site
};

struct SystemState {
  std::vector<Branch> branches;
  double time = 0.0;
  EvolutionMode mode = EvolutionMode::unitary;
  Chamber chamber;
  std::array<double, 2> phases{0.0, 0.0};  // resolved (intact, decayed)

  const Branch* find(BranchKind kind) const;
  double total_norm() const;
};

/// Factorized initial condition: one intact branch of norm 1 at t = 0.
SystemState prepare(const Chamber& chamber);
SystemState prepare(const Sample& sample, const GaussianPacket& mirror, const Trajectory& trajectory);

/// Unitary evolution of a unitary-mode state to t_target. Norm flows from the
/// intact to the decayed branch following the sample's no-decay probability;
/// both branches are kept. The decayed branch's mirror departs at the median
/// first-decay time (conditioned on a decay in [0, t_target]) plus the
/// detector delay.
SystemState unitary_evolve(const SystemState& state, double t_target);

/// Moves the packets of a collapse-mode state along their trajectories.
/// No norm transfer happens.
SystemState advance(const SystemState& state, double t_target);

/// Forces one particle through the counter at `at`. With probability
/// `detector.efficiency` the state collapses onto a decayed branch whose
/// relay fires at at + delay; otherwise the state is returned unchanged.
SystemState inject_test_particle(const SystemState& state, const DetectorModel& detector, double at,
                                 Rng& rng);

enum class MirrorConfig { down, up, moving };

const char* to_string(MirrorConfig config);

struct TrialOutcome {
  std::uint64_t seed = 0;
  bool decayed = false;
  std::optional<double> decay_time;   // decay that was detected, else the first decay
  std::optional<double> detect_time;  // counter discharge, if within the horizon
  MirrorConfig final_config = MirrorConfig::down;
  bool imperfect_shielding = false;

  bool collapsed() const { return detect_time.has_value(); }
};

/// One continuously observed run under the collapse rule.
TrialOutcome collapse_run(const Chamber& chamber, double horizon, std::uint64_t rng_seed);

/// `trials` runs with seeds derive_seed(run_seed, i).
std::vector<TrialOutcome> collapse_trials(const Chamber& chamber, double horizon,
                                          std::uint64_t run_seed, std::size_t trials);

/// Collapse-mode state at time t implied by an outcome. Before a detection
/// the intact branch is renormalized to 1 - N2(delay) and the remainder is an
/// unregistered decayed component; after it only the decayed branch remains.
SystemState observed_state(const Chamber& chamber, const TrialOutcome& outcome, double t);

// seed,decayed,decay_time,detect_time,final_config
std::string trial_csv_header();
std::string to_csv_row(const TrialOutcome& outcome);

}  // namespace catsim
