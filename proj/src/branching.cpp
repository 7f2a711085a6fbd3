#include "catsim/branching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "catsim/errors.hpp"

namespace catsim {
namespace {

void validate(const Chamber& chamber) {
  validate(chamber.mirror);
  validate(chamber.switch_path);
  validate(chamber.detector);
}

Branch intact_branch(const SystemState& state, double norm) {
  Branch b;
  b.kind = BranchKind::intact;
  b.norm = norm;
  b.phase = state.phases[0];
  b.trajectory = Trajectory::stationary(state.chamber.switch_path.start);
  b.packet = state.chamber.mirror.at(b.trajectory.start);
  b.packet.global_phase = b.phase;
  return b;
}

Branch decayed_branch(const SystemState& state, double norm, double decay_time, double departs_at) {
  Branch b;
  b.kind = BranchKind::decayed;
  b.norm = norm;
  b.phase = state.phases[1];
  b.trajectory = state.chamber.switch_path;
  b.packet = state.chamber.mirror.at(b.trajectory.start);
  b.packet.global_phase = b.phase;
  b.decay_time = decay_time;
  b.departs_at = departs_at;
  return b;
}

void place(Branch& branch, double t) {
  if (branch.departs_at && t > *branch.departs_at) {
    branch.packet.center = trajectory_position(branch.trajectory, t - *branch.departs_at);
  } else {
    branch.packet.center = branch.trajectory.start;
  }
}

void require_forward(const SystemState& state, double t_target) {
  if (!(t_target >= state.time) || !std::isfinite(t_target)) {
    throw DomainError("evolution backwards in time rejected (state at " + std::to_string(state.time) +
                      ", target " + std::to_string(t_target) + ")");
  }
}

// Time of the first detected decay among `n` nuclei each detected with
// probability `eff`: P(none detected by t) = (1 - eff (1 - e^{-t/tau}))^n.
// Returns +inf when no decay is ever detected.
double first_detected_decay(double n, double tau, double eff, Rng& rng) {
  if (n < 1.0 || eff <= 0.0) return INFINITY;
  const double log_u = std::log(rng.uniform_open_zero());
  const double one_minus_root = -std::expm1(log_u / n);  // 1 - u^{1/n}
  if (one_minus_root >= eff) return INFINITY;
  return -tau * std::log1p(-one_minus_root / eff);
}

}  // namespace

void validate(const DetectorModel& detector) {
  if (!(detector.efficiency >= 0.0 && detector.efficiency <= 1.0)) {
    throw DomainError("efficiency must lie in [0, 1]");
  }
  if (!(detector.delay >= 0.0) || !std::isfinite(detector.delay)) {
    throw DomainError("delay >= 0 required");
  }
}

std::array<double, 2> PhasePolicy::resolve() const {
  switch (kind) {
    case Kind::zero:
      return {0.0, 0.0};
    case Kind::fixed:
      return fixed;
    case Kind::random: {
      Rng rng(seed);
      const double intact = rng.phase();
      return {intact, rng.phase()};
    }
  }
  return {0.0, 0.0};
}

const Branch* SystemState::find(BranchKind kind) const {
  for (const auto& b : branches) {
    if (b.kind == kind) return &b;
  }
  return nullptr;
}

double SystemState::total_norm() const {
  return std::accumulate(branches.begin(), branches.end(), 0.0,
                         [](double acc, const Branch& b) { return acc + b.norm; });
}

SystemState prepare(const Chamber& chamber) {
  validate(chamber);
  SystemState state{{}, 0.0, EvolutionMode::unitary, chamber, {0.0, 0.0}};
  state.phases = chamber.phases.resolve();
  state.time = 0.0;
  state.mode = EvolutionMode::unitary;
  state.branches.push_back(intact_branch(state, 1.0));
  return state;
}

SystemState prepare(const Sample& sample, const GaussianPacket& mirror, const Trajectory& trajectory) {
  return prepare(Chamber{sample, mirror, trajectory, DetectorModel{}, PhasePolicy::zero()});
}

SystemState unitary_evolve(const SystemState& state, double t_target) {
  if (state.mode != EvolutionMode::unitary) {
    throw DomainError("unitary_evolve requires a unitary-mode state");
  }
  require_forward(state, t_target);
  if (t_target == state.time) return state;

  const Sample& sample = state.chamber.sample;
  const Branch* intact = state.find(BranchKind::intact);
  const Branch* decayed = state.find(BranchKind::decayed);
  const double a = intact ? intact->norm : 0.0;
  const double b = decayed ? decayed->norm : 0.0;

  // Memoryless flow from intact to decayed over [time, t_target].
  const double log_ratio = log_intact_norm(sample, t_target) - log_intact_norm(sample, state.time);
  const double kept = a * std::exp(log_ratio);
  const double moved = a * -std::expm1(log_ratio);

  // Decay times are smeared over [0, t]; one effective packet per branch
  // with its clock at the median of that smear.
  const double t_eff = conditional_median_first_decay(sample, t_target);
  const double departs = t_eff + state.chamber.detector.delay;

  SystemState next = state;
  next.time = t_target;
  next.branches.clear();
  next.branches.push_back(intact_branch(state, kept));
  next.branches.push_back(decayed_branch(state, b + moved, t_eff, departs));
  for (auto& branch : next.branches) place(branch, t_target);
  return next;
}

SystemState advance(const SystemState& state, double t_target) {
  if (state.mode != EvolutionMode::collapse) {
    throw DomainError("advance requires a collapse-mode state");
  }
  require_forward(state, t_target);
  SystemState next = state;
  next.time = t_target;
  for (auto& branch : next.branches) place(branch, t_target);
  return next;
}

SystemState inject_test_particle(const SystemState& state, const DetectorModel& detector, double at,
                                 Rng& rng) {
  validate(detector);
  if (!state.find(BranchKind::intact)) {
    throw DomainError("inject_test_particle requires an intact branch");
  }
  require_forward(state, at);
  if (!rng.bernoulli(detector.efficiency)) return state;

  SystemState next = state;
  next.mode = EvolutionMode::collapse;
  next.time = at;
  next.branches = {decayed_branch(state, 1.0, at, at + detector.delay)};
  place(next.branches.front(), at);
  return next;
}

const char* to_string(MirrorConfig config) {
  switch (config) {
    case MirrorConfig::down:
      return "down";
    case MirrorConfig::up:
      return "up";
    case MirrorConfig::moving:
      return "moving";
  }
  return "?";
}

TrialOutcome collapse_run(const Chamber& chamber, double horizon, std::uint64_t rng_seed) {
  validate(chamber);
  if (!(horizon >= 0.0)) throw DomainError("horizon >= 0 required");

  TrialOutcome out;
  out.seed = rng_seed;
  out.imperfect_shielding = chamber.imperfect_shielding;

  Rng rng(rng_seed);
  const double n = chamber.sample.n_nuclei();
  const double tau = chamber.sample.law().mean_life();
  const auto& det = chamber.detector;

  const double first = rng.exponential(tau / n);
  if (!(first <= horizon)) return out;  // also rejects a stable sample's inf/huge draw
  out.decayed = true;
  out.decay_time = first;

  double detected_decay = INFINITY;
  if (rng.bernoulli(det.efficiency)) {
    detected_decay = first;
  } else {
    // Missed. The other n - 1 nuclei restart at `first` by memorylessness.
    detected_decay = first + first_detected_decay(n - 1.0, tau, det.efficiency, rng);
  }

  const double detect = detected_decay + det.delay;
  if (detect <= horizon) {
    out.decay_time = detected_decay;
    out.detect_time = detect;
    out.final_config = detect + chamber.switch_path.transit_time <= horizon ? MirrorConfig::up
                                                                            : MirrorConfig::moving;
  }
  return out;
}

std::vector<TrialOutcome> collapse_trials(const Chamber& chamber, double horizon,
                                          std::uint64_t run_seed, std::size_t trials) {
  std::vector<TrialOutcome> out;
  out.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    out.push_back(collapse_run(chamber, horizon, derive_seed(run_seed, i)));
  }
  return out;
}

SystemState observed_state(const Chamber& chamber, const TrialOutcome& outcome, double t) {
  validate(chamber);
  if (!(t >= 0.0)) throw DomainError("observed_state: t >= 0 required");
  SystemState state{{}, 0.0, EvolutionMode::unitary, chamber, {0.0, 0.0}};
  state.phases = chamber.phases.resolve();
  state.mode = EvolutionMode::collapse;
  state.time = t;

  if (outcome.detect_time && t >= *outcome.detect_time) {
    const double decay = outcome.decay_time.value_or(*outcome.detect_time - chamber.detector.delay);
    state.branches = {decayed_branch(state, 1.0, decay, *outcome.detect_time)};
  } else {
    // Only decays within the last delay window can still be unregistered.
    const double window = std::min(t, chamber.detector.delay);
    const BranchNorms norms = sample_branch_norms(chamber.sample, window);
    state.branches = {intact_branch(state, norms.intact)};
    Branch pending = intact_branch(state, norms.decayed);
    pending.kind = BranchKind::decayed;
    pending.phase = state.phases[1];
    pending.packet.global_phase = pending.phase;
    state.branches.push_back(pending);
  }
  for (auto& branch : state.branches) place(branch, t);
  return state;
}

std::string trial_csv_header() { return "seed,decayed,decay_time,detect_time,final_config"; }

std::string to_csv_row(const TrialOutcome& outcome) {
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return std::string(buf);
  };
  return std::to_string(outcome.seed) + ',' + (outcome.decayed ? "1" : "0") + ',' +
         num(outcome.decay_time) + ',' + num(outcome.detect_time) + ',' +
         to_string(outcome.final_config);
}

}  // namespace catsim
