#include "catsim/density.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "catsim/errors.hpp"

namespace catsim {
namespace {

const Branch& branch_of(const SystemState& state, BranchKind kind) {
  const Branch* b = state.find(kind);
  if (!b) throw DomainError("ensemble member lacks a required branch");
  return *b;
}

}  // namespace

Ensemble::Ensemble(std::vector<EnsembleMember> members, std::size_t max_members)
    : members_(std::move(members)) {
  if (members_.empty()) throw DomainError("ensemble must have at least one member");
  if (members_.size() > max_members) {
    throw DomainError("ensemble has " + std::to_string(members_.size()) + " members, cap is " +
                      std::to_string(max_members));
  }
  double total = 0.0;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw DomainError("ensemble weights must be >= 0");
    total += m.weight;
    branch_of(m.state, BranchKind::intact);
    branch_of(m.state, BranchKind::decayed);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("ensemble weights must sum to 1 (got " + std::to_string(total) + ")");
  }
}

double Ensemble::common_time() const {
  const double t = members_.front().state.time;
  for (const auto& m : members_) {
    if (m.state.time != t) throw DomainError("ensemble members evolved to different times");
  }
  return t;
}

Vec3 branch_expectation(const Ensemble& ensemble, BranchKind kind) {
  ensemble.common_time();
  Vec3 weighted;
  double weight = 0.0;
  for (const auto& m : ensemble.members()) {
    const Branch& b = branch_of(m.state, kind);
    const double w = m.weight * b.norm;
    weighted += w * b.packet.center;
    weight += w;
  }
  if (!(weight > 0.0)) throw DomainError("branch has zero weight in every member");
  return weighted * (1.0 / weight);
}

std::complex<double> mixed_field(const Ensemble& ensemble, const OpticalConfig& config,
                                 BranchKind kind, double s) {
  std::complex<double> sum;
  for (const auto& m : ensemble.members()) {
    const Branch& b = branch_of(m.state, kind);
    sum += m.weight * branch_amplitude(config, path_for(kind), s, b.phase, b.norm);
  }
  return sum;
}

ScreenPattern pattern_mixed(const Ensemble& ensemble, const OpticalConfig& config,
                            std::span<const double> positions, PatternMode mode) {
  ensemble.common_time();
  validate(config);
  if (ensemble.size() == 1) {
    // A pure state goes through the pure-state code paths unchanged.
    const SystemState& state = ensemble.members().front().state;
    if (mode == PatternMode::unitary) return pattern_unitary(config, state.branches, positions);
  }
  // Members differ only in branch norms and phases, so the geometric
  // amplitudes are computed once and rescaled per member.
  std::vector<std::complex<double>> down(positions.size()), up(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    down[i] = branch_amplitude(config, PathKind::down, positions[i], 0.0, 1.0);
    up[i] = branch_amplitude(config, PathKind::up, positions[i], 0.0, 1.0);
  }
  ScreenPattern p;
  p.positions.assign(positions.begin(), positions.end());
  p.intensities.assign(positions.size(), 0.0);
  for (const auto& m : ensemble.members()) {
    const Branch& intact = branch_of(m.state, BranchKind::intact);
    const Branch& decayed = branch_of(m.state, BranchKind::decayed);
    const auto c1 = std::polar(std::sqrt(intact.norm), intact.phase);
    const auto c2 = std::polar(std::sqrt(decayed.norm), decayed.phase);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const auto a1 = c1 * down[i];
      const auto a2 = c2 * up[i];
      const double member_intensity =
          mode == PatternMode::unitary ? std::norm(a1 + a2) : std::norm(a1) + std::norm(a2);
      p.intensities[i] += m.weight * member_intensity;
    }
  }
  return p;
}

std::vector<MemberSpec> parse_ensemble_spec(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("ensemble", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw ConfigError("ensemble", "expected a non-empty array of members");
  }
  std::vector<MemberSpec> specs;
  std::vector<Diagnostic> diags;
  bool any_weight = false;
  bool all_weights = true;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "ensemble[" + std::to_string(i) + "]";
    if (!item.is_object()) {
      diags.push_back({where, "expected an object"});
      continue;
    }
    MemberSpec spec;
    for (const auto& [key, value] : item.items()) {
      if (key == "weight") {
        if (!value.is_number() || value.get<double>() < 0.0) {
          diags.push_back({where + ".weight", "weight >= 0 required"});
        } else {
          spec.weight = value.get<double>();
        }
      } else if (key == "phase_seed") {
        if (!value.is_number_unsigned()) {
          diags.push_back({where + ".phase_seed", "non-negative integer required"});
        } else {
          spec.phase_seed = value.get<std::uint64_t>();
        }
      } else if (key == "trajectory_perturbation") {
        if (!value.is_array() || value.size() != 3 || !value[0].is_number() || !value[1].is_number() ||
            !value[2].is_number()) {
          diags.push_back({where + ".trajectory_perturbation", "expected [dx, dy, dz] in cm"});
        } else {
          spec.trajectory_perturbation = {value[0].get<double>(), value[1].get<double>(),
                                          value[2].get<double>()};
        }
      } else {
        diags.push_back({where + "." + key, "unknown key"});
      }
    }
    const bool has_weight = item.contains("weight");
    any_weight = any_weight || has_weight;
    all_weights = all_weights && has_weight;
    specs.push_back(spec);
  }
  if (any_weight && !all_weights) {
    diags.push_back({"ensemble", "either every member or no member sets a weight"});
  }
  if (!diags.empty()) throw ConfigError(std::move(diags));
  if (!any_weight) {
    for (auto& s : specs) s.weight = 1.0 / static_cast<double>(specs.size());
  }
  return specs;
}

Ensemble build_ensemble(const Chamber& chamber, std::span<const MemberSpec> specs, double t,
                        std::size_t max_members) {
  if (specs.size() > max_members) {
    throw DomainError("ensemble spec has " + std::to_string(specs.size()) + " members, cap is " +
                      std::to_string(max_members));
  }
  std::vector<EnsembleMember> members;
  members.reserve(specs.size());
  for (const auto& spec : specs) {
    Chamber c = chamber;
    c.phases = PhasePolicy::random(spec.phase_seed);
    c.switch_path.end += spec.trajectory_perturbation;
    members.push_back({spec.weight, unitary_evolve(prepare(c), t)});
  }
  return Ensemble(std::move(members), max_members);
}

Ensemble random_phase_ensemble(const Chamber& chamber, std::size_t members, std::uint64_t seed,
                               double t) {
  std::vector<MemberSpec> specs(members);
  for (std::size_t i = 0; i < members; ++i) {
    specs[i].weight = 1.0 / static_cast<double>(members);
    specs[i].phase_seed = derive_seed(seed, i);
  }
  return build_ensemble(chamber, specs, t, std::max(members, Ensemble::default_max_members));
}

}  // namespace catsim
