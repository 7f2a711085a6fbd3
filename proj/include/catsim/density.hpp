#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "catsim/branching.hpp"
#include "catsim/interferometer.hpp"

namespace catsim {

struct EnsembleMember {
  double weight;
  SystemState state;
};

/// Mixed state held extensionally as weighted pure states. Every quantity
/// computed from it is affine in the weights, so no operator matrix is formed.
class Ensemble {
 public:
  static constexpr std::size_t default_max_members = 4096;

  explicit Ensemble(std::vector<EnsembleMember> members,
                    std::size_t max_members = default_max_members);

  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  /// Common evolution time; throws DomainError if members disagree.
  double common_time() const;

 private:
  std::vector<EnsembleMember> members_;
};

/// Tr(rho_i x_cm) / Tr(rho_i): mirror position of branch `kind` averaged
/// over members with weights p^n N_i^n.
Vec3 branch_expectation(const Ensemble& ensemble, BranchKind kind);

/// gamma_i(s) = sum_n p^n A_i^n(s), the ensemble-averaged photon amplitude of
/// one branch.
std::complex<double> mixed_field(const Ensemble& ensemble, const OpticalConfig& config,
                                 BranchKind kind, double s);

enum class PatternMode { unitary, collapsed };

/// unitary: Tr(rho I(s)) = sum_n p^n |A_1^n + A_2^n|^2, which keeps each
/// member's two coherent branches and averages the cross term over members.
/// collapsed: sum_n p^n sum_i |A_i^n|^2.
ScreenPattern pattern_mixed(const Ensemble& ensemble, const OpticalConfig& config,
                            std::span<const double> positions, PatternMode mode);

struct MemberSpec {
  double weight = 1.0;
  std::uint64_t phase_seed = 0;
  Vec3 trajectory_perturbation;  // added to the up-site of the mirror path
};

/// Parses `[{"weight": w, "phase_seed": s, "trajectory_perturbation": [dx, dy, dz]}, ...]`.
/// Missing weights default to equal shares. Throws ConfigError.
std::vector<MemberSpec> parse_ensemble_spec(std::string_view json_text);

/// Each member is the chamber with random phases from its phase_seed and a
/// perturbed switch path, prepared and unitarily evolved to t.
Ensemble build_ensemble(const Chamber& chamber, std::span<const MemberSpec> specs, double t,
                        std::size_t max_members = Ensemble::default_max_members);

/// `members` equal-weight members with independent random phases.
Ensemble random_phase_ensemble(const Chamber& chamber, std::size_t members, std::uint64_t seed,
                               double t);

}  // namespace catsim
