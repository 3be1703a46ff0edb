#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wcmdp/degeneracy.hpp"
#include "wcmdp/model.hpp"
#include "wcmdp/random.hpp"
#include "wcmdp/relaxation.hpp"
#include "wcmdp/rounding.hpp"

namespace wcmdp {

enum class PolicyKind { lp_update_full, lp_update_selective, occupation, passive };

std::string to_string(PolicyKind kind);
PolicyKind policy_from_string(const std::string& name);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::lp_update_full;
  RoundingMode rounding = RoundingMode::floor;
  /// Occupation policy: visit arms in a seeded random order instead of by state.
  bool shuffle_arms = false;
};

/// One relaxed trajectory plus its local-linear maps. Maps are built on
/// first use; a trajectory shared between threads must be precomputed.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(RelaxedSolution s);

  const RelaxedSolution& sol() const { return sol_; }
  /// Map at epoch t, or nullptr when C*(t) is rank deficient.
  const LocalLinearMap* map_at(const Model& model, int t) const;
  void precompute(const Model& model) const;

 private:
  RelaxedSolution sol_;
  mutable std::vector<char> examined_;
  mutable std::vector<std::optional<LocalLinearMap>> maps_;
};

/// Read-only data shared by every replication of a campaign: the LP solved
/// from (m0, 0) and its local-linear maps, all precomputed.
struct PolicyPlan {
  ConfigVector m0;
  std::optional<Trajectory> initial;
};

std::shared_ptr<const PolicyPlan> make_plan(const Model& model, const PolicyConfig& config, const ConfigVector& m0);

/// One policy instance; confined to one episode at a time.
class Policy {
 public:
  Policy(const Model& model, PolicyConfig config, std::shared_ptr<const PolicyPlan> plan = nullptr);

  /// Starts an episode from m0 with N arms.
  void reset(const ConfigVector& m0, long N);

  /// Integer-feasible decision at epoch t for configuration M.
  DecisionVector next_decision(int t, const ConfigVector& M, Rng& rng);

  const PolicyConfig& config() const { return config_; }
  /// LP solves during the current episode (the initial solve included).
  int update_count() const { return update_count_; }
  bool update_flag() const { return update_; }
  /// Trajectory currently used by the LP-based policies, if any.
  const RelaxedSolution* cached_solution() const;

 private:
  DecisionVector decide_full(int t, const ConfigVector& M, Rng& rng);
  DecisionVector decide_selective(int t, const ConfigVector& M, Rng& rng);
  DecisionVector decide_occupation(int t, const ConfigVector& M, Rng& rng);
  const Trajectory& solve_from(int t, const ConfigVector& M);

  const Model* model_;
  PolicyConfig config_;
  std::shared_ptr<const PolicyPlan> plan_;
  long N_ = 0;
  bool update_ = true;
  int update_count_ = 0;
  /// Points into the shared plan or at `own_`.
  const Trajectory* current_ = nullptr;
  std::optional<Trajectory> own_;
};

/// Occupation measure mu(s,a) = y*(s,a)/m*(s) at epoch t, or the passive
/// indicator where m*(s) = 0.
std::vector<std::vector<double>> occupation_measure(const Model& model, const RelaxedSolution& sol, int t);

}  // namespace wcmdp
