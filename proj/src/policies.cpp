#include "wcmdp/policies.hpp"

#include <cmath>

#include "wcmdp/errors.hpp"

namespace wcmdp {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::lp_update_full: return "lp-update-full";
    case PolicyKind::lp_update_selective: return "lp-update-selective";
    case PolicyKind::occupation: return "occupation";
    case PolicyKind::passive: return "passive";
  }
  return "unknown";
}

PolicyKind policy_from_string(const std::string& name) {
  if (name == "lp-update-full") return PolicyKind::lp_update_full;
  if (name == "lp-update-selective") return PolicyKind::lp_update_selective;
  if (name == "occupation" || name == "occupation-measure") return PolicyKind::occupation;
  if (name == "passive") return PolicyKind::passive;
  throw ContractViolation("unknown policy '" + name + "'");
}

Trajectory::Trajectory(RelaxedSolution s) : sol_(std::move(s)) {
  examined_.assign(sol_.y_star.size(), 0);
  maps_.resize(sol_.y_star.size());
}

const LocalLinearMap* Trajectory::map_at(const Model& model, int t) const {
  const auto k = static_cast<std::size_t>(t - sol_.t0);
  if (k >= examined_.size()) throw ContractViolation("epoch outside the trajectory");
  if (!examined_[k]) {
    const ActiveSets act = active_sets(model, sol_, t);
    if (cstar_rank(model, act) == static_cast<int>(act.rows())) {
      try {
        maps_[k] = build_local_linear_map(model, sol_, t);
      } catch (const RankError&) {
        maps_[k].reset();
      }
    }
    examined_[k] = 1;
  }
  return maps_[k] ? &*maps_[k] : nullptr;
}

void Trajectory::precompute(const Model& model) const {
  for (int t = sol_.t0; t < sol_.t0 + static_cast<int>(sol_.y_star.size()); ++t) map_at(model, t);
}

std::shared_ptr<const PolicyPlan> make_plan(const Model& model, const PolicyConfig& config, const ConfigVector& m0) {
  auto plan = std::make_shared<PolicyPlan>();
  plan->m0 = m0;
  if (config.kind == PolicyKind::passive) return plan;
  plan->initial.emplace(solve_relaxed(model, m0, 0));
  if (config.kind == PolicyKind::lp_update_selective) plan->initial->precompute(model);
  return plan;
}

std::vector<std::vector<double>> occupation_measure(const Model& model, const RelaxedSolution& sol, int t) {
  const int na = model.action_count();
  std::vector<std::vector<double>> mu(static_cast<std::size_t>(model.d()), std::vector<double>(static_cast<std::size_t>(na), 0.0));
  const DecisionVector& y = sol.y(t);
  const ConfigVector& m = sol.m(t);
  for (int s = 0; s < model.d(); ++s) {
    auto& row = mu[static_cast<std::size_t>(s)];
    const double ms = m[static_cast<std::size_t>(s)];
    if (ms > 0.0) {
      for (int a = 0; a < na; ++a) row[static_cast<std::size_t>(a)] = std::max(0.0, y(s, a)) / ms;
    } else {
      row[0] = 1.0;
    }
  }
  return mu;
}

Policy::Policy(const Model& model, PolicyConfig config, std::shared_ptr<const PolicyPlan> plan)
    : model_(&model), config_(config), plan_(std::move(plan)) {}

void Policy::reset(const ConfigVector& m0, long N) {
  if (N < 1) throw ContractViolation("N must be positive");
  if (!is_config(m0, N)) throw ContractViolation("N*m0 must be an integer probability vector");
  N_ = N;
  update_ = true;
  update_count_ = 0;
  current_ = nullptr;
  own_.reset();
  if (!plan_ || plan_->m0.m != m0.m) plan_ = make_plan(*model_, config_, m0);
  if (config_.kind == PolicyKind::occupation) {
    current_ = &*plan_->initial;
    update_count_ = 1;
  }
}

const RelaxedSolution* Policy::cached_solution() const { return current_ ? &current_->sol() : nullptr; }

const Trajectory& Policy::solve_from(int t, const ConfigVector& M) {
  ++update_count_;
  if (t == 0 && plan_ && plan_->initial && plan_->m0.m == M.m) {
    own_.reset();
    current_ = &*plan_->initial;
  } else {
    own_.emplace(solve_relaxed(*model_, M, t));
    current_ = &*own_;
  }
  return *current_;
}

DecisionVector Policy::next_decision(int t, const ConfigVector& M, Rng& rng) {
  if (N_ == 0) throw ContractViolation("policy used before reset");
  if (t < 0 || t >= model_->horizon()) throw ContractViolation("epoch out of range");
  switch (config_.kind) {
    case PolicyKind::lp_update_full: return decide_full(t, M, rng);
    case PolicyKind::lp_update_selective: return decide_selective(t, M, rng);
    case PolicyKind::occupation: return decide_occupation(t, M, rng);
    case PolicyKind::passive: return passive_decision(*model_, M);
  }
  throw ContractViolation("unknown policy kind");
}

DecisionVector Policy::decide_full(int t, const ConfigVector& M, Rng& rng) {
  const Trajectory& traj = solve_from(t, M);
  return round_decision(config_.rounding, traj.sol().y(t), M, N_, *model_, t, rng).Y;
}

DecisionVector Policy::decide_selective(int t, const ConfigVector& M, Rng& rng) {
  DecisionVector y;
  if (!update_) {
    update_ = true;
    if (const LocalLinearMap* map = current_->map_at(*model_, t)) {
      y = local_linear_decision(*map, M);
      if (is_feasible_decision(*model_, t, M, y)) update_ = false;
    }
  }
  if (update_) {
    y = solve_from(t, M).sol().y(t);
    update_ = false;
  }
  return round_decision(config_.rounding, y, M, N_, *model_, t, rng).Y;
}

DecisionVector Policy::decide_occupation(int t, const ConfigVector& M, Rng& rng) {
  const Model& model = *model_;
  const int d = model.d();
  const int na = model.action_count();
  const auto mu = occupation_measure(model, current_->sol(), t);
  const EpochParams& e = model.epoch(t);
  std::vector<double> B(e.b.size());
  for (std::size_t j = 0; j < B.size(); ++j) B[j] = static_cast<double>(N_) * e.b[j];

  std::vector<int> arms;
  arms.reserve(static_cast<std::size_t>(N_));
  for (int s = 0; s < d; ++s) {
    const long n = std::lround(static_cast<double>(N_) * M[static_cast<std::size_t>(s)]);
    arms.insert(arms.end(), static_cast<std::size_t>(n), s);
  }
  if (config_.shuffle_arms) {
    for (std::size_t i = arms.size(); i > 1; --i) {
      const auto k = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
      std::swap(arms[i - 1], arms[std::min(k, i - 1)]);
    }
  }

  std::vector<long> counts(static_cast<std::size_t>(model.pairs()), 0);
  for (int s : arms) {
    const auto& row = mu[static_cast<std::size_t>(s)];
    const double u = uniform01(rng);
    int a = 0;
    double acc = 0.0;
    for (int c = 0; c < na; ++c) {
      acc += row[static_cast<std::size_t>(c)];
      if (u < acc) {
        a = c;
        break;
      }
      a = c;
    }
    // Numerical slack in the cumulative sum must not select a zero-weight action.
    while (a > 0 && row[static_cast<std::size_t>(a)] == 0.0) --a;
    const auto col = static_cast<std::size_t>(model.column(s, a));
    bool ok = true;
    for (std::size_t j = 0; j < B.size() && ok; ++j) ok = B[j] - e.D(j, col) >= -1e-9;
    if (ok) {
      for (std::size_t j = 0; j < B.size(); ++j) B[j] -= e.D(j, col);
    } else {
      a = 0;
    }
    ++counts[static_cast<std::size_t>(model.column(s, a))];
  }
  DecisionVector Y(d, na);
  for (std::size_t c = 0; c < counts.size(); ++c)
    Y.values()[c] = static_cast<double>(counts[c]) / static_cast<double>(N_);
  return Y;
}

}  // namespace wcmdp
