#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wcmdp/model.hpp"
#include "wcmdp/numerics.hpp"

namespace wcmdp {

struct RelaxationOptions {
  /// Pose each budget row as D y(t) = b instead of <=. Used by the
  /// two-action degeneracy cross-check.
  bool budget_equality = false;
  /// Drop (t, s) blocks that no action sequence can reach from the support
  /// of m0. Their variables are forced to zero by the flow rows, so the
  /// optimum is unchanged. solve_relaxed always prunes.
  bool prune_unreachable = false;
  /// Drop y(s,a) when action a has the same transition row as the passive
  /// action at s, no larger reward and no smaller consumption. Moving that
  /// mass to the passive action keeps every row satisfied, so the optimum is
  /// unchanged. Ignored when budget_equality is set. solve_relaxed always
  /// applies it.
  bool prune_dominated = false;
};

/// Optimal fluid trajectory from (m0, t0).
struct RelaxedSolution {
  int t0 = 0;
  int horizon = 0;
  std::vector<DecisionVector> y_star;  ///< epochs t0..T-1
  std::vector<ConfigVector> m_star;    ///< epochs t0..T
  double value = 0.0;
  bool budget_equality = false;

  const DecisionVector& y(int t) const { return y_star.at(static_cast<std::size_t>(t - t0)); }
  const ConfigVector& m(int t) const { return m_star.at(static_cast<std::size_t>(t - t0)); }
};

/// Expected next configuration: phi(y)_s = sum_{s',a} y(s',a) P^a(s',s)
/// with the matrices of epoch t.
ConfigVector phi(const Model& model, int t, const DecisionVector& y);

/// Relaxed LP over epochs t0..T-1. Variables are y_{s,a}(t) laid out as
/// (t - t0) * d(A+1) + s(A+1) + a (unpruned). Equality rows: d initial rows,
/// then d flow rows per later epoch. Inequality rows: J budget rows per epoch.
StandardLp build_relaxed_lp(const Model& model, const ConfigVector& m0, int t0,
                            const RelaxationOptions& options = {});

/// Solves the relaxed LP and unpacks the trajectory. Throws SolverError
/// (naming the epoch range) if the kernel fails or reports a non-optimal
/// status.
RelaxedSolution solve_relaxed(const Model& model, const ConfigVector& m0, int t0,
                              const RelaxationOptions& options = {});

std::string relaxed_to_json(const RelaxedSolution& sol);
RelaxedSolution relaxed_from_json(std::string_view text);

}  // namespace wcmdp
