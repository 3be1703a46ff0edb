#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wcmdp/matrix.hpp"
#include "wcmdp/model.hpp"
#include "wcmdp/relaxation.hpp"

namespace wcmdp {

/// Membership threshold for active sets at epoch t: 1e-7 * max(1, ||b(t)||_inf).
double active_threshold(const Model& model, int t);

struct ActiveSets {
  int t = 0;
  std::vector<int> J_star;                  ///< tight budget rows
  std::vector<std::pair<int, int>> U_star;  ///< (s, a) with y* at zero
  std::vector<int> S_star;                  ///< states with positive mass

  std::size_t rows() const { return J_star.size() + S_star.size() + U_star.size(); }
};

ActiveSets active_sets(const Model& model, const RelaxedSolution& sol, int t);

/// Rows in order: unit rows for U*, D_j for j in J*, E_s for s in S*.
Matrix build_cstar(const Model& model, const ActiveSets& active);

/// Rank of C* computed as |U*| + rank(M_F), where M_F holds the J* and S*
/// rows restricted to the columns outside U*. Equal to matrix_rank(C*) but
/// unaffected by large consumption entries on zero columns.
int cstar_rank(const Model& model, const ActiveSets& active);

struct EpochDegeneracy {
  int t = 0;
  int J = 0;
  int S = 0;
  int U = 0;
  int rank = 0;
  int required = 0;
  bool pass = false;
  bool in_verdict = false;
};

struct DegeneracyReport {
  std::vector<EpochDegeneracy> epochs;  ///< t0..T-1
  bool nondegenerate = true;
  std::string summary;
};

/// Verdict covers epochs t0+1..T-1; epoch t0 is reported for diagnostics.
DegeneracyReport is_nondegenerate(const Model& model, const RelaxedSolution& sol);

std::string format_degeneracy_table(const DegeneracyReport& report);

struct LocalLinearMap {
  int t = 0;
  DecisionVector y_anchor;
  ConfigVector m_anchor;
  Matrix C_star;
  Matrix C_plus;
  ActiveSets active;
};

/// Throws RankError when C*(t) is rank deficient.
LocalLinearMap build_local_linear_map(const Model& model, const RelaxedSolution& sol, int t);

/// y(m) = y_anchor + C_plus [0; 0; (m - m_anchor)|S*]. Feasibility is not
/// guaranteed.
DecisionVector local_linear_decision(const LocalLinearMap& map, const ConfigVector& m);

/// S0(t) = {s : y*(s,1) > delta and y*(s,0) > delta} is non-empty for every
/// t in t0+1..T-1. Requires A = 1, J = 1, D(s,1) = 1 and a solution computed
/// with the budget as an equality; throws UnsupportedModel otherwise.
bool twoaction_nondegenerate(const Model& model, const RelaxedSolution& sol);

}  // namespace wcmdp
