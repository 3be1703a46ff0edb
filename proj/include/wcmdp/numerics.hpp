#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wcmdp/matrix.hpp"

namespace wcmdp {

/// maximize c^T y  s.t.  A_eq y = b_eq,  A_ub y <= b_ub,  y >= 0.
struct StandardLp {
  std::vector<double> c;
  Matrix A_eq;
  std::vector<double> b_eq;
  Matrix A_ub;
  std::vector<double> b_ub;

  std::size_t num_variables() const { return c.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  std::vector<double> y;
  double value = 0.0;
  /// Structural variables in the final basis, ascending.
  std::vector<int> basis;
  int iterations = 0;
};

struct LpOptions {
  /// Consecutive degenerate pivots tolerated under largest-coefficient
  /// pricing before switching to Bland's rule.
  int stall_limit = 20;
  /// 0 means 50*(rows+columns).
  int max_iterations = 0;
};

/// Two-phase revised simplex with an explicit dense basis inverse.
///
/// Pricing is largest reduced cost (lowest index on ties); after
/// `stall_limit` consecutive degenerate pivots the solver uses Bland's rule
/// for both entering and leaving choices until the objective moves again.
/// The pivot sequence is a pure function of the input, so identical inputs
/// give identical vertices.
///
/// Throws SolverError when the only admissible pivots are below 1e-11, the
/// iteration cap is hit, or the final point fails its residual check after
/// a reinversion.
LpSolution solve_lp(const StandardLp& lp, const LpOptions& options = {});

/// Numerical rank by Gaussian elimination with partial pivoting over columns.
/// A pivot counts when its magnitude exceeds `tol`; the default tolerance is
/// 1e-8 * ||M||_inf * max(p, q) with ||.||_inf the largest absolute row sum.
int matrix_rank(const Matrix& M, std::optional<double> tol = std::nullopt);

/// Right inverse M^T (M M^T)^{-1} of a full-row-rank matrix.
///
/// The Gram matrix M M^T is factored by Cholesky (LL^T) and the p right-hand
/// sides in M are solved against it. Throws RankError when rank(M) < rows.
Matrix right_inverse(const Matrix& M);

/// Solves the square system A x = b by LU with partial pivoting.
/// Throws RankError if A is numerically singular.
std::vector<double> solve_square(const Matrix& A, const std::vector<double>& b);

}  // namespace wcmdp
