#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wcmdp/errors.hpp"
#include "wcmdp/numerics.hpp"

namespace wcmdp {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;     // smallest admissible pivot element
constexpr double kBreakdownTol = 1e-11;
constexpr double kDegenerateStep = 1e-12;

struct SparseColumn {
  std::vector<int> row;
  std::vector<double> val;
};

class RevisedSimplex {
 public:
  RevisedSimplex(const StandardLp& lp, const LpOptions& options) : lp_(lp), options_(options) { setup(); }

  LpSolution run();

 private:
  enum class Outcome { optimal, unbounded };

  void setup();
  Outcome iterate(bool phase_one);
  void recompute_duals();
  void recompute_primal();
  void compute_column(int j, std::vector<double>& w) const;
  void pivot(int r, int q, const std::vector<double>& w, double theta, double dq);
  void drive_out_artificials();
  void reinvert();
  double reduced_cost(int j) const;
  bool residuals_ok(const std::vector<double>& y) const;
  std::vector<double> structural_values() const;

  const StandardLp& lp_;
  LpOptions options_;
  int m_ = 0;
  int n_struct_ = 0;
  int n_total_ = 0;
  std::vector<SparseColumn> cols_;
  std::vector<double> rhs_;
  std::vector<char> artificial_;
  std::vector<double> cost_;
  std::vector<int> head_;
  std::vector<int> pos_;
  std::vector<double> binv_;
  std::vector<double> x_;
  std::vector<double> pi_;
  double cost_scale_ = 1.0;
  double rhs_scale_ = 1.0;
  int iterations_ = 0;
  int max_iterations_ = 0;
};

void RevisedSimplex::setup() {
  const std::size_t n = lp_.c.size();
  const std::size_t me = lp_.A_eq.rows();
  const std::size_t mu = lp_.A_ub.rows();
  if (lp_.b_eq.size() != me || lp_.b_ub.size() != mu)
    throw ContractViolation("LP right-hand side sizes do not match constraint rows");
  if ((me > 0 && lp_.A_eq.cols() != n) || (mu > 0 && lp_.A_ub.cols() != n))
    throw ContractViolation("LP constraint columns do not match the objective length");
  for (double v : lp_.c)
    if (!std::isfinite(v)) throw ContractViolation("LP objective has a non-finite entry");

  m_ = static_cast<int>(me + mu);
  n_struct_ = static_cast<int>(n);
  rhs_.assign(static_cast<std::size_t>(m_), 0.0);
  std::vector<double> sign(static_cast<std::size_t>(m_), 1.0);
  for (std::size_t i = 0; i < me; ++i) {
    const double b = lp_.b_eq[i];
    if (!std::isfinite(b)) throw ContractViolation("LP rhs has a non-finite entry");
    sign[i] = b < 0 ? -1.0 : 1.0;
    rhs_[i] = sign[i] * b;
  }
  for (std::size_t i = 0; i < mu; ++i) {
    const double b = lp_.b_ub[i];
    if (!std::isfinite(b)) throw ContractViolation("LP rhs has a non-finite entry");
    sign[me + i] = b < 0 ? -1.0 : 1.0;
    rhs_[me + i] = sign[me + i] * b;
  }

  cols_.assign(n, {});
  auto scatter = [&](const Matrix& A, std::size_t offset) {
    for (std::size_t i = 0; i < A.rows(); ++i) {
      const auto row = A.row(i);
      const double s = sign[offset + i];
      for (std::size_t j = 0; j < n; ++j) {
        const double v = row[j];
        if (v == 0.0) continue;
        if (!std::isfinite(v)) throw ContractViolation("LP matrix has a non-finite entry");
        cols_[j].row.push_back(static_cast<int>(offset + i));
        cols_[j].val.push_back(s * v);
      }
    }
  };
  scatter(lp_.A_eq, 0);
  scatter(lp_.A_ub, me);

  head_.assign(static_cast<std::size_t>(m_), -1);
  // Slacks of <= rows.
  for (std::size_t i = 0; i < mu; ++i) {
    const int r = static_cast<int>(me + i);
    cols_.push_back({{r}, {sign[me + i]}});
    if (sign[me + i] > 0) head_[static_cast<std::size_t>(r)] = static_cast<int>(cols_.size()) - 1;
  }
  artificial_.assign(cols_.size(), 0);
  for (int r = 0; r < m_; ++r) {
    if (head_[static_cast<std::size_t>(r)] >= 0) continue;
    cols_.push_back({{r}, {1.0}});
    artificial_.push_back(1);
    head_[static_cast<std::size_t>(r)] = static_cast<int>(cols_.size()) - 1;
  }
  n_total_ = static_cast<int>(cols_.size());
  pos_.assign(static_cast<std::size_t>(n_total_), -1);
  for (int r = 0; r < m_; ++r) pos_[static_cast<std::size_t>(head_[static_cast<std::size_t>(r)])] = r;

  binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
  for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(r)] = 1.0;
  x_ = rhs_;

  cost_scale_ = 1.0;
  for (double v : lp_.c) cost_scale_ = std::max(cost_scale_, std::abs(v));
  rhs_scale_ = 1.0;
  for (double v : rhs_) rhs_scale_ = std::max(rhs_scale_, std::abs(v));
  max_iterations_ = options_.max_iterations > 0 ? options_.max_iterations : 50 * (m_ + n_total_) + 100;
}

double RevisedSimplex::reduced_cost(int j) const {
  const auto& col = cols_[static_cast<std::size_t>(j)];
  double d = cost_[static_cast<std::size_t>(j)];
  for (std::size_t k = 0; k < col.row.size(); ++k) d -= pi_[static_cast<std::size_t>(col.row[k])] * col.val[k];
  return d;
}

void RevisedSimplex::recompute_duals() {
  const auto m = static_cast<std::size_t>(m_);
  pi_.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cost_[static_cast<std::size_t>(head_[i])];
    if (cb == 0.0) continue;
    const double* row = binv_.data() + i * m;
    for (std::size_t k = 0; k < m; ++k) pi_[k] += cb * row[k];
  }
}

void RevisedSimplex::recompute_primal() {
  const auto m = static_cast<std::size_t>(m_);
  x_.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const double b = rhs_[k];
    if (b == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) x_[i] += binv_[i * m + k] * b;
  }
}

void RevisedSimplex::compute_column(int j, std::vector<double>& w) const {
  const auto m = static_cast<std::size_t>(m_);
  w.assign(m, 0.0);
  const auto& col = cols_[static_cast<std::size_t>(j)];
  for (std::size_t k = 0; k < col.row.size(); ++k) {
    const auto c = static_cast<std::size_t>(col.row[k]);
    const double a = col.val[k];
    for (std::size_t i = 0; i < m; ++i) {
      const double v = binv_[i * m + c];
      if (v != 0.0) w[i] += v * a;
    }
  }
}

void RevisedSimplex::pivot(int r, int q, const std::vector<double>& w, double theta, double dq) {
  const auto m = static_cast<std::size_t>(m_);
  const auto ru = static_cast<std::size_t>(r);
  double* prow = binv_.data() + ru * m;
  const double inv = 1.0 / w[ru];
  std::vector<std::size_t> nz;
  nz.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (prow[k] != 0.0) {
      prow[k] *= inv;
      nz.push_back(k);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (i == ru) continue;
    const double f = w[i];
    if (f == 0.0) continue;
    double* row = binv_.data() + i * m;
    for (std::size_t k : nz) row[k] -= f * prow[k];
  }
  for (std::size_t i = 0; i < m; ++i) x_[i] -= theta * w[i];
  x_[ru] = theta;
  if (dq != 0.0)
    for (std::size_t k : nz) pi_[k] += dq * prow[k];

  const int leaving = head_[ru];
  pos_[static_cast<std::size_t>(leaving)] = -1;
  head_[ru] = q;
  pos_[static_cast<std::size_t>(q)] = r;
  ++iterations_;
}

RevisedSimplex::Outcome RevisedSimplex::iterate(bool phase_one) {
  const auto m = static_cast<std::size_t>(m_);
  const double dtol = 1e-9 * (phase_one ? 1.0 : cost_scale_);
  const double ftol = 1e-9 * rhs_scale_;
  recompute_duals();
  int stall = 0;
  int since_refresh = 0;
  std::vector<double> w;
  while (true) {
    if (iterations_ >= max_iterations_)
      throw SolverError("simplex iteration limit reached (" + std::to_string(max_iterations_) + ")");
    if (++since_refresh >= 64) {
      recompute_duals();
      recompute_primal();
      since_refresh = 0;
    }
    const bool bland = stall >= options_.stall_limit;

    int q = -1;
    double best = dtol;
    for (int j = 0; j < n_total_; ++j) {
      if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
      if (!phase_one && artificial_[static_cast<std::size_t>(j)]) continue;
      const double d = reduced_cost(j);
      if (d > best) {
        best = d;
        q = j;
        if (bland) break;
      }
    }
    if (q < 0) {
      // Confirm with fresh duals before declaring optimality.
      if (since_refresh != 0) {
        recompute_duals();
        recompute_primal();
        since_refresh = 0;
        bool improving = false;
        for (int j = 0; j < n_total_ && !improving; ++j) {
          if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
          if (!phase_one && artificial_[static_cast<std::size_t>(j)]) continue;
          improving = reduced_cost(j) > dtol;
        }
        if (improving) continue;
      }
      return Outcome::optimal;
    }
    const double dq = reduced_cost(q);

    compute_column(q, w);
    int r = -1;
    if (bland) {
      double theta_min = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i)
        if (w[i] > kPivotTol) theta_min = std::min(theta_min, std::max(x_[i], 0.0) / w[i]);
      for (std::size_t i = 0; i < m; ++i) {
        if (w[i] <= kPivotTol || std::max(x_[i], 0.0) / w[i] > theta_min + 1e-12) continue;
        if (r < 0 || head_[i] < head_[static_cast<std::size_t>(r)]) r = static_cast<int>(i);
      }
    } else {
      // Two-pass (Harris) ratio test: bound the step with relaxed
      // feasibility, then take the largest pivot element under that bound.
      double bound = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m; ++i) {
        if (w[i] <= kPivotTol) continue;
        bound = std::min(bound, (std::max(x_[i], 0.0) + ftol) / w[i]);
      }
      double best_w = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        if (w[i] <= kPivotTol) continue;
        if (std::max(x_[i], 0.0) / w[i] <= bound && w[i] > best_w) {
          best_w = w[i];
          r = static_cast<int>(i);
        }
      }
    }
    if (r < 0) {
      double largest = 0.0;
      for (double v : w) largest = std::max(largest, v);
      if (largest > kBreakdownTol) {
        throw SolverError("numerical breakdown: entering column " + std::to_string(q) +
                          " has only pivot candidates below 1e-9 (largest " + std::to_string(largest) + ")");
      }
      if (phase_one) throw SolverError("phase one reported an unbounded ray");
      return Outcome::unbounded;
    }
    const double theta = std::max(x_[static_cast<std::size_t>(r)], 0.0) / w[static_cast<std::size_t>(r)];
    stall = theta * std::max(1.0, dq) <= kDegenerateStep ? stall + 1 : 0;
    pivot(r, q, w, theta, dq);
  }
}

void RevisedSimplex::drive_out_artificials() {
  const auto m = static_cast<std::size_t>(m_);
  std::vector<double> w;
  for (std::size_t r = 0; r < m; ++r) {
    if (!artificial_[static_cast<std::size_t>(head_[r])]) continue;
    const double* rho = binv_.data() + r * m;
    int best_j = -1;
    double best_a = 1e-7;
    for (int j = 0; j < n_total_; ++j) {
      if (pos_[static_cast<std::size_t>(j)] >= 0 || artificial_[static_cast<std::size_t>(j)]) continue;
      const auto& col = cols_[static_cast<std::size_t>(j)];
      double a = 0.0;
      for (std::size_t k = 0; k < col.row.size(); ++k) a += rho[col.row[k]] * col.val[k];
      if (std::abs(a) > best_a) {
        best_a = std::abs(a);
        best_j = j;
      }
    }
    if (best_j < 0) continue;  // redundant row; artificial stays basic at zero
    compute_column(best_j, w);
    const double theta = x_[r] / w[r];
    pivot(static_cast<int>(r), best_j, w, theta, 0.0);
  }
}

void RevisedSimplex::reinvert() {
  const auto m = static_cast<std::size_t>(m_);
  Matrix B(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    const auto& col = cols_[static_cast<std::size_t>(head_[r])];
    for (std::size_t k = 0; k < col.row.size(); ++k) B(static_cast<std::size_t>(col.row[k]), r) = col.val[k];
  }
  // Gauss-Jordan with partial pivoting on [B | I].
  Matrix inv = Matrix::identity(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < m; ++i)
      if (std::abs(B(i, k)) > std::abs(B(piv, k))) piv = i;
    if (std::abs(B(piv, k)) <= kBreakdownTol) throw SolverError("basis matrix is singular during reinversion");
    if (piv != k) {
      std::swap_ranges(B.row(piv).begin(), B.row(piv).end(), B.row(k).begin());
      std::swap_ranges(inv.row(piv).begin(), inv.row(piv).end(), inv.row(k).begin());
    }
    const double d = 1.0 / B(k, k);
    for (auto& v : B.row(k)) v *= d;
    for (auto& v : inv.row(k)) v *= d;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double f = B(i, k);
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < m; ++c) {
        B(i, c) -= f * B(k, c);
        inv(i, c) -= f * inv(k, c);
      }
    }
  }
  binv_ = inv.data();
  recompute_primal();
}

std::vector<double> RevisedSimplex::structural_values() const {
  std::vector<double> y(static_cast<std::size_t>(n_struct_), 0.0);
  for (int r = 0; r < m_; ++r) {
    const int j = head_[static_cast<std::size_t>(r)];
    if (j < n_struct_) y[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(r)];
  }
  return y;
}

bool RevisedSimplex::residuals_ok(const std::vector<double>& y) const {
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
  };
  const double eq_tol = 1e-8 * (1.0 + norm(lp_.b_eq));
  const double ub_tol = 1e-8 * (1.0 + norm(lp_.b_ub));
  for (double v : y)
    if (v < -1e-10) return false;
  for (std::size_t i = 0; i < lp_.A_eq.rows(); ++i) {
    const auto row = lp_.A_eq.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) acc += row[j] * y[j];
    if (std::abs(acc - lp_.b_eq[i]) > eq_tol) return false;
  }
  for (std::size_t i = 0; i < lp_.A_ub.rows(); ++i) {
    const auto row = lp_.A_ub.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) acc += row[j] * y[j];
    if (acc > lp_.b_ub[i] + ub_tol) return false;
  }
  return true;
}

LpSolution RevisedSimplex::run() {
  LpSolution sol;
  const bool need_phase_one =
      std::any_of(head_.begin(), head_.end(), [&](int j) { return artificial_[static_cast<std::size_t>(j)] != 0; });
  if (need_phase_one) {
    cost_.assign(static_cast<std::size_t>(n_total_), 0.0);
    for (int j = 0; j < n_total_; ++j)
      if (artificial_[static_cast<std::size_t>(j)]) cost_[static_cast<std::size_t>(j)] = -1.0;
    iterate(true);
    recompute_primal();
    double infeasibility = 0.0;
    for (int r = 0; r < m_; ++r)
      if (artificial_[static_cast<std::size_t>(head_[static_cast<std::size_t>(r)])])
        infeasibility += std::max(0.0, x_[static_cast<std::size_t>(r)]);
    if (infeasibility > 1e-8 * rhs_scale_) {
      sol.status = LpStatus::infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    drive_out_artificials();
  }

  cost_.assign(static_cast<std::size_t>(n_total_), 0.0);
  for (int j = 0; j < n_struct_; ++j) cost_[static_cast<std::size_t>(j)] = lp_.c[static_cast<std::size_t>(j)];

  for (int attempt = 0; attempt < 2; ++attempt) {
    if (iterate(false) == Outcome::unbounded) {
      sol.status = LpStatus::unbounded;
      sol.iterations = iterations_;
      return sol;
    }
    recompute_primal();
    std::vector<double> y = structural_values();
    for (double& v : y)
      if (v < 0.0 && v > -1e-9 * rhs_scale_) v = 0.0;
    if (residuals_ok(y)) {
      sol.status = LpStatus::optimal;
      sol.y = std::move(y);
      sol.value = 0.0;
      for (std::size_t j = 0; j < sol.y.size(); ++j) sol.value += lp_.c[j] * sol.y[j];
      for (int r = 0; r < m_; ++r)
        if (head_[static_cast<std::size_t>(r)] < n_struct_) sol.basis.push_back(head_[static_cast<std::size_t>(r)]);
      std::sort(sol.basis.begin(), sol.basis.end());
      sol.iterations = iterations_;
      return sol;
    }
    reinvert();
  }
  throw SolverError("final point fails residual checks after reinversion");
}

}  // namespace

LpSolution solve_lp(const StandardLp& lp, const LpOptions& options) {
  RevisedSimplex simplex(lp, options);
  return simplex.run();
}

}  // namespace wcmdp
