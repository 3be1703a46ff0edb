#include <algorithm>
#include <cmath>
#include <string>

#include "wcmdp/errors.hpp"
#include "wcmdp/numerics.hpp"

namespace wcmdp {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw ContractViolation("ragged matrix rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw ContractViolation("matrix product dimension mismatch");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto orow = out.row(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      const auto rrow = rhs.row(k);
      for (std::size_t j = 0; j < rhs.cols_; ++j) orow[j] += a * rrow[j];
    }
  }
  return out;
}

std::vector<double> Matrix::operator*(std::span<const double> x) const {
  if (x.size() != cols_) throw ContractViolation("matrix-vector dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
    out[i] = acc;
  }
  return out;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

int matrix_rank(const Matrix& M, std::optional<double> tol) {
  const std::size_t p = M.rows();
  const std::size_t q = M.cols();
  if (p == 0 || q == 0) return 0;
  const double threshold = tol.value_or(1e-8 * M.norm_inf() * static_cast<double>(std::max(p, q)));
  Matrix work = M;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < q && rank < p; ++col) {
    std::size_t pivot = rank;
    double best = std::abs(work(rank, col));
    for (std::size_t r = rank + 1; r < p; ++r) {
      const double v = std::abs(work(r, col));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (!(best > threshold)) continue;
    if (pivot != rank) std::swap_ranges(work.row(pivot).begin(), work.row(pivot).end(), work.row(rank).begin());
    const double diag = work(rank, col);
    for (std::size_t r = rank + 1; r < p; ++r) {
      const double f = work(r, col) / diag;
      if (f == 0.0) continue;
      for (std::size_t c = col; c < q; ++c) work(r, c) -= f * work(rank, c);
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

Matrix right_inverse(const Matrix& M) {
  const std::size_t p = M.rows();
  const std::size_t q = M.cols();
  const int rank = matrix_rank(M);
  if (rank < static_cast<int>(p)) {
    throw RankError("right inverse needs full row rank: rank " + std::to_string(rank) + " < " + std::to_string(p) +
                    " rows (deficiency " + std::to_string(static_cast<int>(p) - rank) + ")");
  }
  if (p == 0) return Matrix(q, 0);

  // Gram matrix G = M M^T, lower Cholesky factor in place.
  Matrix G(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    const auto ri = M.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto rj = M.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < q; ++k) acc += ri[k] * rj[k];
      G(i, j) = acc;
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    double diag = G(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= G(j, k) * G(j, k);
    if (!(diag > 0.0)) throw RankError("Gram matrix is not positive definite at pivot " + std::to_string(j));
    const double l = std::sqrt(diag);
    G(j, j) = l;
    for (std::size_t i = j + 1; i < p; ++i) {
      double v = G(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= G(i, k) * G(j, k);
      G(i, j) = v / l;
    }
  }

  // X = G^{-1} M via forward then backward substitution; C+ = X^T.
  Matrix X = M;
  for (std::size_t i = 0; i < p; ++i) {
    auto xi = X.row(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double f = G(i, k);
      if (f == 0.0) continue;
      const auto xk = X.row(k);
      for (std::size_t c = 0; c < q; ++c) xi[c] -= f * xk[c];
    }
    const double inv = 1.0 / G(i, i);
    for (double& v : xi) v *= inv;
  }
  for (std::size_t ii = p; ii-- > 0;) {
    auto xi = X.row(ii);
    for (std::size_t k = ii + 1; k < p; ++k) {
      const double f = G(k, ii);
      if (f == 0.0) continue;
      const auto xk = X.row(k);
      for (std::size_t c = 0; c < q; ++c) xi[c] -= f * xk[c];
    }
    const double inv = 1.0 / G(ii, ii);
    for (double& v : xi) v *= inv;
  }
  return X.transpose();
}

std::vector<double> solve_square(const Matrix& A, const std::vector<double>& b) {
  const std::size_t n = A.rows();
  if (A.cols() != n || b.size() != n) throw ContractViolation("solve_square needs a square system");
  Matrix lu = A;
  std::vector<double> x = b;
  const double scale = std::max(1.0, A.max_abs());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(lu(r, k)) > std::abs(lu(piv, k))) piv = r;
    if (std::abs(lu(piv, k)) <= 1e-12 * scale) throw RankError("singular system");
    if (piv != k) {
      std::swap_ranges(lu.row(piv).begin(), lu.row(piv).end(), lu.row(k).begin());
      std::swap(x[piv], x[k]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = lu(r, k) / lu(k, k);
      if (f == 0.0) continue;
      for (std::size_t c = k; c < n; ++c) lu(r, c) -= f * lu(k, c);
      x[r] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double v = x[k];
    for (std::size_t c = k + 1; c < n; ++c) v -= lu(k, c) * x[c];
    x[k] = v / lu(k, k);
  }
  return x;
}

}  // namespace wcmdp
