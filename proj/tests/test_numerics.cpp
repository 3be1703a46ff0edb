#include <doctest.h>

#include <random>

#include "oracles/vertex_enum.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/numerics.hpp"

using namespace wcmdp;

namespace {

struct Pair {
  StandardLp lp;
  oracle::DenseLp dense;
};

Pair random_lp(std::mt19937_64& rng, int n, int meq, int mub) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 1.0);
  Pair p;
  p.lp.c.resize(static_cast<std::size_t>(n));
  for (auto& v : p.lp.c) v = u(rng);
  // A feasible point keeps the equality rows consistent.
  std::vector<double> x0(static_cast<std::size_t>(n));
  for (auto& v : x0) v = pos(rng);
  p.lp.A_eq = Matrix(static_cast<std::size_t>(meq), static_cast<std::size_t>(n));
  p.lp.b_eq.assign(static_cast<std::size_t>(meq), 0.0);
  for (int i = 0; i < meq; ++i)
    for (int k = 0; k < n; ++k) {
      const double a = u(rng);
      p.lp.A_eq(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = a;
      p.lp.b_eq[static_cast<std::size_t>(i)] += a * x0[static_cast<std::size_t>(k)];
    }
  // Last inequality bounds the total, so the LP is bounded.
  p.lp.A_ub = Matrix(static_cast<std::size_t>(mub), static_cast<std::size_t>(n));
  p.lp.b_ub.assign(static_cast<std::size_t>(mub), 0.0);
  for (int i = 0; i < mub; ++i) {
    double lhs = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = i + 1 == mub ? 1.0 : u(rng);
      p.lp.A_ub(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = a;
      lhs += a * x0[static_cast<std::size_t>(k)];
    }
    p.lp.b_ub[static_cast<std::size_t>(i)] = lhs + pos(rng);
  }
  auto to_rows = [](const Matrix& M) {
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < M.rows(); ++r) rows.emplace_back(M.row(r).begin(), M.row(r).end());
    return rows;
  };
  p.dense = {p.lp.c, to_rows(p.lp.A_eq), p.lp.b_eq, to_rows(p.lp.A_ub), p.lp.b_ub};
  return p;
}

}  // namespace

TEST_CASE("simplex matches vertex enumeration on small random LPs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 6;
    const int meq = trial % 3 == 0 ? 0 : 1 + trial % 2;
    const int mub = 1 + trial % 3;
    if (meq >= n) continue;
    const Pair p = random_lp(rng, n, meq, mub);
    const LpSolution sol = solve_lp(p.lp);
    const auto ref = oracle::enumerate_vertices(p.dense);
    REQUIRE(ref.feasible);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(ref.value).epsilon(1e-9));
  }
}

TEST_CASE("simplex reports infeasible and unbounded problems") {
  StandardLp infeasible;
  infeasible.c = {1.0, 1.0};
  infeasible.A_eq = Matrix::from_rows({{1.0, 1.0}});
  infeasible.b_eq = {2.0};
  infeasible.A_ub = Matrix::from_rows({{1.0, 1.0}});
  infeasible.b_ub = {1.0};
  CHECK(solve_lp(infeasible).status == LpStatus::infeasible);

  StandardLp unbounded;
  unbounded.c = {1.0, 0.0};
  unbounded.A_eq = Matrix::from_rows({{-1.0, 1.0}});
  unbounded.b_eq = {0.5};
  unbounded.A_ub = Matrix(0, 2);
  CHECK(solve_lp(unbounded).status == LpStatus::unbounded);
}

TEST_CASE("degenerate LP with redundant equality rows") {
  // Duplicated rows and a tight vertex shared by several bases.
  StandardLp lp;
  lp.c = {1.0, 1.0, 0.0};
  lp.A_eq = Matrix::from_rows({{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}});
  lp.b_eq = {1.0, 2.0};
  lp.A_ub = Matrix::from_rows({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}});
  lp.b_ub = {1.0, 1.0, 1.0};
  const LpSolution sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::optimal);
  CHECK(sol.value == doctest::Approx(1.0));
}

TEST_CASE("rank and right inverse") {
  const Matrix M = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  CHECK(matrix_rank(M) == 2);
  const Matrix F = Matrix::from_rows({{1, 2, 3}, {0, 1, 1}});
  const Matrix Fp = right_inverse(F);
  const Matrix I = F * Fp;
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) CHECK(I(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));
  CHECK_THROWS_AS(right_inverse(M), RankError);
}

TEST_CASE("solve_square") {
  const Matrix A = Matrix::from_rows({{2, 1}, {1, 3}});
  const auto x = solve_square(A, {3, 5});
  CHECK(x[0] == doctest::Approx(0.8));
  CHECK(x[1] == doctest::Approx(1.4));
}
