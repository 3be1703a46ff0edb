#include <doctest.h>

#include <random>

#include "oracles/vertex_enum.hpp"
#include "support/local_linear.hpp"
#include "support/random_models.hpp"
#include "wcmdp/casestudy.hpp"
#include "wcmdp/degeneracy.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/numerics.hpp"

using namespace wcmdp;

TEST_CASE("counterexample verdicts") {
  const Counterexample c3 = build_counterexample(0.3);
  const auto r3 = is_nondegenerate(c3.model, solve_relaxed(c3.model, c3.m0, 0));
  CHECK(r3.nondegenerate);
  CHECK(r3.summary == "non-degenerate");
  REQUIRE(r3.epochs.size() == 2);
  CHECK_FALSE(r3.epochs[0].in_verdict);
  CHECK(r3.epochs[1].rank == r3.epochs[1].required);

  const Counterexample c5 = build_counterexample(0.5);
  const auto r5 = is_nondegenerate(c5.model, solve_relaxed(c5.model, c5.m0, 0));
  CHECK_FALSE(r5.nondegenerate);
  CHECK(r5.summary == "degenerate at the computed vertex (epochs 1)");
  CHECK(format_degeneracy_table(r5).find("verdict: degenerate") != std::string::npos);
}

TEST_CASE("active sets of the counterexample") {
  const Counterexample c = build_counterexample(0.3);
  const RelaxedSolution sol = solve_relaxed(c.model, c.m0, 0);
  const ActiveSets act = active_sets(c.model, sol, 1);
  CHECK(act.J_star == std::vector<int>{0});
  CHECK(act.S_star == std::vector<int>{0, 1});
  REQUIRE(act.U_star.size() == 1);
  CHECK(act.U_star[0] == std::pair<int, int>{1, 1});
  const Matrix C = build_cstar(c.model, act);
  CHECK(C.rows() == 4);
  CHECK(C(0, 3) == 1.0);
  CHECK(C(1, 1) == 1.0);
  CHECK(C(3, 2) == 1.0);
}

TEST_CASE("reduced rank agrees with the rank of the full stacked matrix") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    testing_support::ModelShape shape;
    shape.d = 2 + i % 4;
    shape.A = 1 + i % 2;
    shape.J = 1 + i % 2;
    shape.T = 3;
    const Model model = testing_support::random_model(shape, rng);
    const ConfigVector m0 = testing_support::random_config(shape.d, 8, rng);
    const RelaxedSolution sol = solve_relaxed(model, m0, 0);
    for (int t = 0; t < model.horizon(); ++t) {
      const ActiveSets act = active_sets(model, sol, t);
      CHECK(cstar_rank(model, act) == matrix_rank(build_cstar(model, act)));
      ++checked;
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("C+ is the minimum-norm right inverse of C*") {
  std::mt19937_64 rng(37);
  int built = 0;
  for (int i = 0; i < 40 && built < 10; ++i) {
    testing_support::ModelShape shape;
    shape.d = 3;
    shape.A = 1 + i % 2;
    shape.T = 2;
    const Model model = testing_support::random_model(shape, rng);
    const RelaxedSolution sol = solve_relaxed(model, testing_support::random_config(3, 6, rng), 0);
    LocalLinearMap map;
    try {
      map = build_local_linear_map(model, sol, 1);
    } catch (const RankError&) {
      continue;
    }
    ++built;
    const Matrix& C = map.C_star;
    const std::size_t k = C.rows();
    // Reference: C^T (C C^T)^{-1}, column by column.
    std::vector<std::vector<double>> G(k, std::vector<double>(k, 0.0));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t q = 0; q < k; ++q)
        for (std::size_t c = 0; c < C.cols(); ++c) G[r][q] += C(r, c) * C(q, c);
    for (std::size_t col = 0; col < k; ++col) {
      std::vector<double> e(k, 0.0);
      e[col] = 1.0;
      const auto z = oracle::gauss_solve(G, e);
      REQUIRE(z.has_value());
      for (std::size_t c = 0; c < C.cols(); ++c) {
        double ref = 0.0;
        for (std::size_t r = 0; r < k; ++r) ref += C(r, c) * (*z)[r];
        CHECK(map.C_plus(c, col) == doctest::Approx(ref).epsilon(1e-9));
      }
    }
  }
  CHECK(built > 0);
}

TEST_CASE("rank-deficient map raises") {
  const Counterexample c = build_counterexample(0.5);
  const RelaxedSolution sol = solve_relaxed(c.model, c.m0, 0);
  CHECK_THROWS_AS(build_local_linear_map(c.model, sol, 1), RankError);
}

TEST_CASE("local linear value matches a fresh solve near a non-degenerate vertex") {
  std::mt19937_64 rng(41);
  int compared = 0;
  for (int i = 0; i < 60 && compared < 40; ++i) {
    testing_support::ModelShape shape;
    shape.d = 2 + i % 3;
    shape.T = 2 + i % 2;
    shape.sparsity = 0.0;
    const Model model = testing_support::random_model(shape, rng);
    std::vector<double> m(static_cast<std::size_t>(shape.d), 1.0 / shape.d);
    const RelaxedSolution sol = solve_relaxed(model, ConfigVector(m), 0);
    for (int t = 0; t < model.horizon(); ++t) {
      const auto check = testing_support::perturb_and_compare(model, sol, t, rng);
      if (!check) continue;
      CHECK(check->mapped == doctest::Approx(check->fresh).epsilon(1e-9));
      ++compared;
    }
  }
  CHECK(compared >= 20);
}

TEST_CASE("two-action checker preconditions") {
  const Counterexample c = build_counterexample(0.3);
  const RelaxedSolution ineq = solve_relaxed(c.model, c.m0, 0);
  CHECK_THROWS_AS(twoaction_nondegenerate(c.model, ineq), UnsupportedModel);
  const RelaxedSolution eq = solve_relaxed(c.model, c.m0, 0, {.budget_equality = true});
  CHECK(twoaction_nondegenerate(c.model, eq));
  std::mt19937_64 rng(1);
  testing_support::ModelShape shape;
  shape.A = 2;
  const Model three = testing_support::random_model(shape, rng);
  CHECK_THROWS_AS(twoaction_nondegenerate(three, solve_relaxed(three, ConfigVector({1.0, 0, 0}), 0)), UnsupportedModel);
}
