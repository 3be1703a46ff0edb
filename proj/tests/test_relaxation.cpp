#include <doctest.h>

#include <random>

#include "oracles/vertex_enum.hpp"
#include "support/random_models.hpp"
#include "wcmdp/casestudy.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/relaxation.hpp"

using namespace wcmdp;

TEST_CASE("counterexample relaxed value is twice the budget") {
  for (double b : {0.1, 0.3, 0.5}) {
    const Counterexample c = build_counterexample(b);
    const RelaxedSolution sol = solve_relaxed(c.model, c.m0, 0);
    CHECK(sol.value == doctest::Approx(2 * b).epsilon(1e-12));
    // Budget spent entirely on state 1 at both epochs.
    CHECK(sol.y(0)(0, 1) == doctest::Approx(b));
    CHECK(sol.y(1)(0, 1) == doctest::Approx(b));
    CHECK(sol.m_star.size() == 3);
  }
}

TEST_CASE("relaxed LP layout") {
  const Counterexample c = build_counterexample(0.3);
  const StandardLp lp = build_relaxed_lp(c.model, c.m0, 0);
  CHECK(lp.num_variables() == 8);
  CHECK(lp.A_eq.rows() == 4);
  CHECK(lp.A_ub.rows() == 2);
  CHECK(lp.c[1] == 1.0);           // y_{0,1}(0)
  CHECK(lp.A_eq(2, 1) == -0.5);    // flow into state 0 at epoch 1
  CHECK(lp.A_eq(2, 4) == 1.0);
  const StandardLp eq = build_relaxed_lp(c.model, c.m0, 0, {.budget_equality = true});
  CHECK(eq.A_eq.rows() == 6);
  CHECK(eq.A_ub.rows() == 0);
}

TEST_CASE("pruning leaves the optimum unchanged") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 25; ++i) {
    testing_support::ModelShape shape;
    shape.d = 2 + i % 4;
    shape.A = 1 + i % 3;
    shape.J = 1 + i % 2;
    shape.T = 2 + i % 3;
    shape.sparsity = 0.6;
    const Model model = testing_support::random_model(shape, rng);
    const ConfigVector m0 = testing_support::random_config(shape.d, 6, rng);
    const LpSolution plain = solve_lp(build_relaxed_lp(model, m0, 0));
    REQUIRE(plain.status == LpStatus::optimal);
    const RelaxedSolution sol = solve_relaxed(model, m0, 0);
    CHECK(sol.value == doctest::Approx(plain.value).epsilon(1e-9));
    for (int t = 0; t < model.horizon(); ++t) CHECK(is_feasible_decision(model, t, sol.m(t), sol.y(t)));
  }
}

TEST_CASE("relaxed value matches vertex enumeration on tiny instances") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 10; ++i) {
    testing_support::ModelShape shape;
    shape.d = 2;
    shape.A = 1;
    shape.T = 2;
    const Model model = testing_support::random_model(shape, rng);
    const ConfigVector m0({0.25, 0.75});
    const StandardLp lp = build_relaxed_lp(model, m0, 0);
    oracle::DenseLp dense;
    dense.c = lp.c;
    for (std::size_t r = 0; r < lp.A_eq.rows(); ++r) dense.A_eq.emplace_back(lp.A_eq.row(r).begin(), lp.A_eq.row(r).end());
    dense.b_eq = lp.b_eq;
    for (std::size_t r = 0; r < lp.A_ub.rows(); ++r) dense.A_ub.emplace_back(lp.A_ub.row(r).begin(), lp.A_ub.row(r).end());
    dense.b_ub = lp.b_ub;
    const auto ref = oracle::enumerate_vertices(dense);
    REQUIRE(ref.feasible);
    CHECK(solve_relaxed(model, m0, 0).value == doctest::Approx(ref.value).epsilon(1e-9));
  }
}

TEST_CASE("relaxed value is non-increasing when the budget shrinks") {
  double prev = 1e9;
  for (double b : {0.5, 0.4, 0.3, 0.2, 0.1}) {
    const Counterexample c = build_counterexample(b);
    const double v = solve_relaxed(c.model, c.m0, 0).value;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("restart from a later epoch") {
  const Counterexample c = build_counterexample(0.3);
  const RelaxedSolution sol = solve_relaxed(c.model, ConfigVector({0.2, 0.8}), 1);
  CHECK(sol.t0 == 1);
  CHECK(sol.value == doctest::Approx(0.2));
  CHECK_THROWS_AS(solve_relaxed(c.model, c.m0, 2), ContractViolation);
}

TEST_CASE("phi propagates mass") {
  const Counterexample c = build_counterexample(0.3);
  DecisionVector y(2, 2);
  y(0, 0) = 0.7;
  y(1, 1) = 0.3;
  const ConfigVector next = phi(c.model, 0, y);
  CHECK(next[0] == doctest::Approx(0.5));
  CHECK(next[1] == doctest::Approx(0.5));
}

TEST_CASE("relaxed solution JSON round trip") {
  const Counterexample c = build_counterexample(0.3);
  const RelaxedSolution sol = solve_relaxed(c.model, c.m0, 0);
  const RelaxedSolution back = relaxed_from_json(relaxed_to_json(sol));
  CHECK(back.value == sol.value);
  CHECK(back.y(1).values() == sol.y(1).values());
  CHECK(back.m(2).m == sol.m(2).m);
  CHECK_THROWS_AS(relaxed_from_json("{\"t0\": 0}"), ParseError);
}
