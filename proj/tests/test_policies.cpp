#include <doctest.h>

#include <random>

#include "support/random_models.hpp"
#include "wcmdp/casestudy.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/policies.hpp"
#include "wcmdp/simulator.hpp"

using namespace wcmdp;

TEST_CASE("policy names") {
  CHECK(policy_from_string("occupation-measure") == PolicyKind::occupation);
  CHECK(to_string(PolicyKind::lp_update_selective) == "lp-update-selective");
  CHECK_THROWS_AS(policy_from_string("greedy"), ContractViolation);
}

TEST_CASE("update counts per policy kind") {
  const Counterexample c = build_counterexample(0.3);
  auto count = [&](PolicyKind k) {
    Policy p(c.model, {k, RoundingMode::floor, false});
    return run_episode(c.model, p, c.m0, 10, 3).update_count;
  };
  CHECK(count(PolicyKind::lp_update_full) == 2);
  CHECK(count(PolicyKind::occupation) == 1);
  CHECK(count(PolicyKind::passive) == 0);
  const int sel = count(PolicyKind::lp_update_selective);
  CHECK(sel >= 1);
  CHECK(sel <= 2);
}

TEST_CASE("selective policy re-solves on a degenerate trajectory") {
  const Counterexample c = build_counterexample(0.5);
  Policy p(c.model, {PolicyKind::lp_update_selective, RoundingMode::floor, false});
  // Epoch 1 of the b = 0.5 vertex is rank deficient, so the cached map is unusable.
  CHECK(run_episode(c.model, p, c.m0, 10, 5).update_count == 2);
}

TEST_CASE("full and selective policies agree on the counterexample when b = 0.3") {
  const Counterexample c = build_counterexample(0.3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Policy full(c.model, {PolicyKind::lp_update_full, RoundingMode::floor, false});
    Policy sel(c.model, {PolicyKind::lp_update_selective, RoundingMode::floor, false});
    CHECK(run_episode(c.model, full, c.m0, 20, seed).reward_per_arm ==
          doctest::Approx(run_episode(c.model, sel, c.m0, 20, seed).reward_per_arm));
  }
}

TEST_CASE("occupation measure rows are distributions on the support") {
  const Counterexample c = build_counterexample(0.3);
  const RelaxedSolution sol = solve_relaxed(c.model, c.m0, 0);
  const auto mu = occupation_measure(c.model, sol, 0);
  CHECK(mu[0][1] == doctest::Approx(0.6));
  CHECK(mu[0][0] == doctest::Approx(0.4));
  CHECK(mu[1][0] == doctest::Approx(1.0));
}

TEST_CASE("every policy emits feasible decisions on random models") {
  std::mt19937_64 gen(13);
  for (int i = 0; i < 30; ++i) {
    testing_support::ModelShape shape;
    shape.d = 2 + i % 3;
    shape.A = 1 + i % 2;
    shape.J = 1 + (i / 2) % 2;
    const Model model = testing_support::random_model(shape, gen);
    const long N = 12;
    const ConfigVector m0 = testing_support::random_config(shape.d, N, gen);
    for (PolicyKind k : {PolicyKind::lp_update_full, PolicyKind::lp_update_selective, PolicyKind::occupation,
                         PolicyKind::passive}) {
      for (RoundingMode r : {RoundingMode::floor, RoundingMode::min_distance}) {
        Policy p(model, {k, r, i % 2 == 0});
        run_episode(model, p, m0, N, static_cast<std::uint64_t>(i),
                    [&](int t, const ConfigVector& M, const DecisionVector& Y, const ConfigVector&) {
                      CHECK(is_feasible_decision(model, t, M, Y, N));
                    });
      }
    }
  }
}

TEST_CASE("policy contracts") {
  const Counterexample c = build_counterexample(0.3);
  Policy p(c.model, {});
  Rng rng(1);
  CHECK_THROWS_AS(p.next_decision(0, c.m0, rng), ContractViolation);
  CHECK_THROWS_AS(p.reset(c.m0, 3), ContractViolation);
  p.reset(c.m0, 10);
  CHECK_THROWS_AS(p.next_decision(2, c.m0, rng), ContractViolation);
}
