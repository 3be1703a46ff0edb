#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles/binomial.hpp"
#include "wcmdp/casestudy.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/simulator.hpp"

using namespace wcmdp;

TEST_CASE("step_population conserves arms") {
  const Counterexample c = build_counterexample(0.3);
  Rng rng(4);
  DecisionVector Y(2, 2);
  Y(0, 0) = 0.2;
  Y(0, 1) = 0.3;
  Y(1, 0) = 0.5;
  for (int i = 0; i < 100; ++i) {
    const ConfigVector next = step_population(c.model, 0, Y, 10, rng);
    CHECK(next[0] + next[1] == doctest::Approx(1.0));
    CHECK(is_config(next, 10L));
  }
}

TEST_CASE("episodes are reproducible from the seed") {
  const Counterexample c = build_counterexample(0.3);
  Policy a(c.model, {PolicyKind::lp_update_full, RoundingMode::randomized, false});
  Policy b(c.model, {PolicyKind::lp_update_full, RoundingMode::randomized, false});
  const EpisodeResult ra = run_episode(c.model, a, c.m0, 50, 1234);
  const EpisodeResult rb = run_episode(c.model, b, c.m0, 50, 1234);
  CHECK(ra.reward_per_arm == rb.reward_per_arm);
  CHECK(ra.trajectory.size() == 3);
  CHECK(ra.trajectory[2].m == rb.trajectory[2].m);
}

TEST_CASE("parallel evaluation is bitwise identical to the serial run") {
  const Counterexample c = build_counterexample(0.5);
  for (PolicyKind k : {PolicyKind::lp_update_full, PolicyKind::lp_update_selective, PolicyKind::occupation}) {
    const PolicyConfig pc{k, RoundingMode::floor, true};
    const CampaignResult par = evaluate(c.model, pc, c.m0, 20, 500, 77);
    const CampaignResult ser = evaluate_serial(c.model, pc, c.m0, 20, 500, 77);
    CHECK(par.values == ser.values);
    CHECK(par.updates == ser.updates);
    CHECK(par.mean == ser.mean);
  }
}

TEST_CASE("floor policy value matches the integer binomial oracle at N = 10") {
  // b = 0.5: value = (5 + E[min(K, 5)]) / 10, E[(5 - K)^+] = 630 / 1024.
  CHECK(oracle::shortfall_numerator(10, 5) == 630);
  // b = 0.3: value = (3 + E[min(K, 3)]) / 10, E[(3 - K)^+] = 68 / 1024.
  CHECK(oracle::shortfall_numerator(10, 3) == 68);
  CHECK(exact_floor_policy_value(0.5, 10) == doctest::Approx(1.0 - 630.0 / 10240.0).epsilon(1e-14));
  CHECK(exact_floor_policy_value(0.3, 10) == doctest::Approx(0.6 - 68.0 / 10240.0).epsilon(1e-14));

  const Counterexample c = build_counterexample(0.5);
  const CampaignResult r = evaluate(c.model, {PolicyKind::lp_update_full, RoundingMode::floor, false}, c.m0, 10,
                                    20000, 2024);
  const double sd = r.ci95 / 1.96 * std::sqrt(20000.0);
  CHECK(std::abs(r.mean - (1.0 - 630.0 / 10240.0)) < 4 * sd / std::sqrt(20000.0));
  CHECK(r.gap == doctest::Approx(r.v_rel - r.mean));
}

TEST_CASE("gap oracle against direct summation") {
  for (long N : {10L, 20L, 50L, 100L}) {
    const int c = static_cast<int>(std::floor(N * 0.5));
    const double floor_gap = 2 * 0.5 - (c / static_cast<double>(N) + 0.5 - oracle::expected_shortfall(static_cast<int>(N), static_cast<int>(0.5 * N)));
    CHECK(exact_gap_oracle(0.5, N, RoundingMode::floor) == doctest::Approx(floor_gap).epsilon(1e-10));
    CHECK(exact_gap_oracle(0.3, N, RoundingMode::randomized) ==
          doctest::Approx(oracle::expected_shortfall(static_cast<int>(N), static_cast<int>(std::lround(0.3 * N)))).epsilon(1e-10));
  }
  CHECK_THROWS_AS(exact_gap_oracle(0.3, 7, RoundingMode::randomized), ContractViolation);
}

TEST_CASE("OLS slope") {
  CHECK(ols_slope({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(ols_slope({1}, {1}), ContractViolation);
  const Counterexample c = build_counterexample(0.5);
  const RateStudy s = rate_study(c.model, {}, c.m0, {10, 40}, 200, 1);
  CHECK(s.rows.size() == 2);
  CHECK(s.slope < 0.0);
}

TEST_CASE("concentration report shape") {
  const Counterexample c = build_counterexample(0.3);
  const ConcentrationReport r = concentration_check(c.model, {}, c.m0, 100, 500, 3);
  REQUIRE(r.epochs.size() == 2);
  for (const auto& e : r.epochs) {
    CHECK(e.bound == doctest::Approx(std::sqrt(2.0) / 10.0));
    CHECK(e.mean_norm > 0.0);
    CHECK(e.exceed_freq.size() == 2);
    CHECK(e.tail_bound_tight[0] <= e.tail_bound[0]);
  }
}

TEST_CASE("campaign contracts") {
  const Counterexample c = build_counterexample(0.3);
  CHECK_THROWS_AS(evaluate(c.model, {}, c.m0, 10, 1, 0), ContractViolation);
  CHECK_THROWS_AS(evaluate(c.model, {}, c.m0, 7, 10, 0), ContractViolation);
}
