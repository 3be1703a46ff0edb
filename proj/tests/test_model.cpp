#include <doctest.h>

#include <random>

#include "support/random_models.hpp"
#include "wcmdp/casestudy.hpp"
#include "wcmdp/errors.hpp"
#include "wcmdp/model.hpp"

using namespace wcmdp;

TEST_CASE("random models validate") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    testing_support::ModelShape shape;
    shape.d = 2 + i % 3;
    shape.A = 1 + i % 2;
    shape.J = 1 + i % 2;
    CHECK(validate_model(testing_support::random_model(shape, rng)).empty());
  }
}

TEST_CASE("validate_model reports each violated invariant") {
  Counterexample c = build_counterexample(0.3);
  EpochParams e = c.model.epoch(0);
  e.P[1](0, 0) = 0.7;   // row sum 1.2
  e.P[0](1, 0) = -0.1;  // negative entry, row sum 0.9
  e.D(0, 0) = 0.5;      // passive action consumes
  e.D(0, 3) = -1.0;
  e.b = {-0.2};
  const Model bad(2, 1, 1, 2, {e});
  const auto v = validate_model(bad);
  auto has = [&](Violation::Kind k) {
    for (const auto& x : v)
      if (x.kind == k) return true;
    return false;
  };
  CHECK(has(Violation::Kind::row_sum));
  CHECK(has(Violation::Kind::negative_probability));
  CHECK(has(Violation::Kind::passive_cost));
  CHECK(has(Violation::Kind::negative_cost));
  CHECK(has(Violation::Kind::negative_budget));
}

TEST_CASE("model JSON round trip") {
  std::mt19937_64 rng(5);
  testing_support::ModelShape shape;
  shape.d = 3;
  shape.A = 2;
  shape.J = 2;
  const Model m = testing_support::random_model(shape, rng);
  const Model back = model_from_json(model_to_json(m));
  REQUIRE(back.d() == m.d());
  REQUIRE(back.horizon() == m.horizon());
  for (int t = 0; t < m.horizon(); ++t) {
    CHECK(back.epoch(t).b == m.epoch(t).b);
    CHECK(back.epoch(t).R(2, 1) == m.epoch(t).R(2, 1));
    CHECK(back.epoch(t).P[2](1, 2) == m.epoch(t).P[2](1, 2));
  }
  const Counterexample c = build_counterexample(0.5);
  const Model s = model_from_json(model_to_json(c.model));
  CHECK(s.stationary());
  CHECK(s.state_labels() == c.model.state_labels());
}

TEST_CASE("malformed model JSON names the line") {
  const std::string text = "{\n  \"d\": 2,\n  \"num_actions\": 1,\n  \"J\": 1 \"horizon\": 2\n}";
  try {
    model_from_json(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  CHECK_THROWS_AS(model_from_json("{\"d\": 2}"), ParseError);
}

TEST_CASE("feasibility checks") {
  const Counterexample c = build_counterexample(0.3);
  const ConfigVector m({0.5, 0.5});
  DecisionVector y(2, 2);
  y(0, 0) = 0.2;
  y(0, 1) = 0.3;
  y(1, 0) = 0.5;
  CHECK(is_feasible_decision(c.model, 0, m, y));
  CHECK(is_feasible_decision(c.model, 0, m, y, 10L));
  CHECK_FALSE(is_feasible_decision(c.model, 0, m, y, 7L));  // 7*0.3 not integral
  y(0, 0) = 0.1;
  y(0, 1) = 0.4;  // over budget
  CHECK_FALSE(is_feasible_decision(c.model, 0, m, y));
  CHECK(explain_infeasibility(c.model, 0, m, y).has_value());
  CHECK(is_feasible_decision(c.model, 0, m, passive_decision(c.model, m)));
  CHECK(is_config(m, 2L));
  CHECK_FALSE(is_config(ConfigVector({0.5, 0.6})));
  CHECK_THROWS_AS(is_feasible_decision(c.model, 0, ConfigVector({1.0}), y), ContractViolation);
}

TEST_CASE("grid_config rounds by largest remainder") {
  CHECK(grid_config(ConfigVector({0.5, 0.5}), 33).m == std::vector<double>{17.0 / 33, 16.0 / 33});
  CHECK(grid_config(ConfigVector({0.2, 0.3, 0.5}), 10).m == std::vector<double>{0.2, 0.3, 0.5});
  const ConfigVector g = grid_config(ConfigVector({0.26, 0.37, 0.37}), 7);
  CHECK(is_config(g, 7L));
  CHECK(g.m == std::vector<double>{2.0 / 7, 3.0 / 7, 2.0 / 7});
  CHECK_THROWS_AS(grid_config(ConfigVector({0.5, 0.6}), 10), ContractViolation);
}
