#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "wcmdp/model.hpp"
#include "wcmdp/rounding.hpp"

namespace wcmdp {

/// Two states, two actions, one budget b, horizon 2, all transitions 1/2.
struct Counterexample {
  Model model;
  ConfigVector m0;
  double b = 0.0;
  double v_rel_exact = 0.0;
  bool degenerate_expected = false;
};

Counterexample build_counterexample(double b);

/// P(Bin(N, p) = k), evaluated through lgamma.
double binomial_pmf(long N, long k, double p = 0.5);

/// 2b minus the LP-update value on the counterexample, by summation over
/// Bin(N, 1/2). Floor mode: floor(Nb)/N + b + E[min(K/N - b, 0)].
/// Randomized mode: 2b + E[min(K/N - b, 0)] (needs N*b integer).
double exact_gap_oracle(double b, long N, RoundingMode mode);

/// Exact value of lp-update-full with floor rounding on the counterexample:
/// floor(Nb)/N + E[min(K, floor(Nb))]/N. Equals 2b - exact_gap_oracle(b, N,
/// floor) when N*b is an integer.
double exact_floor_policy_value(double b, long N);

inline constexpr double kForbiddenCost = 1e7;

struct ScreeningParams {
  int T_interview = 10;
  int question_cap = 10;
  double alpha = 0.15;
  double beta = 0.1;
  double gamma = 0.1;
  bool fairness = false;
  std::array<std::pair<int, int>, 2> priors{{{1, 1}, {2, 2}}};
  std::array<double, 2> shares{0.5, 0.5};
};

/// "scarce" (alpha 0.15, gamma 0.1) or "abundant" (0.3, 0.2); beta 0.1.
ScreeningParams screening_preset(const std::string& scenario, bool fairness);

struct ScreeningState {
  int group = 0;
  int a = 0;
  int b = 0;
  int questions = 0;
};

struct ScreeningModel {
  Model model;
  ConfigVector m0;
  std::vector<ScreeningState> catalog;
  ScreeningParams params;
};

/// States per group under a question cap: (cap+1)(cap+2)/2.
int screening_states_per_group(int cap);

/// Belief MDP over (group, a, b). Epochs 0..T_interview-1 interview with
/// actions {0,1,2}; epoch T_interview admits (action 1) with reward a/(a+b).
/// Unavailable actions carry consumption kForbiddenCost and identity rows.
/// Budget rows: total, then one per group when fairness is on.
ScreeningModel build_screening_model(const ScreeningParams& p);

}  // namespace wcmdp
