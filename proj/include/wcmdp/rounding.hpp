#pragma once

#include <string>

#include "wcmdp/model.hpp"
#include "wcmdp/random.hpp"

namespace wcmdp {

enum class RoundingMode { floor, min_distance, randomized };

std::string to_string(RoundingMode mode);
RoundingMode rounding_from_string(const std::string& name);

struct RoundingOutcome {
  DecisionVector Y;
  double distance = 0.0;  ///< max |Y - y| over all entries
  RoundingMode method = RoundingMode::floor;
  /// min_distance_round exceeded its search guard and returned the floor point.
  bool fell_back = false;
};

/// Y(s,a) = floor(N y(s,a))/N for a != 0, passive action absorbs the rest.
RoundingOutcome floor_round(const DecisionVector& y, const ConfigVector& m, long N);

/// Exact minimizer of max |Y - y| over per-entry floor/ceil choices that keep
/// Y feasible at epoch t. Ties go to the choice that is lexicographically
/// first in (s, a) with floor before ceil. Falls back to floor_round when
/// d*A > 20.
RoundingOutcome min_distance_round(const DecisionVector& y, const ConfigVector& m, long N, const Model& model, int t);

/// Unbiased rounding for two actions and one budget row with D(s,1) = 1 and
/// N*b integer. Pairwise dependent rounding of N*y(s,1) keeps every entry
/// in {floor, ceil} and the total within the budget. Throws
/// UnsupportedRounding if the model does not fit.
RoundingOutcome randomized_round(const DecisionVector& y, const ConfigVector& m, long N, const Model& model, int t,
                                 Rng& rng);

/// Dispatch on mode.
RoundingOutcome round_decision(RoundingMode mode, const DecisionVector& y, const ConfigVector& m, long N,
                               const Model& model, int t, Rng& rng);

}  // namespace wcmdp
