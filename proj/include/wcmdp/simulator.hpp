#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wcmdp/model.hpp"
#include "wcmdp/policies.hpp"
#include "wcmdp/random.hpp"

namespace wcmdp {

/// One population transition. Each (s,a) group of N*Y(s,a) arms moves by a
/// multinomial draw over the epoch-t row P^a(s, .).
ConfigVector step_population(const Model& model, int t, const DecisionVector& Y, long N, Rng& rng);

struct EpisodeResult {
  double reward_per_arm = 0.0;
  std::vector<ConfigVector> trajectory;  ///< epochs 0..T
  int update_count = 0;
  std::uint64_t seed = 0;
};

/// Called after every transition with (t, M(t), Y(t), M(t+1)).
using StepObserver =
    std::function<void(int t, const ConfigVector& M, const DecisionVector& Y, const ConfigVector& next)>;

/// Resets `policy` and runs epochs 0..T-1. Transition and policy draws use
/// separate streams derived from `seed`.
EpisodeResult run_episode(const Model& model, Policy& policy, const ConfigVector& m0, long N, std::uint64_t seed,
                          const StepObserver& observer = {});

struct CampaignResult {
  long N = 0;
  std::string policy;
  long replications = 0;
  double mean = 0.0;
  double ci95 = 0.0;  ///< 1.96 * sample sd / sqrt(replications)
  double v_rel = 0.0;
  double gap = 0.0;   ///< v_rel - mean
  double updates_mean = 0.0;
  std::vector<double> values;
  std::vector<int> updates;
};

struct EvaluateOptions {
  /// Run replications with OpenMP. Results are identical either way.
  bool parallel = true;
  /// Replace m0 by grid_config(m0, N) for each N instead of rejecting an
  /// m0 that N arms cannot represent.
  bool snap_m0 = false;
};

/// Replication r runs with seed derive_seed(master_seed, r, Stream::episode).
CampaignResult evaluate(const Model& model, const PolicyConfig& config, const ConfigVector& m0, long N,
                        long replications, std::uint64_t master_seed, const EvaluateOptions& options = {});

/// Same computation with a plain loop; kept as the reference for evaluate.
CampaignResult evaluate_serial(const Model& model, const PolicyConfig& config, const ConfigVector& m0, long N,
                               long replications, std::uint64_t master_seed);

struct RateStudy {
  std::vector<CampaignResult> rows;
  /// Least-squares slope of log(gap) against log(N); NaN if any gap <= 0.
  double slope = 0.0;
};

RateStudy rate_study(const Model& model, const PolicyConfig& config, const ConfigVector& m0,
                     const std::vector<long>& N_list, long replications, std::uint64_t master_seed,
                     const EvaluateOptions& options = {});

/// Ordinary least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConcentrationEpoch {
  int t = 0;
  double mean_norm = 0.0;  ///< empirical E||M(t+1) - phi(Y(t))||_2
  double std_error = 0.0;
  double bound = 0.0;      ///< sqrt(d)/sqrt(N)
  std::vector<double> exceed_freq;      ///< per epsilon
  std::vector<double> tail_bound;       ///< 2d exp(-N eps^2 / d^2)
  std::vector<double> tail_bound_tight; ///< 2d exp(-2 N eps^2 / d^2)
};

struct ConcentrationReport {
  long N = 0;
  long replications = 0;
  std::vector<double> epsilons;
  std::vector<ConcentrationEpoch> epochs;
};

ConcentrationReport concentration_check(const Model& model, const PolicyConfig& config, const ConfigVector& m0,
                                        long N, long replications, std::uint64_t master_seed,
                                        const std::vector<double>& epsilons = {0.1, 0.2},
                                        const EvaluateOptions& options = {});

}  // namespace wcmdp
