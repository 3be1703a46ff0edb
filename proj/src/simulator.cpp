#include "wcmdp/simulator.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "wcmdp/errors.hpp"
#include "wcmdp/relaxation.hpp"

namespace wcmdp {

ConfigVector step_population(const Model& model, int t, const DecisionVector& Y, long N, Rng& rng) {
  const int d = model.d();
  const int na = model.action_count();
  if (Y.d() != d || Y.action_count() != na) throw ContractViolation("decision shape does not match the model");
  const EpochParams& e = model.epoch(t);
  std::vector<long> next(static_cast<std::size_t>(d), 0);
  for (int s = 0; s < d; ++s) {
    for (int a = 0; a < na; ++a) {
      const long n = std::lround(static_cast<double>(N) * Y(s, a));
      if (n <= 0) continue;
      const auto counts = sample_multinomial(rng, n, e.P[static_cast<std::size_t>(a)].row(static_cast<std::size_t>(s)));
      for (int s2 = 0; s2 < d; ++s2) next[static_cast<std::size_t>(s2)] += counts[static_cast<std::size_t>(s2)];
    }
  }
  ConfigVector out(std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int s = 0; s < d; ++s) out[static_cast<std::size_t>(s)] = static_cast<double>(next[static_cast<std::size_t>(s)]) / static_cast<double>(N);
  return out;
}

EpisodeResult run_episode(const Model& model, Policy& policy, const ConfigVector& m0, long N, std::uint64_t seed,
                          const StepObserver& observer) {
  Rng transitions(derive_seed(seed, 0, Stream::transitions));
  Rng decisions(derive_seed(seed, 0, Stream::policy));
  policy.reset(m0, N);
  EpisodeResult out;
  out.seed = seed;
  out.trajectory.push_back(m0);
  ConfigVector M = m0;
  for (int t = 0; t < model.horizon(); ++t) {
    const DecisionVector Y = policy.next_decision(t, M, decisions);
    const Matrix& R = model.epoch(t).R;
    for (int s = 0; s < model.d(); ++s)
      for (int a = 0; a < model.action_count(); ++a)
        out.reward_per_arm += R(static_cast<std::size_t>(s), static_cast<std::size_t>(a)) * Y(s, a);
    ConfigVector next = step_population(model, t, Y, N, transitions);
    if (observer) observer(t, M, Y, next);
    out.trajectory.push_back(next);
    M = std::move(next);
  }
  out.update_count = policy.update_count();
  return out;
}

namespace {

void summarize(CampaignResult& res) {
  const auto R = static_cast<double>(res.replications);
  double sum = 0.0;
  double usum = 0.0;
  for (std::size_t i = 0; i < res.values.size(); ++i) {
    sum += res.values[i];
    usum += res.updates[i];
  }
  res.mean = sum / R;
  res.updates_mean = usum / R;
  double ss = 0.0;
  for (double v : res.values) ss += (v - res.mean) * (v - res.mean);
  res.ci95 = res.replications > 1 ? 1.96 * std::sqrt(ss / (R - 1.0)) / std::sqrt(R) : 0.0;
  res.gap = res.v_rel - res.mean;
}

CampaignResult run_campaign(const Model& model, const PolicyConfig& config, const ConfigVector& m0_in, long N,
                            long replications, std::uint64_t master_seed, const EvaluateOptions& options) {
  if (replications < 2) throw ContractViolation("at least two replications are needed");
  const ConfigVector m0 = options.snap_m0 ? grid_config(m0_in, N) : m0_in;
  const bool parallel = options.parallel;
  const auto plan = make_plan(model, config, m0);
  CampaignResult res;
  res.N = N;
  res.policy = to_string(config.kind);
  res.replications = replications;
  res.v_rel = plan->initial ? plan->initial->sol().value : solve_relaxed(model, m0, 0).value;
  res.values.assign(static_cast<std::size_t>(replications), 0.0);
  res.updates.assign(static_cast<std::size_t>(replications), 0);

  std::exception_ptr failure;
  auto body = [&](long r) {
    Policy policy(model, config, plan);
    const EpisodeResult ep =
        run_episode(model, policy, m0, N, derive_seed(master_seed, static_cast<std::uint64_t>(r), Stream::episode));
    res.values[static_cast<std::size_t>(r)] = ep.reward_per_arm;
    res.updates[static_cast<std::size_t>(r)] = ep.update_count;
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long r = 0; r < replications; ++r) {
      try {
        body(r);
      } catch (...) {
#pragma omp critical(wcmdp_campaign_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long r = 0; r < replications; ++r) body(r);
  }
  summarize(res);
  return res;
}

}  // namespace

CampaignResult evaluate(const Model& model, const PolicyConfig& config, const ConfigVector& m0, long N,
                        long replications, std::uint64_t master_seed, const EvaluateOptions& options) {
  return run_campaign(model, config, m0, N, replications, master_seed, options);
}

CampaignResult evaluate_serial(const Model& model, const PolicyConfig& config, const ConfigVector& m0, long N,
                               long replications, std::uint64_t master_seed) {
  return run_campaign(model, config, m0, N, replications, master_seed, {.parallel = false});
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("slope needs at least two paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

RateStudy rate_study(const Model& model, const PolicyConfig& config, const ConfigVector& m0,
                     const std::vector<long>& N_list, long replications, std::uint64_t master_seed,
                     const EvaluateOptions& options) {
  if (N_list.empty()) throw ContractViolation("N list is empty");
  RateStudy study;
  std::vector<double> lx;
  std::vector<double> ly;
  bool positive = true;
  for (long N : N_list) {
    study.rows.push_back(evaluate(model, config, m0, N, replications, master_seed, options));
    const double g = study.rows.back().gap;
    positive = positive && g > 0.0;
    lx.push_back(std::log(static_cast<double>(N)));
    ly.push_back(g > 0.0 ? std::log(g) : 0.0);
  }
  study.slope = positive && N_list.size() >= 2 ? ols_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
  return study;
}

ConcentrationReport concentration_check(const Model& model, const PolicyConfig& config, const ConfigVector& m0_in,
                                        long N, long replications, std::uint64_t master_seed,
                                        const std::vector<double>& epsilons, const EvaluateOptions& options) {
  if (replications < 2) throw ContractViolation("at least two replications are needed");
  const ConfigVector m0 = options.snap_m0 ? grid_config(m0_in, N) : m0_in;
  const int T = model.horizon();
  const auto plan = make_plan(model, config, m0);
  const auto R = static_cast<std::size_t>(replications);
  const auto nt = static_cast<std::size_t>(T);
  // norms[r * T + t]
  std::vector<double> norms(R * nt, 0.0);

  std::exception_ptr failure;
  auto body = [&](long r) {
    Policy policy(model, config, plan);
    const auto base = static_cast<std::size_t>(r) * nt;
    run_episode(model, policy, m0, N, derive_seed(master_seed, static_cast<std::uint64_t>(r), Stream::episode),
                [&](int t, const ConfigVector&, const DecisionVector& Y, const ConfigVector& next) {
                  const ConfigVector expected = phi(model, t, Y);
                  double sq = 0.0;
                  for (std::size_t s = 0; s < next.size(); ++s) sq += (next[s] - expected[s]) * (next[s] - expected[s]);
                  norms[base + static_cast<std::size_t>(t)] = std::sqrt(sq);
                });
  };
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long r = 0; r < replications; ++r) {
      try {
        body(r);
      } catch (...) {
#pragma omp critical(wcmdp_concentration_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (long r = 0; r < replications; ++r) body(r);
  }

  ConcentrationReport rep;
  rep.N = N;
  rep.replications = replications;
  rep.epsilons = epsilons;
  const double d = model.d();
  const auto Nd = static_cast<double>(N);
  for (int t = 0; t < T; ++t) {
    ConcentrationEpoch ep;
    ep.t = t;
    double sum = 0.0;
    for (std::size_t r = 0; r < R; ++r) sum += norms[r * nt + static_cast<std::size_t>(t)];
    ep.mean_norm = sum / static_cast<double>(R);
    double ss = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      const double v = norms[r * nt + static_cast<std::size_t>(t)] - ep.mean_norm;
      ss += v * v;
    }
    ep.std_error = std::sqrt(ss / static_cast<double>(R - 1)) / std::sqrt(static_cast<double>(R));
    ep.bound = std::sqrt(d) / std::sqrt(Nd);
    for (double eps : epsilons) {
      std::size_t hits = 0;
      for (std::size_t r = 0; r < R; ++r) hits += norms[r * nt + static_cast<std::size_t>(t)] >= eps ? 1 : 0;
      ep.exceed_freq.push_back(static_cast<double>(hits) / static_cast<double>(R));
      ep.tail_bound.push_back(2.0 * d * std::exp(-Nd * eps * eps / (d * d)));
      ep.tail_bound_tight.push_back(2.0 * d * std::exp(-2.0 * Nd * eps * eps / (d * d)));
    }
    rep.epochs.push_back(std::move(ep));
  }
  return rep;
}

}  // namespace wcmdp
