#include "wcmdp/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wcmdp/errors.hpp"

namespace wcmdp {

namespace {

constexpr double kSnap = 1e-9;

void check_inputs(const DecisionVector& y, const ConfigVector& m, long N) {
  if (N < 1) throw ContractViolation("N must be positive");
  if (static_cast<std::size_t>(y.d()) != m.size()) throw ContractViolation("decision and configuration sizes differ");
  if (!is_config(m, N)) throw ContractViolation("N*m must be an integer probability vector");
  for (int s = 0; s < y.d(); ++s) {
    double row = 0.0;
    for (int a = 0; a < y.action_count(); ++a) {
      if (y(s, a) < -kSnap) throw ContractViolation("decision has a negative entry");
      row += y(s, a);
    }
    if (std::abs(row - m[static_cast<std::size_t>(s)]) > 1e-8)
      throw ContractViolation("decision row sum differs from the configuration at state " + std::to_string(s));
  }
}

long floor_count(double v, long N) { return std::max(0L, static_cast<long>(std::floor(static_cast<double>(N) * v + kSnap))); }

/// Builds Y from counts of the non-passive actions; the passive count is the remainder.
DecisionVector from_counts(const std::vector<long>& counts, const ConfigVector& m, long N, int d, int na) {
  DecisionVector Y(d, na);
  for (int s = 0; s < d; ++s) {
    long rest = std::lround(static_cast<double>(N) * m[static_cast<std::size_t>(s)]);
    for (int a = 1; a < na; ++a) {
      const long k = counts[static_cast<std::size_t>(s * na + a)];
      Y(s, a) = static_cast<double>(k) / static_cast<double>(N);
      rest -= k;
    }
    if (rest < 0) throw ContractViolation("rounded counts exceed the state population at state " + std::to_string(s));
    Y(s, 0) = static_cast<double>(rest) / static_cast<double>(N);
  }
  return Y;
}

double linf(const DecisionVector& a, const DecisionVector& b) {
  double out = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) out = std::max(out, std::abs(a.values()[i] - b.values()[i]));
  return out;
}

}  // namespace

std::string to_string(RoundingMode mode) {
  switch (mode) {
    case RoundingMode::floor: return "floor";
    case RoundingMode::min_distance: return "min-distance";
    case RoundingMode::randomized: return "randomized";
  }
  return "unknown";
}

RoundingMode rounding_from_string(const std::string& name) {
  if (name == "floor") return RoundingMode::floor;
  if (name == "min-distance" || name == "min_distance") return RoundingMode::min_distance;
  if (name == "randomized") return RoundingMode::randomized;
  throw ContractViolation("unknown rounding mode '" + name + "'");
}

RoundingOutcome floor_round(const DecisionVector& y, const ConfigVector& m, long N) {
  check_inputs(y, m, N);
  std::vector<long> counts(y.size(), 0);
  for (int s = 0; s < y.d(); ++s)
    for (int a = 1; a < y.action_count(); ++a)
      counts[static_cast<std::size_t>(s * y.action_count() + a)] = floor_count(y(s, a), N);
  RoundingOutcome out;
  out.Y = from_counts(counts, m, N, y.d(), y.action_count());
  out.distance = linf(out.Y, y);
  out.method = RoundingMode::floor;
  return out;
}

namespace {

struct MinDistanceSearch {
  const DecisionVector& y;
  const ConfigVector& m;
  long N;
  const EpochParams& e;
  int J;
  int d;
  int na;

  struct Entry {
    int s;
    int a;
    long lo;
    long hi;
  };
  std::vector<Entry> entries;
  std::vector<std::vector<double>> suffix_min_use;  // [i][j]: floor usage of entries i..end
  std::vector<long> totals;
  std::vector<long> state_sum;
  std::vector<double> use;
  std::vector<long> counts;
  std::vector<long> best_counts;
  double best = std::numeric_limits<double>::infinity();

  double err(long k, double v) const { return std::abs(static_cast<double>(k) / static_cast<double>(N) - v); }

  double consumption(int j, const Entry& en, long k) const {
    return e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(en.s * na + en.a)) * static_cast<double>(k) /
           static_cast<double>(N);
  }

  void run() {
    totals.resize(static_cast<std::size_t>(d));
    for (int s = 0; s < d; ++s) totals[static_cast<std::size_t>(s)] = std::lround(static_cast<double>(N) * m[static_cast<std::size_t>(s)]);
    for (int s = 0; s < d; ++s)
      for (int a = 1; a < na; ++a) {
        const long lo = floor_count(y(s, a), N);
        const long hi = static_cast<double>(N) * y(s, a) - static_cast<double>(lo) > kSnap ? lo + 1 : lo;
        entries.push_back({s, a, lo, hi});
      }
    suffix_min_use.assign(entries.size() + 1, std::vector<double>(static_cast<std::size_t>(J), 0.0));
    for (std::size_t i = entries.size(); i-- > 0;)
      for (int j = 0; j < J; ++j)
        suffix_min_use[i][static_cast<std::size_t>(j)] =
            suffix_min_use[i + 1][static_cast<std::size_t>(j)] + consumption(j, entries[i], entries[i].lo);
    state_sum.assign(static_cast<std::size_t>(d), 0);
    use.assign(static_cast<std::size_t>(J), 0.0);
    counts.assign(y.size(), 0);
    dfs(0, 0.0);
  }

  void dfs(std::size_t i, double cur) {
    if (cur >= best - 1e-15) return;
    for (int j = 0; j < J; ++j)
      if (use[static_cast<std::size_t>(j)] + suffix_min_use[i][static_cast<std::size_t>(j)] >
          e.b[static_cast<std::size_t>(j)] + kSnap)
        return;
    if (i == entries.size()) {
      best = cur;
      best_counts = counts;
      return;
    }
    const Entry& en = entries[i];
    const bool closes_state = i + 1 == entries.size() || entries[i + 1].s != en.s;
    for (long k = en.lo; k <= en.hi; ++k) {
      const auto su = static_cast<std::size_t>(en.s);
      if (state_sum[su] + k > totals[su]) break;
      double next = std::max(cur, err(k, y(en.s, en.a)));
      if (closes_state) next = std::max(next, err(totals[su] - state_sum[su] - k, y(en.s, 0)));
      state_sum[su] += k;
      for (int j = 0; j < J; ++j) use[static_cast<std::size_t>(j)] += consumption(j, en, k);
      counts[static_cast<std::size_t>(en.s * na + en.a)] = k;
      dfs(i + 1, next);
      counts[static_cast<std::size_t>(en.s * na + en.a)] = 0;
      for (int j = 0; j < J; ++j) use[static_cast<std::size_t>(j)] -= consumption(j, en, k);
      state_sum[su] -= k;
    }
  }
};

}  // namespace

RoundingOutcome min_distance_round(const DecisionVector& y, const ConfigVector& m, long N, const Model& model, int t) {
  check_inputs(y, m, N);
  if (y.d() != model.d() || y.action_count() != model.action_count())
    throw ContractViolation("decision shape does not match the model");
  if (model.d() * model.num_actions() > 20) {
    RoundingOutcome out = floor_round(y, m, N);
    out.fell_back = true;
    return out;
  }
  MinDistanceSearch search{y, m, N, model.epoch(t), model.J(), model.d(), model.action_count(), {}, {}, {}, {}, {}, {}, {}};
  if (model.num_actions() == 0) {
    // Only the passive action: nothing to choose.
    RoundingOutcome out = floor_round(y, m, N);
    out.method = RoundingMode::min_distance;
    return out;
  }
  search.run();
  if (search.best_counts.empty()) return floor_round(y, m, N);  // unreachable: the floor point is feasible
  RoundingOutcome out;
  out.Y = from_counts(search.best_counts, m, N, y.d(), y.action_count());
  out.distance = linf(out.Y, y);
  out.method = RoundingMode::min_distance;
  return out;
}

RoundingOutcome randomized_round(const DecisionVector& y, const ConfigVector& m, long N, const Model& model, int t,
                                 Rng& rng) {
  check_inputs(y, m, N);
  if (model.num_actions() != 1 || model.J() != 1)
    throw UnsupportedRounding("randomized rounding needs two actions and one budget row");
  const EpochParams& e = model.epoch(t);
  for (int s = 0; s < model.d(); ++s)
    if (e.D(0, static_cast<std::size_t>(model.column(s, 1))) != 1.0)
      throw UnsupportedRounding("randomized rounding needs unit consumption for action 1");
  const double Nb = static_cast<double>(N) * e.b[0];
  if (std::abs(Nb - std::round(Nb)) > kSnap) throw UnsupportedRounding("randomized rounding needs N*b to be an integer");
  double total = 0.0;
  for (int s = 0; s < model.d(); ++s) total += y(s, 1);
  if (total > e.b[0] + kSnap) throw UnsupportedRounding("decision exceeds the budget");

  const int d = model.d();
  std::vector<double> x(static_cast<std::size_t>(d));
  std::vector<int> frac;
  for (int s = 0; s < d; ++s) {
    double v = static_cast<double>(N) * y(s, 1);
    if (std::abs(v - std::round(v)) <= kSnap) v = std::round(v);
    x[static_cast<std::size_t>(s)] = std::max(0.0, v);
    if (std::ceil(v) > static_cast<double>(std::lround(static_cast<double>(N) * m[static_cast<std::size_t>(s)])))
      throw ContractViolation("ceiling of N*y exceeds the state population");
    if (v != std::floor(v)) frac.push_back(s);
  }

  auto fpart = [&](int s) { return x[static_cast<std::size_t>(s)] - std::floor(x[static_cast<std::size_t>(s)]); };
  auto settle = [&](int s) {
    double& v = x[static_cast<std::size_t>(s)];
    if (std::abs(v - std::round(v)) <= kSnap) v = std::round(v);
    return v == std::floor(v);
  };
  std::size_t head = 0;
  while (frac.size() - head >= 2) {
    const int i = frac[head];
    const int j = frac[head + 1];
    const double fi = fpart(i);
    const double fj = fpart(j);
    const double up = std::min(1.0 - fi, fj);    // i up, j down
    const double down = std::min(fi, 1.0 - fj);  // i down, j up
    if (uniform01(rng) < down / (up + down)) {
      x[static_cast<std::size_t>(i)] += up;
      x[static_cast<std::size_t>(j)] -= up;
    } else {
      x[static_cast<std::size_t>(i)] -= down;
      x[static_cast<std::size_t>(j)] += down;
    }
    const bool i_done = settle(i);
    const bool j_done = settle(j);
    if (i_done && j_done) {
      head += 2;
    } else if (i_done) {
      ++head;
    } else {
      frac[head + 1] = i;
      ++head;
    }
  }
  if (frac.size() - head == 1) {
    const int s = frac[head];
    const double f = fpart(s);
    x[static_cast<std::size_t>(s)] = std::floor(x[static_cast<std::size_t>(s)]) + (uniform01(rng) < f ? 1.0 : 0.0);
  }

  std::vector<long> counts(y.size(), 0);
  for (int s = 0; s < d; ++s) counts[static_cast<std::size_t>(model.column(s, 1))] = std::lround(x[static_cast<std::size_t>(s)]);
  RoundingOutcome out;
  out.Y = from_counts(counts, m, N, d, model.action_count());
  out.distance = linf(out.Y, y);
  out.method = RoundingMode::randomized;
  return out;
}

RoundingOutcome round_decision(RoundingMode mode, const DecisionVector& y, const ConfigVector& m, long N,
                               const Model& model, int t, Rng& rng) {
  switch (mode) {
    case RoundingMode::floor: return floor_round(y, m, N);
    case RoundingMode::min_distance: return min_distance_round(y, m, N, model, t);
    case RoundingMode::randomized: return randomized_round(y, m, N, model, t, rng);
  }
  throw ContractViolation("unknown rounding mode");
}

}  // namespace wcmdp
