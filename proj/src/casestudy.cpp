#include "wcmdp/casestudy.hpp"

#include <cmath>
#include <numeric>

#include "wcmdp/errors.hpp"

namespace wcmdp {

Counterexample build_counterexample(double b) {
  if (!(b > 0.0 && b <= 0.5)) throw ContractViolation("counterexample budget must lie in (0, 0.5]");
  EpochParams e;
  const Matrix half = Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  e.P = {half, half};
  e.R = Matrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  e.D = Matrix::from_rows({{0.0, 1.0, 0.0, 1.0}});
  e.b = {b};
  Counterexample out;
  out.model = Model(2, 1, 1, 2, {e}, {"1", "2"});
  out.m0 = ConfigVector({0.5, 0.5});
  out.b = b;
  out.v_rel_exact = 2.0 * b;
  out.degenerate_expected = b == 0.5;
  return out;
}

double binomial_pmf(long N, long k, double p) {
  if (k < 0 || k > N) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == N ? 1.0 : 0.0;
  const double n = static_cast<double>(N);
  const double kk = static_cast<double>(k);
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) + kk * std::log(p) +
                  (n - kk) * std::log1p(-p));
}

double exact_gap_oracle(double b, long N, RoundingMode mode) {
  if (N < 1) throw ContractViolation("N must be positive");
  const double Nd = static_cast<double>(N);
  double shortfall = 0.0;  // E[min(K/N - b, 0)]
  for (long k = 0; k <= N; ++k) {
    const double v = static_cast<double>(k) / Nd - b;
    if (v < 0.0) shortfall += binomial_pmf(N, k) * v;
  }
  switch (mode) {
    case RoundingMode::floor: return 2.0 * b - (std::floor(Nd * b + 1e-9) / Nd + b + shortfall);
    case RoundingMode::randomized: {
      if (std::abs(Nd * b - std::round(Nd * b)) > 1e-9) throw ContractViolation("randomized mode needs N*b integer");
      return -shortfall;
    }
    case RoundingMode::min_distance: break;
  }
  throw ContractViolation("oracle supports floor and randomized modes");
}

double exact_floor_policy_value(double b, long N) {
  const double Nd = static_cast<double>(N);
  const long cap = static_cast<long>(std::floor(Nd * b + 1e-9));
  double second = 0.0;
  for (long k = 0; k <= N; ++k) second += binomial_pmf(N, k) * static_cast<double>(std::min(k, cap));
  return (static_cast<double>(cap) + second) / Nd;
}

ScreeningParams screening_preset(const std::string& scenario, bool fairness) {
  ScreeningParams p;
  p.beta = 0.1;
  p.fairness = fairness;
  if (scenario == "scarce") {
    p.alpha = 0.15;
    p.gamma = 0.1;
  } else if (scenario == "abundant") {
    p.alpha = 0.3;
    p.gamma = 0.2;
  } else {
    throw ContractViolation("unknown scenario '" + scenario + "'");
  }
  return p;
}

int screening_states_per_group(int cap) { return (cap + 1) * (cap + 2) / 2; }

namespace {

/// Exact transition as (numerator, destination) over a common denominator.
struct Outcome {
  long num;
  int da;
  int db;
};

}  // namespace

ScreeningModel build_screening_model(const ScreeningParams& p) {
  if (p.T_interview < 1 || p.question_cap < 0) throw ContractViolation("screening horizon and cap must be positive");
  if (p.alpha < 0 || p.beta < 0 || p.gamma < 0) throw ContractViolation("screening budgets must be nonnegative");
  if (p.fairness && !(p.gamma < p.alpha && p.alpha < 2.0 * p.gamma))
    throw ContractViolation("fairness needs gamma < alpha < 2 gamma");
  if (std::abs(p.shares[0] + p.shares[1] - 1.0) > 1e-12 || p.shares[0] < 0 || p.shares[1] < 0)
    throw ContractViolation("group shares must form a probability vector");
  for (const auto& [a0, b0] : p.priors)
    if (a0 < 1 || b0 < 1) throw ContractViolation("prior parameters must be positive");

  ScreeningModel out;
  out.params = p;
  const int cap = p.question_cap;
  // index[g][i][j] for posterior (a0+i, b0+j), i+j <= cap.
  std::vector<std::vector<std::vector<int>>> index(2, std::vector<std::vector<int>>(
                                                          static_cast<std::size_t>(cap + 1),
                                                          std::vector<int>(static_cast<std::size_t>(cap + 1), -1)));
  std::vector<std::string> labels;
  for (int g = 0; g < 2; ++g) {
    const auto [a0, b0] = p.priors[static_cast<std::size_t>(g)];
    for (int k = 0; k <= cap; ++k) {
      for (int i = 0; i <= k; ++i) {
        const int j = k - i;
        index[static_cast<std::size_t>(g)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            static_cast<int>(out.catalog.size());
        out.catalog.push_back({g, a0 + i, b0 + j, k});
        labels.push_back("g" + std::to_string(g) + ":(" + std::to_string(a0 + i) + "," + std::to_string(b0 + j) + ")");
      }
    }
  }
  const int d = static_cast<int>(out.catalog.size());
  const int na = 3;
  const int J = p.fairness ? 3 : 1;
  const std::vector<double> cost{0.0, 1.0, 1.5};

  auto dest = [&](const ScreeningState& st, int da, int db) {
    const auto [a0, b0] = p.priors[static_cast<std::size_t>(st.group)];
    return index[static_cast<std::size_t>(st.group)][static_cast<std::size_t>(st.a + da - a0)]
                [static_cast<std::size_t>(st.b + db - b0)];
  };
  auto available = [&](const ScreeningState& st, int a) { return st.questions + a <= cap; };
  auto consumption_rows = [&](Matrix& D, int s, int a, double value) {
    const auto col = static_cast<std::size_t>(s * na + a);
    D(0, col) = value;
    if (p.fairness) D(static_cast<std::size_t>(1 + out.catalog[static_cast<std::size_t>(s)].group), col) = value;
  };

  EpochParams interview;
  interview.P.assign(na, Matrix(static_cast<std::size_t>(d), static_cast<std::size_t>(d)));
  interview.R = Matrix(static_cast<std::size_t>(d), na);
  interview.D = Matrix(static_cast<std::size_t>(J), static_cast<std::size_t>(d * na));
  interview.b = p.fairness ? std::vector<double>{p.alpha, p.gamma, p.gamma} : std::vector<double>{p.alpha};
  for (int s = 0; s < d; ++s) {
    const ScreeningState& st = out.catalog[static_cast<std::size_t>(s)];
    const auto su = static_cast<std::size_t>(s);
    interview.P[0](su, su) = 1.0;
    const long a = st.a;
    const long b = st.b;
    for (int act = 1; act <= 2; ++act) {
      if (!available(st, act)) {
        interview.P[static_cast<std::size_t>(act)](su, su) = 1.0;
        consumption_rows(interview.D, s, act, kForbiddenCost);
        continue;
      }
      long den = 0;
      std::vector<Outcome> outcomes;
      if (act == 1) {
        den = a + b;
        outcomes = {{a, 1, 0}, {b, 0, 1}};
      } else {
        den = (a + b) * (1 + a + b);
        outcomes = {{a * (1 + a), 2, 0}, {2 * a * b, 1, 1}, {b * (1 + b), 0, 2}};
      }
      long total = 0;
      for (const auto& o : outcomes) total += o.num;
      if (total != den) throw ContractViolation("posterior update does not sum to one");
      for (const auto& o : outcomes) {
        const auto to = static_cast<std::size_t>(dest(st, o.da, o.db));
        interview.P[static_cast<std::size_t>(act)](su, to) += static_cast<double>(o.num) / static_cast<double>(den);
      }
      consumption_rows(interview.D, s, act, cost[static_cast<std::size_t>(act)]);
    }
  }

  EpochParams admission;
  admission.P.assign(na, Matrix::identity(static_cast<std::size_t>(d)));
  admission.R = Matrix(static_cast<std::size_t>(d), na);
  admission.D = Matrix(static_cast<std::size_t>(J), static_cast<std::size_t>(d * na));
  admission.b = p.fairness ? std::vector<double>{p.beta, p.gamma, p.gamma} : std::vector<double>{p.beta};
  for (int s = 0; s < d; ++s) {
    const ScreeningState& st = out.catalog[static_cast<std::size_t>(s)];
    admission.R(static_cast<std::size_t>(s), 1) = static_cast<double>(st.a) / static_cast<double>(st.a + st.b);
    admission.D(0, static_cast<std::size_t>(s * na + 1)) = 1.0;
    admission.D(0, static_cast<std::size_t>(s * na + 2)) = kForbiddenCost;
  }

  std::vector<EpochParams> epochs(static_cast<std::size_t>(p.T_interview), interview);
  epochs.push_back(admission);
  out.model = Model(d, na - 1, J, p.T_interview + 1, std::move(epochs), std::move(labels));

  out.m0 = ConfigVector(std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int g = 0; g < 2; ++g) out.m0[static_cast<std::size_t>(index[static_cast<std::size_t>(g)][0][0])] += p.shares[static_cast<std::size_t>(g)];
  return out;
}

}  // namespace wcmdp
