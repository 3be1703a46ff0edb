#include "wcmdp/relaxation.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "wcmdp/errors.hpp"

namespace wcmdp {

ConfigVector phi(const Model& model, int t, const DecisionVector& y) {
  const int d = model.d();
  const int na = model.action_count();
  if (y.d() != d || y.action_count() != na) throw ContractViolation("phi: decision vector shape mismatch");
  const EpochParams& e = model.epoch(t);
  ConfigVector out(std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int s = 0; s < d; ++s) {
    for (int a = 0; a < na; ++a) {
      const double mass = y(s, a);
      if (mass == 0.0) continue;
      const auto row = e.P[static_cast<std::size_t>(a)].row(static_cast<std::size_t>(s));
      for (int s2 = 0; s2 < d; ++s2) out[static_cast<std::size_t>(s2)] += mass * row[static_cast<std::size_t>(s2)];
    }
  }
  return out;
}

namespace {

struct LpLayout {
  StandardLp lp;
  /// For each LP column: (epoch offset, pair index).
  std::vector<std::pair<int, int>> column_of;
};

void check_inputs(const Model& model, const ConfigVector& m0, int t0) {
  if (t0 < 0 || t0 >= model.horizon()) throw ContractViolation("start epoch out of range");
  if (m0.size() != static_cast<std::size_t>(model.d())) throw ContractViolation("m0 has the wrong length");
  if (!is_config(m0)) throw ContractViolation("m0 is not a probability vector");
}

LpLayout build_layout(const Model& model, const ConfigVector& m0, int t0, const RelaxationOptions& options) {
  check_inputs(model, m0, t0);
  const int d = model.d();
  const int na = model.action_count();
  const int u = model.pairs();
  const int T = model.horizon();
  const int epochs = T - t0;

  // reach[k][s]: whether state s can carry mass at epoch t0 + k.
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(epochs), std::vector<char>(static_cast<std::size_t>(d), 1));
  if (options.prune_unreachable) {
    for (int s = 0; s < d; ++s) reach[0][static_cast<std::size_t>(s)] = m0[static_cast<std::size_t>(s)] > 0.0;
    for (int k = 1; k < epochs; ++k) {
      auto& next = reach[static_cast<std::size_t>(k)];
      std::fill(next.begin(), next.end(), 0);
      const EpochParams& e = model.epoch(t0 + k - 1);
      for (int s = 0; s < d; ++s) {
        if (!reach[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(s)]) continue;
        for (int a = 0; a < na; ++a) {
          const auto row = e.P[static_cast<std::size_t>(a)].row(static_cast<std::size_t>(s));
          for (int s2 = 0; s2 < d; ++s2)
            if (row[static_cast<std::size_t>(s2)] > 0.0) next[static_cast<std::size_t>(s2)] = 1;
        }
      }
    }
  }

  auto dominated = [&](int k, int s, int a) {
    if (!options.prune_dominated || options.budget_equality || a == 0) return false;
    const EpochParams& e = model.epoch(t0 + k);
    const auto su = static_cast<std::size_t>(s);
    if (e.R(su, static_cast<std::size_t>(a)) > e.R(su, 0)) return false;
    for (int j = 0; j < model.J(); ++j)
      if (e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(model.column(s, a))) <
          e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(model.column(s, 0))))
        return false;
    const auto pa = e.P[static_cast<std::size_t>(a)].row(su);
    const auto p0 = e.P[0].row(su);
    return std::equal(pa.begin(), pa.end(), p0.begin());
  };

  LpLayout out;
  // Column and equality-row numbering.
  std::vector<std::vector<int>> var(static_cast<std::size_t>(epochs), std::vector<int>(static_cast<std::size_t>(u), -1));
  std::vector<std::vector<int>> eq_row(static_cast<std::size_t>(epochs), std::vector<int>(static_cast<std::size_t>(d), -1));
  int n = 0;
  int me = 0;
  for (int k = 0; k < epochs; ++k) {
    for (int s = 0; s < d; ++s) {
      if (!reach[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)]) continue;
      eq_row[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] = me++;
      for (int a = 0; a < na; ++a) {
        if (dominated(k, s, a)) continue;
        var[static_cast<std::size_t>(k)][static_cast<std::size_t>(model.column(s, a))] = n++;
        out.column_of.emplace_back(k, model.column(s, a));
      }
    }
  }
  // Budget rows that touch at least one live column.
  std::vector<std::pair<int, int>> budget_rows;
  for (int k = 0; k < epochs; ++k) {
    const EpochParams& e = model.epoch(t0 + k);
    for (int j = 0; j < model.J(); ++j) {
      bool live = !options.prune_unreachable;
      for (int c = 0; c < u && !live; ++c)
        live = var[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] >= 0 &&
               e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(c)) != 0.0;
      if (live) budget_rows.emplace_back(k, j);
    }
  }

  StandardLp& lp = out.lp;
  lp.c.assign(static_cast<std::size_t>(n), 0.0);
  lp.A_eq = Matrix(static_cast<std::size_t>(me), static_cast<std::size_t>(n));
  lp.b_eq.assign(static_cast<std::size_t>(me), 0.0);
  const auto nb = budget_rows.size();
  Matrix budget(nb, static_cast<std::size_t>(n));
  std::vector<double> budget_rhs(nb, 0.0);

  for (int k = 0; k < epochs; ++k) {
    const EpochParams& e = model.epoch(t0 + k);
    for (int s = 0; s < d; ++s) {
      const int row = eq_row[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
      if (row < 0) continue;
      for (int a = 0; a < na; ++a) {
        const int v = var[static_cast<std::size_t>(k)][static_cast<std::size_t>(model.column(s, a))];
        if (v < 0) continue;
        lp.c[static_cast<std::size_t>(v)] = e.R(static_cast<std::size_t>(s), static_cast<std::size_t>(a));
        lp.A_eq(static_cast<std::size_t>(row), static_cast<std::size_t>(v)) = 1.0;
      }
      if (k == 0) lp.b_eq[static_cast<std::size_t>(row)] = m0[static_cast<std::size_t>(s)];
    }
    if (k + 1 < epochs) {
      // Outflow of epoch k feeds the flow rows of epoch k+1.
      for (int s = 0; s < d; ++s) {
        for (int a = 0; a < na; ++a) {
          const int v = var[static_cast<std::size_t>(k)][static_cast<std::size_t>(model.column(s, a))];
          if (v < 0) continue;
          const auto prow = e.P[static_cast<std::size_t>(a)].row(static_cast<std::size_t>(s));
          for (int s2 = 0; s2 < d; ++s2) {
            const double p = prow[static_cast<std::size_t>(s2)];
            if (p == 0.0) continue;
            const int row = eq_row[static_cast<std::size_t>(k + 1)][static_cast<std::size_t>(s2)];
            lp.A_eq(static_cast<std::size_t>(row), static_cast<std::size_t>(v)) -= p;
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const auto [k, j] = budget_rows[i];
    const EpochParams& e = model.epoch(t0 + k);
    for (int c = 0; c < u; ++c) {
      const int v = var[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
      if (v >= 0) budget(i, static_cast<std::size_t>(v)) = e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(c));
    }
    budget_rhs[i] = e.b[static_cast<std::size_t>(j)];
  }

  if (options.budget_equality) {
    Matrix stacked(static_cast<std::size_t>(me) + nb, static_cast<std::size_t>(n));
    for (std::size_t r = 0; r < static_cast<std::size_t>(me); ++r)
      std::copy(lp.A_eq.row(r).begin(), lp.A_eq.row(r).end(), stacked.row(r).begin());
    for (std::size_t r = 0; r < nb; ++r)
      std::copy(budget.row(r).begin(), budget.row(r).end(), stacked.row(static_cast<std::size_t>(me) + r).begin());
    lp.A_eq = std::move(stacked);
    lp.b_eq.insert(lp.b_eq.end(), budget_rhs.begin(), budget_rhs.end());
    lp.A_ub = Matrix(0, static_cast<std::size_t>(n));
  } else {
    lp.A_ub = std::move(budget);
    lp.b_ub = std::move(budget_rhs);
  }
  return out;
}

}  // namespace

StandardLp build_relaxed_lp(const Model& model, const ConfigVector& m0, int t0, const RelaxationOptions& options) {
  return build_layout(model, m0, t0, options).lp;
}

RelaxedSolution solve_relaxed(const Model& model, const ConfigVector& m0, int t0, const RelaxationOptions& options) {
  RelaxationOptions opts = options;
  opts.prune_unreachable = true;
  opts.prune_dominated = true;
  const LpLayout layout = build_layout(model, m0, t0, opts);
  const int T = model.horizon();
  const std::string range = "epochs " + std::to_string(t0) + ".." + std::to_string(T - 1);

  LpSolution lp_sol;
  try {
    lp_sol = solve_lp(layout.lp);
  } catch (const SolverError& e) {
    throw SolverError("relaxed LP over " + range + ": " + e.what());
  }
  if (lp_sol.status != LpStatus::optimal)
    throw SolverError("relaxed LP over " + range + " is " + to_string(lp_sol.status));

  RelaxedSolution sol;
  sol.t0 = t0;
  sol.horizon = T;
  sol.value = lp_sol.value;
  sol.budget_equality = options.budget_equality;
  sol.y_star.assign(static_cast<std::size_t>(T - t0), DecisionVector(model.d(), model.action_count()));
  for (std::size_t v = 0; v < layout.column_of.size(); ++v) {
    const auto [k, c] = layout.column_of[v];
    sol.y_star[static_cast<std::size_t>(k)].values()[static_cast<std::size_t>(c)] = lp_sol.y[v];
  }
  for (const auto& y : sol.y_star) {
    ConfigVector m(std::vector<double>(static_cast<std::size_t>(model.d()), 0.0));
    for (int s = 0; s < model.d(); ++s)
      for (int a = 0; a < model.action_count(); ++a) m[static_cast<std::size_t>(s)] += y(s, a);
    sol.m_star.push_back(std::move(m));
  }
  sol.m_star.push_back(phi(model, T - 1, sol.y_star.back()));
  return sol;
}

std::string relaxed_to_json(const RelaxedSolution& sol) {
  nlohmann::json j;
  j["t0"] = sol.t0;
  j["value"] = sol.value;
  nlohmann::json ys = nlohmann::json::array();
  for (const auto& y : sol.y_star) {
    nlohmann::json rows = nlohmann::json::array();
    for (int s = 0; s < y.d(); ++s) {
      std::vector<double> r;
      for (int a = 0; a < y.action_count(); ++a) r.push_back(y(s, a));
      rows.push_back(r);
    }
    ys.push_back(rows);
  }
  j["y_star"] = ys;
  nlohmann::json ms = nlohmann::json::array();
  for (const auto& m : sol.m_star) ms.push_back(m.m);
  j["m_star"] = ms;
  return j.dump();
}

RelaxedSolution relaxed_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RelaxedSolution sol;
    sol.t0 = j.at("t0").get<int>();
    sol.value = j.at("value").get<double>();
    for (const auto& yj : j.at("y_star")) {
      const auto rows = yj.get<std::vector<std::vector<double>>>();
      if (rows.empty()) throw ParseError("empty decision block");
      const int d = static_cast<int>(rows.size());
      const int na = static_cast<int>(rows.front().size());
      std::vector<double> flat;
      for (const auto& r : rows) {
        if (static_cast<int>(r.size()) != na) throw ParseError("ragged decision block");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      sol.y_star.emplace_back(d, na, std::move(flat));
    }
    for (const auto& mj : j.at("m_star")) sol.m_star.emplace_back(mj.get<std::vector<double>>());
    sol.horizon = sol.t0 + static_cast<int>(sol.y_star.size());
    return sol;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("relaxed solution JSON: ") + e.what());
  }
}

}  // namespace wcmdp
