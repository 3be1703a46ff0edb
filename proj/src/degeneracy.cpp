#include "wcmdp/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wcmdp/errors.hpp"
#include "wcmdp/numerics.hpp"

namespace wcmdp {

double active_threshold(const Model& model, int t) {
  double bmax = 0.0;
  for (double v : model.epoch(t).b) bmax = std::max(bmax, std::abs(v));
  return 1e-7 * std::max(1.0, bmax);
}

ActiveSets active_sets(const Model& model, const RelaxedSolution& sol, int t) {
  if (t < sol.t0 || t >= sol.t0 + static_cast<int>(sol.y_star.size()))
    throw ContractViolation("epoch outside the solved range");
  const double delta = active_threshold(model, t);
  const EpochParams& e = model.epoch(t);
  const DecisionVector& y = sol.y(t);
  const ConfigVector& m = sol.m(t);
  ActiveSets out;
  out.t = t;
  for (int j = 0; j < model.J(); ++j) {
    double use = 0.0;
    for (std::size_t c = 0; c < y.size(); ++c) use += e.D(static_cast<std::size_t>(j), c) * y.values()[c];
    if (e.b[static_cast<std::size_t>(j)] - use <= delta) out.J_star.push_back(j);
  }
  for (int s = 0; s < model.d(); ++s)
    for (int a = 0; a < model.action_count(); ++a)
      if (y(s, a) <= delta) out.U_star.emplace_back(s, a);
  for (int s = 0; s < model.d(); ++s)
    if (m[static_cast<std::size_t>(s)] > delta) out.S_star.push_back(s);
  return out;
}

Matrix build_cstar(const Model& model, const ActiveSets& active) {
  const auto cols = static_cast<std::size_t>(model.pairs());
  Matrix C(active.rows(), cols);
  std::size_t r = 0;
  for (const auto& [s, a] : active.U_star) C(r++, static_cast<std::size_t>(model.column(s, a))) = 1.0;
  const EpochParams& e = model.epoch(active.t);
  for (int j : active.J_star) {
    const auto src = e.D.row(static_cast<std::size_t>(j));
    std::copy(src.begin(), src.end(), C.row(r++).begin());
  }
  for (int s : active.S_star) {
    for (int a = 0; a < model.action_count(); ++a) C(r, static_cast<std::size_t>(model.column(s, a))) = 1.0;
    ++r;
  }
  return C;
}

namespace {

struct Reduced {
  std::vector<int> free_cols;
  Matrix MF;
  Matrix MU;  ///< J* and S* rows restricted to U* columns
};

Reduced reduce(const Model& model, const ActiveSets& active) {
  const auto pairs = static_cast<std::size_t>(model.pairs());
  std::vector<char> in_u(pairs, 0);
  for (const auto& [s, a] : active.U_star) in_u[static_cast<std::size_t>(model.column(s, a))] = 1;
  Reduced red;
  for (std::size_t c = 0; c < pairs; ++c)
    if (!in_u[c]) red.free_cols.push_back(static_cast<int>(c));
  const std::size_t k = active.J_star.size() + active.S_star.size();
  red.MF = Matrix(k, red.free_cols.size());
  red.MU = Matrix(k, active.U_star.size());
  const EpochParams& e = model.epoch(active.t);
  std::size_t r = 0;
  auto fill = [&](auto value_at) {
    for (std::size_t i = 0; i < red.free_cols.size(); ++i)
      red.MF(r, i) = value_at(static_cast<std::size_t>(red.free_cols[i]));
    for (std::size_t i = 0; i < active.U_star.size(); ++i) {
      const auto [s, a] = active.U_star[i];
      red.MU(r, i) = value_at(static_cast<std::size_t>(model.column(s, a)));
    }
    ++r;
  };
  for (int j : active.J_star) fill([&](std::size_t c) { return e.D(static_cast<std::size_t>(j), c); });
  for (int s : active.S_star)
    fill([&](std::size_t c) { return static_cast<int>(c) / model.action_count() == s ? 1.0 : 0.0; });
  return red;
}

}  // namespace

int cstar_rank(const Model& model, const ActiveSets& active) {
  const Reduced red = reduce(model, active);
  return static_cast<int>(active.U_star.size()) + matrix_rank(red.MF);
}

DegeneracyReport is_nondegenerate(const Model& model, const RelaxedSolution& sol) {
  DegeneracyReport report;
  for (int t = sol.t0; t < sol.t0 + static_cast<int>(sol.y_star.size()); ++t) {
    const ActiveSets act = active_sets(model, sol, t);
    EpochDegeneracy row;
    row.t = t;
    row.J = static_cast<int>(act.J_star.size());
    row.S = static_cast<int>(act.S_star.size());
    row.U = static_cast<int>(act.U_star.size());
    row.required = static_cast<int>(act.rows());
    row.rank = cstar_rank(model, act);
    row.pass = row.rank == row.required;
    row.in_verdict = t > sol.t0;
    if (row.in_verdict && !row.pass) report.nondegenerate = false;
    report.epochs.push_back(row);
  }
  std::ostringstream os;
  if (report.nondegenerate) {
    os << "non-degenerate";
  } else {
    os << "degenerate at the computed vertex (epochs";
    for (const auto& r : report.epochs)
      if (r.in_verdict && !r.pass) os << ' ' << r.t;
    os << ')';
  }
  report.summary = os.str();
  return report;
}

std::string format_degeneracy_table(const DegeneracyReport& report) {
  std::ostringstream os;
  os << "epoch  |J*|  |S*|  |U*|  rank  required  pass\n";
  for (const auto& r : report.epochs) {
    char line[128];
    std::snprintf(line, sizeof line, "%5d  %4d  %4d  %4d  %4d  %8d  %s%s\n", r.t, r.J, r.S, r.U, r.rank, r.required,
                  r.pass ? "yes" : "no", r.in_verdict ? "" : " (not in verdict)");
    os << line;
  }
  os << "verdict: " << report.summary << '\n';
  return os.str();
}

LocalLinearMap build_local_linear_map(const Model& model, const RelaxedSolution& sol, int t) {
  LocalLinearMap map;
  map.t = t;
  map.active = active_sets(model, sol, t);
  map.y_anchor = sol.y(t);
  map.m_anchor = sol.m(t);
  map.C_star = build_cstar(model, map.active);

  const Reduced red = reduce(model, map.active);
  const Matrix MF_plus = right_inverse(red.MF);  // throws RankError
  const std::size_t nu = map.active.U_star.size();
  const std::size_t k = red.MF.rows();
  const auto pairs = static_cast<std::size_t>(model.pairs());

  // C+ = [[I, 0], [-MF+ MU, MF+]] in (U, F) column order.
  map.C_plus = Matrix(pairs, nu + k);
  for (std::size_t i = 0; i < nu; ++i) {
    const auto [s, a] = map.active.U_star[i];
    map.C_plus(static_cast<std::size_t>(model.column(s, a)), i) = 1.0;
  }
  const Matrix cross = MF_plus * red.MU;
  for (std::size_t f = 0; f < red.free_cols.size(); ++f) {
    const auto c = static_cast<std::size_t>(red.free_cols[f]);
    for (std::size_t i = 0; i < nu; ++i) map.C_plus(c, i) = -cross(f, i);
    for (std::size_t i = 0; i < k; ++i) map.C_plus(c, nu + i) = MF_plus(f, i);
  }
  return map;
}

DecisionVector local_linear_decision(const LocalLinearMap& map, const ConfigVector& m) {
  if (m.size() != map.m_anchor.size()) throw ContractViolation("configuration length mismatch");
  const std::size_t offset = map.active.U_star.size() + map.active.J_star.size();
  DecisionVector y = map.y_anchor;
  for (std::size_t i = 0; i < map.active.S_star.size(); ++i) {
    const auto s = static_cast<std::size_t>(map.active.S_star[i]);
    const double dm = m[s] - map.m_anchor[s];
    if (dm == 0.0) continue;
    for (std::size_t c = 0; c < y.size(); ++c) y.values()[c] += map.C_plus(c, offset + i) * dm;
  }
  return y;
}

bool twoaction_nondegenerate(const Model& model, const RelaxedSolution& sol) {
  if (model.num_actions() != 1 || model.J() != 1)
    throw UnsupportedModel("two-action check needs exactly two actions and one budget row");
  if (!sol.budget_equality) throw UnsupportedModel("two-action check needs the budget posed as an equality");
  for (int t = sol.t0; t < sol.t0 + static_cast<int>(sol.y_star.size()); ++t) {
    const EpochParams& e = model.epoch(t);
    for (int s = 0; s < model.d(); ++s)
      if (e.D(0, static_cast<std::size_t>(model.column(s, 1))) != 1.0)
        throw UnsupportedModel("two-action check needs unit consumption for action 1");
  }
  for (int t = sol.t0 + 1; t < sol.t0 + static_cast<int>(sol.y_star.size()); ++t) {
    const double delta = active_threshold(model, t);
    const DecisionVector& y = sol.y(t);
    bool found = false;
    for (int s = 0; s < model.d() && !found; ++s) found = y(s, 1) > delta && y(s, 0) > delta;
    if (!found) return false;
  }
  return true;
}

}  // namespace wcmdp
