#include "wcmdp/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wcmdp/errors.hpp"

namespace wcmdp {

namespace {

void check_epoch_shape(const EpochParams& e, int d, int na, int J, std::size_t index) {
  auto fail = [&](const std::string& what) {
    throw ContractViolation("epoch " + std::to_string(index) + ": " + what);
  };
  if (e.P.size() != static_cast<std::size_t>(na)) fail("expected " + std::to_string(na) + " transition matrices");
  for (const auto& p : e.P) {
    if (p.rows() != static_cast<std::size_t>(d) || p.cols() != static_cast<std::size_t>(d))
      fail("transition matrix is not d x d");
  }
  if (e.R.rows() != static_cast<std::size_t>(d) || e.R.cols() != static_cast<std::size_t>(na))
    fail("R is not d x (A+1)");
  if (J > 0 && (e.D.rows() != static_cast<std::size_t>(J) || e.D.cols() != static_cast<std::size_t>(d * na)))
    fail("D is not J x d(A+1)");
  if (e.b.size() != static_cast<std::size_t>(J)) fail("b does not have J entries");
}

}  // namespace

Model::Model(int d, int num_actions, int J, int horizon, std::vector<EpochParams> epochs,
             std::vector<std::string> state_labels)
    : d_(d), num_actions_(num_actions), J_(J), horizon_(horizon), epochs_(std::move(epochs)),
      labels_(std::move(state_labels)) {
  if (d_ < 1) throw ContractViolation("d must be >= 1");
  if (num_actions_ < 1) throw ContractViolation("num_actions must be >= 1");
  if (J_ < 0) throw ContractViolation("J must be >= 0");
  if (horizon_ < 1) throw ContractViolation("horizon must be >= 1");
  if (epochs_.size() != 1 && epochs_.size() != static_cast<std::size_t>(horizon_))
    throw ContractViolation("epochs must hold 1 (stationary) or horizon entries");
  if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(d_))
    throw ContractViolation("state_labels must have d entries");
  for (std::size_t i = 0; i < epochs_.size(); ++i) {
    auto& e = epochs_[i];
    if (J_ == 0) e.D = Matrix(0, static_cast<std::size_t>(pairs()));
    check_epoch_shape(e, d_, action_count(), J_, i);
  }
}

const EpochParams& Model::epoch(int t) const {
  if (t < 0 || t >= horizon_) throw ContractViolation("epoch index out of range: " + std::to_string(t));
  return epochs_.size() == 1 ? epochs_.front() : epochs_[static_cast<std::size_t>(t)];
}

DecisionVector::DecisionVector(int d, int action_count, std::vector<double> values)
    : d_(d), na_(action_count), y_(std::move(values)) {
  if (y_.size() != static_cast<std::size_t>(d * action_count))
    throw ContractViolation("decision vector size does not match d*(A+1)");
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::shape: return "shape";
    case Violation::Kind::negative_probability: return "negative-probability";
    case Violation::Kind::row_sum: return "row-sum";
    case Violation::Kind::passive_cost: return "passive-cost";
    case Violation::Kind::negative_cost: return "negative-cost";
    case Violation::Kind::negative_budget: return "negative-budget";
  }
  return "unknown";
}

std::vector<Violation> validate_model(const Model& model, const Tolerances& tol) {
  std::vector<Violation> out;
  const int d = model.d();
  const int na = model.action_count();
  const auto& epochs = model.stored_epochs();
  for (std::size_t ei = 0; ei < epochs.size(); ++ei) {
    const int t = static_cast<int>(ei);
    const auto& e = epochs[ei];
    for (int a = 0; a < na; ++a) {
      const Matrix& P = e.P[static_cast<std::size_t>(a)];
      for (int s = 0; s < d; ++s) {
        double sum = 0.0;
        bool negative = false;
        for (int s2 = 0; s2 < d; ++s2) {
          const double p = P(s, s2);
          if (!(p >= 0.0)) negative = true;
          sum += p;
        }
        if (negative) {
          out.push_back({Violation::Kind::negative_probability, t, s, a,
                         "P^" + std::to_string(a) + " row " + std::to_string(s) + " has a negative entry"});
        }
        if (!(std::abs(sum - 1.0) <= tol.stochastic)) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "P^" << a << " row " << s << " sums to " << sum;
          out.push_back({Violation::Kind::row_sum, t, s, a, msg.str()});
        }
      }
    }
    for (int j = 0; j < model.J(); ++j) {
      for (int s = 0; s < d; ++s) {
        for (int a = 0; a < na; ++a) {
          const double c = e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(model.column(s, a)));
          if (a == 0 && c != 0.0) {
            out.push_back({Violation::Kind::passive_cost, t, s, a,
                           "D_" + std::to_string(j) + "(" + std::to_string(s) + ",0) is nonzero"});
          } else if (!(c >= 0.0)) {
            out.push_back({Violation::Kind::negative_cost, t, s, a,
                           "D_" + std::to_string(j) + "(" + std::to_string(s) + "," + std::to_string(a) +
                               ") is negative"});
          }
        }
      }
      if (!(e.b[static_cast<std::size_t>(j)] >= 0.0)) {
        out.push_back({Violation::Kind::negative_budget, t, -1, -1, "b_" + std::to_string(j) + " is negative"});
      }
    }
  }
  return out;
}

namespace {

bool near_integer(double x, double tol) { return std::abs(x - std::round(x)) <= tol; }

}  // namespace

bool is_config(const ConfigVector& m, std::optional<long> N, const Tolerances& tol) {
  double sum = 0.0;
  for (double v : m.m) {
    if (!(v >= -tol.feasibility)) return false;
    sum += v;
    if (N && !near_integer(static_cast<double>(*N) * v, tol.feasibility)) return false;
  }
  return std::abs(sum - 1.0) <= tol.feasibility;
}

std::optional<std::string> explain_infeasibility(const Model& model, int t, const ConfigVector& m,
                                                 const DecisionVector& y, std::optional<long> N,
                                                 const Tolerances& tol) {
  const int d = model.d();
  const int na = model.action_count();
  if (m.size() != static_cast<std::size_t>(d) || y.d() != d || y.action_count() != na)
    throw ContractViolation("decision/configuration dimensions do not match the model");
  const EpochParams& e = model.epoch(t);
  const double eps = tol.feasibility;
  for (int s = 0; s < d; ++s) {
    double row = 0.0;
    for (int a = 0; a < na; ++a) {
      const double v = y(s, a);
      if (!(v >= -eps)) return "y(" + std::to_string(s) + "," + std::to_string(a) + ") is negative";
      if (N && !near_integer(static_cast<double>(*N) * v, eps))
        return "N*y(" + std::to_string(s) + "," + std::to_string(a) + ") is not an integer";
      row += v;
    }
    if (std::abs(row - m[static_cast<std::size_t>(s)]) > eps)
      return "sum_a y(" + std::to_string(s) + ",a) differs from m_" + std::to_string(s);
  }
  for (int j = 0; j < model.J(); ++j) {
    double used = 0.0;
    const auto drow = e.D.row(static_cast<std::size_t>(j));
    for (std::size_t c = 0; c < drow.size(); ++c) used += drow[c] * y.values()[c];
    if (used > e.b[static_cast<std::size_t>(j)] + eps) return "budget " + std::to_string(j) + " exceeded";
  }
  return std::nullopt;
}

bool is_feasible_decision(const Model& model, int t, const ConfigVector& m, const DecisionVector& y,
                          std::optional<long> N, const Tolerances& tol) {
  return !explain_infeasibility(model, t, m, y, N, tol).has_value();
}

ConfigVector grid_config(const ConfigVector& m, long N) {
  if (N < 1) throw ContractViolation("N must be positive");
  if (!is_config(m)) throw ContractViolation("not a probability vector");
  const double Nd = static_cast<double>(N);
  std::vector<long> counts(m.size());
  std::vector<std::size_t> order(m.size());
  long used = 0;
  for (std::size_t s = 0; s < m.size(); ++s) {
    counts[s] = static_cast<long>(std::floor(Nd * m[s] + 1e-9));
    used += counts[s];
    order[s] = s;
  }
  auto frac = [&](std::size_t s) { return Nd * m[s] - static_cast<double>(counts[s]); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac(a) > frac(b); });
  for (std::size_t i = 0; used < N && i < order.size(); ++i, ++used) ++counts[order[i]];
  std::vector<double> out(m.size());
  for (std::size_t s = 0; s < m.size(); ++s) out[s] = static_cast<double>(counts[s]) / Nd;
  return ConfigVector(std::move(out));
}

DecisionVector passive_decision(const Model& model, const ConfigVector& m) {
  DecisionVector y(model.d(), model.action_count());
  for (int s = 0; s < model.d(); ++s) y(s, 0) = m[static_cast<std::size_t>(s)];
  return y;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) rows.push_back(r.get<std::vector<double>>());
  try {
    return Matrix::from_rows(rows);
  } catch (const ContractViolation& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

EpochParams epoch_from_json(const json& j, int d, int na, int J) {
  EpochParams e;
  for (const auto& p : j.at("P")) e.P.push_back(matrix_from_json(p, "P"));
  e.R = matrix_from_json(j.at("R"), "R");
  if (J > 0) {
    e.D = matrix_from_json(j.at("D"), "D");
  } else {
    e.D = Matrix(0, static_cast<std::size_t>(d * na));
  }
  e.b = j.contains("b") ? j.at("b").get<std::vector<double>>() : std::vector<double>{};
  return e;
}

std::string line_context(std::string_view text, std::size_t byte) {
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  std::size_t line = 1;
  std::size_t start = 0;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      start = i + 1;
    }
  }
  std::size_t stop = text.find('\n', start);
  if (stop == std::string_view::npos) stop = text.size();
  return "line " + std::to_string(line) + ", column " + std::to_string(end - start + 1) + ": " +
         std::string(text.substr(start, std::min<std::size_t>(stop - start, 80)));
}

}  // namespace

Model model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("model JSON, " + line_context(text, e.byte) + "\n" + e.what());
  }
  try {
    const int d = j.at("d").get<int>();
    const int A = j.at("num_actions").get<int>();
    const int J = j.at("J").get<int>();
    const int T = j.at("horizon").get<int>();
    std::vector<EpochParams> epochs;
    const json& ej = j.at("epochs");
    if (ej.is_object()) {
      epochs.push_back(epoch_from_json(ej, d, A + 1, J));
    } else {
      for (const auto& e : ej) epochs.push_back(epoch_from_json(e, d, A + 1, J));
    }
    bool stationary = j.value("stationary", false);
    if (ej.is_array() && ej.size() == 1) stationary = stationary || ej.front().value("stationary", false);
    if (ej.is_object()) stationary = true;
    if (epochs.size() == 1 && T > 1 && !stationary)
      throw ParseError("a single epoch object needs \"stationary\": true when horizon > 1");
    std::vector<std::string> labels;
    if (j.contains("state_labels")) labels = j.at("state_labels").get<std::vector<std::string>>();
    return Model(d, A, J, T, std::move(epochs), std::move(labels));
  } catch (const json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

std::string model_to_json(const Model& model) {
  json j;
  j["d"] = model.d();
  j["num_actions"] = model.num_actions();
  j["J"] = model.J();
  j["horizon"] = model.horizon();
  json epochs = json::array();
  for (const auto& e : model.stored_epochs()) {
    json ej;
    json P = json::array();
    for (const auto& p : e.P) P.push_back(matrix_to_json(p));
    ej["P"] = P;
    ej["R"] = matrix_to_json(e.R);
    ej["D"] = matrix_to_json(e.D);
    ej["b"] = e.b;
    epochs.push_back(ej);
  }
  j["epochs"] = epochs;
  if (model.stationary()) j["stationary"] = true;
  if (!model.state_labels().empty()) j["state_labels"] = model.state_labels();
  return j.dump();
}

}  // namespace wcmdp
