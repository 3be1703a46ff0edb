#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcmdp/matrix.hpp"

namespace wcmdp {

/// Comparison slack used throughout. Feasibility checks compare against
/// `feasibility`; transition rows are checked against `stochastic`.
struct Tolerances {
  double feasibility = 1e-9;
  double stochastic = 1e-12;
};

/// Parameters of one decision epoch.
struct EpochParams {
  std::vector<Matrix> P;   ///< one d x d row-stochastic matrix per action
  Matrix R;                ///< d x (A+1) per-arm rewards
  Matrix D;                ///< J x d(A+1) consumption, column s*(A+1)+a
  std::vector<double> b;   ///< J per-arm budgets
};

/// Weakly coupled MDP with per-epoch parameters. States are 0..d-1 and
/// actions 0..A, action 0 being the free passive action.
///
/// A stationary model stores a single EpochParams that serves every epoch.
class Model {
 public:
  Model() = default;
  /// `epochs` must hold either `horizon` entries or a single stationary one.
  Model(int d, int num_actions, int J, int horizon, std::vector<EpochParams> epochs,
        std::vector<std::string> state_labels = {});

  int d() const { return d_; }
  /// A: the largest action index. There are A+1 actions.
  int num_actions() const { return num_actions_; }
  int action_count() const { return num_actions_ + 1; }
  int J() const { return J_; }
  int horizon() const { return horizon_; }
  /// Number of (s,a) pairs.
  int pairs() const { return d_ * (num_actions_ + 1); }
  int column(int s, int a) const { return s * (num_actions_ + 1) + a; }

  bool stationary() const { return epochs_.size() == 1 && horizon_ > 1; }
  const EpochParams& epoch(int t) const;
  const std::vector<EpochParams>& stored_epochs() const { return epochs_; }
  const std::vector<std::string>& state_labels() const { return labels_; }

 private:
  int d_ = 0;
  int num_actions_ = 0;
  int J_ = 0;
  int horizon_ = 0;
  std::vector<EpochParams> epochs_;
  std::vector<std::string> labels_;
};

/// Population-level state distribution over the d states.
struct ConfigVector {
  std::vector<double> m;

  ConfigVector() = default;
  explicit ConfigVector(std::vector<double> values) : m(std::move(values)) {}
  std::size_t size() const { return m.size(); }
  double operator[](std::size_t s) const { return m[s]; }
  double& operator[](std::size_t s) { return m[s]; }
};

/// Population-level allocation over (s,a) pairs.
class DecisionVector {
 public:
  DecisionVector() = default;
  DecisionVector(int d, int action_count)
      : d_(d), na_(action_count), y_(static_cast<std::size_t>(d * action_count), 0.0) {}
  DecisionVector(int d, int action_count, std::vector<double> values);

  int d() const { return d_; }
  int action_count() const { return na_; }
  double operator()(int s, int a) const { return y_[static_cast<std::size_t>(s * na_ + a)]; }
  double& operator()(int s, int a) { return y_[static_cast<std::size_t>(s * na_ + a)]; }
  const std::vector<double>& values() const { return y_; }
  std::vector<double>& values() { return y_; }
  std::size_t size() const { return y_.size(); }

 private:
  int d_ = 0;
  int na_ = 0;
  std::vector<double> y_;
};

/// One violated model invariant.
struct Violation {
  enum class Kind { shape, negative_probability, row_sum, passive_cost, negative_cost, negative_budget };
  Kind kind;
  int epoch = -1;
  int state = -1;
  int action = -1;
  std::string message;
};

/// Every invariant violation found in `model`; empty iff the model is valid.
std::vector<Violation> validate_model(const Model& model, const Tolerances& tol = {});

/// Whether `y` lies in Y(m) (N unset) or Y^N(m) at epoch t.
///
/// Checks y >= 0, per-state row sums against m, D y <= b, and for finite N the
/// integrality of N*y. Throws ContractViolation on a dimension mismatch.
bool is_feasible_decision(const Model& model, int t, const ConfigVector& m, const DecisionVector& y,
                          std::optional<long> N = std::nullopt, const Tolerances& tol = {});

/// Same checks as is_feasible_decision but returns a description of the first
/// failed check, or nullopt.
std::optional<std::string> explain_infeasibility(const Model& model, int t, const ConfigVector& m,
                                                 const DecisionVector& y, std::optional<long> N = std::nullopt,
                                                 const Tolerances& tol = {});

/// Whether m is a probability vector (and N*m integral when N given).
bool is_config(const ConfigVector& m, std::optional<long> N = std::nullopt, const Tolerances& tol = {});

/// Nearest point of the 1/N grid by largest remainder: floor(N m_s) arms per
/// state, the leftover arms going to the largest fractional parts (lowest
/// state index on ties).
ConfigVector grid_config(const ConfigVector& m, long N);

/// Everyone passive: y(s,0) = m_s.
DecisionVector passive_decision(const Model& model, const ConfigVector& m);

std::string to_string(Violation::Kind kind);

// JSON model schema.
Model model_from_json(std::string_view text);
Model load_model(const std::string& path);
std::string model_to_json(const Model& model);

}  // namespace wcmdp
