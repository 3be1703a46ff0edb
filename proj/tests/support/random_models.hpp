#pragma once

#include <random>
#include <vector>

#include "wcmdp/model.hpp"

namespace testing_support {

struct ModelShape {
  int d = 3;
  int A = 1;
  int J = 1;
  int T = 3;
  bool unit_consumption = false;  ///< D(s,a) = 1 for every active action
  double sparsity = 0.3;          ///< chance that a transition entry is zero
};

inline wcmdp::Matrix random_stochastic(int d, double sparsity, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  wcmdp::Matrix P(static_cast<std::size_t>(d), static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) {
    double total = 0.0;
    for (int s2 = 0; s2 < d; ++s2) {
      const double v = u(rng) < sparsity ? 0.0 : u(rng) + 0.05;
      P(static_cast<std::size_t>(s), static_cast<std::size_t>(s2)) = v;
      total += v;
    }
    if (total == 0.0) {
      P(static_cast<std::size_t>(s), static_cast<std::size_t>(s)) = 1.0;
      continue;
    }
    for (int s2 = 0; s2 < d; ++s2) P(static_cast<std::size_t>(s), static_cast<std::size_t>(s2)) /= total;
  }
  return P;
}

inline wcmdp::Model random_model(const ModelShape& shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int na = shape.A + 1;
  std::vector<wcmdp::EpochParams> epochs;
  for (int t = 0; t < shape.T; ++t) {
    wcmdp::EpochParams e;
    for (int a = 0; a < na; ++a) e.P.push_back(random_stochastic(shape.d, shape.sparsity, rng));
    e.R = wcmdp::Matrix(static_cast<std::size_t>(shape.d), static_cast<std::size_t>(na));
    for (int s = 0; s < shape.d; ++s)
      for (int a = 0; a < na; ++a) e.R(static_cast<std::size_t>(s), static_cast<std::size_t>(a)) = u(rng);
    e.D = wcmdp::Matrix(static_cast<std::size_t>(shape.J), static_cast<std::size_t>(shape.d * na));
    for (int j = 0; j < shape.J; ++j)
      for (int s = 0; s < shape.d; ++s)
        for (int a = 1; a < na; ++a)
          e.D(static_cast<std::size_t>(j), static_cast<std::size_t>(s * na + a)) =
              shape.unit_consumption ? 1.0 : 0.2 + 0.8 * u(rng);
    for (int j = 0; j < shape.J; ++j) e.b.push_back(0.1 + 0.5 * u(rng));
    epochs.push_back(std::move(e));
  }
  return wcmdp::Model(shape.d, shape.A, shape.J, shape.T, std::move(epochs));
}

/// Random configuration with N*m integral.
inline wcmdp::ConfigVector random_config(int d, long N, std::mt19937_64& rng) {
  std::vector<long> counts(static_cast<std::size_t>(d), 0);
  std::uniform_int_distribution<int> pick(0, d - 1);
  for (long i = 0; i < N; ++i) ++counts[static_cast<std::size_t>(pick(rng))];
  std::vector<double> m;
  for (long c : counts) m.push_back(static_cast<double>(c) / static_cast<double>(N));
  return wcmdp::ConfigVector(std::move(m));
}

}  // namespace testing_support
