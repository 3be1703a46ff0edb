#pragma once

// Exhaustive search over integer allocations: for every state, every way of
// splitting N*m_s arms among the actions. Returns the smallest achievable
// max |Y - y| over feasible allocations.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

// counts[s] = N m_s; y[s][a] fractional target; D[j][s][a]; b[j].
inline double best_rounding_distance(const std::vector<long>& counts, const std::vector<std::vector<double>>& y,
                                     const std::vector<std::vector<std::vector<double>>>& D,
                                     const std::vector<double>& b, long N) {
  const std::size_t d = counts.size();
  const std::size_t na = y.front().size();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<long>> Y(d, std::vector<long>(na, 0));
  std::function<void(std::size_t, std::size_t, long)> rec = [&](std::size_t s, std::size_t a, long left) {
    if (s == d) {
      for (std::size_t j = 0; j < D.size(); ++j) {
        double use = 0.0;
        for (std::size_t s2 = 0; s2 < d; ++s2)
          for (std::size_t a2 = 0; a2 < na; ++a2) use += D[j][s2][a2] * static_cast<double>(Y[s2][a2]) / N;
        if (use > b[j] + 1e-9) return;
      }
      double dist = 0.0;
      for (std::size_t s2 = 0; s2 < d; ++s2)
        for (std::size_t a2 = 0; a2 < na; ++a2)
          dist = std::max(dist, std::abs(static_cast<double>(Y[s2][a2]) / N - y[s2][a2]));
      best = std::min(best, dist);
      return;
    }
    if (a + 1 == na) {
      Y[s][a] = left;
      rec(s + 1, 0, s + 1 < d ? counts[s + 1] : 0);
      return;
    }
    for (long k = 0; k <= left; ++k) {
      Y[s][a] = k;
      rec(s, a + 1, left - k);
    }
  };
  rec(0, 0, counts[0]);
  return best;
}

}  // namespace oracle
