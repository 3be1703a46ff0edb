#include "wcmdp/random.hpp"

#include <algorithm>

namespace wcmdp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream tag) {
  return splitmix64(splitmix64(splitmix64(master) ^ index) ^ static_cast<std::uint64_t>(tag));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

long sample_binomial(Rng& rng, long n, double p) {
  if (n <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<long> dist(n, p);
  return dist(rng);
}

std::vector<long> sample_multinomial(Rng& rng, long n, std::span<const double> p) {
  std::vector<long> out(p.size(), 0);
  if (n <= 0) return out;
  int last = -1;
  double mass = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      last = static_cast<int>(i);
      mass += p[i];
    }
  }
  if (last < 0) return out;
  long left = n;
  for (int i = 0; i < last && left > 0; ++i) {
    const double pi = p[static_cast<std::size_t>(i)];
    if (pi <= 0.0) continue;
    const double q = std::clamp(pi / mass, 0.0, 1.0);
    const long k = sample_binomial(rng, left, q);
    out[static_cast<std::size_t>(i)] = k;
    left -= k;
    mass -= pi;
    if (mass <= 0.0) break;
  }
  out[static_cast<std::size_t>(last)] += left;
  return out;
}

}  // namespace wcmdp
