#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace wcmdp {

using Rng = std::mt19937_64;

/// Stream tags mixed into derived seeds.
enum class Stream : std::uint64_t { episode = 1, transitions = 2, policy = 3 };

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replication `index` of stream `tag` under `master`:
/// splitmix64(splitmix64(splitmix64(master) ^ index) ^ tag).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream tag);

/// Uniform on [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

long sample_binomial(Rng& rng, long n, double p);

/// Counts over categories by sequential conditional binomials. Categories
/// with probability zero always receive zero.
std::vector<long> sample_multinomial(Rng& rng, long n, std::span<const double> p);

}  // namespace wcmdp
