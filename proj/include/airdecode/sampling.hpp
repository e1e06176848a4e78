#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "airdecode/dist.hpp"

namespace airdecode {

struct SamplerConfig {
  std::optional<int> top_k;  // disabled when unset
  double top_p = 1.0;
  double temperature = 1.0;
  std::uint64_t seed = 0;
};

// Deterministic seeded stream of uniforms in [0, 1). Each generation
// sequence owns its own stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a master seed and indices
// (splitmix64 mixing); grid points and samples get decorrelated streams
// without any sequential draw ordering between them.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

// Keeps the k most probable tokens (ties at the boundary broken by
// ascending id), zeroes the rest, renormalizes. k >= size is the identity.
TokenDist top_k_filter(const TokenDist& dist, int k);

// Keeps the smallest probability-sorted prefix with cumulative mass >= p
// (at least one token), renormalizes. p == 1 is the identity.
TokenDist top_p_filter(const TokenDist& dist, double p);

// softmax(log p / T). T == 1 is the identity.
TokenDist apply_temperature(const TokenDist& dist, double temperature);

// Inverse-CDF draw over the vector order.
int32_t sample(const TokenDist& dist, Rng& rng);

// temperature, then top-k, then top-p.
TokenDist apply_sampler(const TokenDist& dist, const SamplerConfig& config);

}  // namespace airdecode
