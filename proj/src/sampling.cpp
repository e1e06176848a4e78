#include "airdecode/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace airdecode {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Token ids ordered by descending probability, ties by ascending id.
std::vector<int32_t> ids_by_prob(const TokenDist& dist) {
  std::vector<int32_t> ids(dist.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int32_t a, int32_t b) {
    if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)]) {
      return dist[static_cast<std::size_t>(a)] > dist[static_cast<std::size_t>(b)];
    }
    return a < b;
  });
  return ids;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(master) ^ a) ^ b);
}

TokenDist top_k_filter(const TokenDist& dist, int k) {
  if (k < 1) throw ConfigError("top_k_filter: k must be >= 1, got " + std::to_string(k));
  if (static_cast<std::size_t>(k) >= dist.size()) return dist;

  auto ids = ids_by_prob(dist);
  std::vector<double> kept(dist.size(), 0.0);
  for (int i = 0; i < k; ++i) {
    const auto id = static_cast<std::size_t>(ids[static_cast<std::size_t>(i)]);
    kept[id] = dist[id];
  }
  return TokenDist::normalized(std::move(kept));
}

TokenDist top_p_filter(const TokenDist& dist, double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw ConfigError("top_p_filter: p must be in (0, 1], got " + std::to_string(p));
  }
  if (p == 1.0) return dist;

  auto ids = ids_by_prob(dist);
  std::vector<double> kept(dist.size(), 0.0);
  double cum = 0.0;
  for (int32_t id : ids) {
    const auto i = static_cast<std::size_t>(id);
    kept[i] = dist[i];
    cum += dist[i];
    if (cum >= p) break;
  }
  return TokenDist::normalized(std::move(kept));
}

TokenDist apply_temperature(const TokenDist& dist, double temperature) {
  if (!(temperature > 0.0)) {
    throw ConfigError("apply_temperature: temperature must be > 0");
  }
  if (temperature == 1.0) return dist;

  std::vector<double> scaled(dist.size());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dist.size(); ++i) {
    scaled[i] = std::log(dist[i]) / temperature;  // log(0) = -inf stays -inf
    max_log = std::max(max_log, scaled[i]);
  }
  for (double& x : scaled) x = std::exp(x - max_log);
  return TokenDist::normalized(std::move(scaled));
}

int32_t sample(const TokenDist& dist, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  int32_t last_positive = -1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    last_positive = static_cast<int32_t>(i);
    cum += dist[i];
    if (u < cum) return last_positive;
  }
  // Rounding can leave cum fractionally below 1; fall back to the last
  // token with positive mass.
  if (last_positive < 0) throw NumericsError("sample: distribution has empty support");
  return last_positive;
}

TokenDist apply_sampler(const TokenDist& dist, const SamplerConfig& config) {
  TokenDist out = apply_temperature(dist, config.temperature);
  if (config.top_k) out = top_k_filter(out, *config.top_k);
  out = top_p_filter(out, config.top_p);
  return out;
}

}  // namespace airdecode
