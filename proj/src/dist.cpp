#include "airdecode/dist.hpp"

#include <algorithm>
#include <numeric>

namespace airdecode {

WeightVec::WeightVec(std::vector<double> weights) : weights_(std::move(weights)) {
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
      throw NumericsError("WeightVec: entry " + std::to_string(i) +
                          " is negative or non-finite: " + std::to_string(weights_[i]));
    }
  }
}

TokenDist::TokenDist(std::vector<double> probs) : probs_(std::move(probs)) {
  double sum = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    const double p = probs_[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw NumericsError("TokenDist: entry " + std::to_string(i) +
                          " is negative or non-finite: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw NumericsError("TokenDist: entries sum to " + std::to_string(sum) +
                        ", expected 1 within 1e-9");
  }
}

TokenDist TokenDist::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw NumericsError("TokenDist::normalized: total mass is zero or non-finite");
  }
  for (double& w : weights) w /= sum;
  return TokenDist(std::move(weights));
}

std::vector<std::pair<int32_t, double>> top_entries(const std::vector<double>& values,
                                                    std::size_t n) {
  n = std::min(n, values.size());
  std::vector<int32_t> ids(values.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](int32_t a, int32_t b) {
                      if (values[a] != values[b]) return values[a] > values[b];
                      return a < b;
                    });
  std::vector<std::pair<int32_t, double>> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(ids[i], values[ids[i]]);
  return out;
}

}  // namespace airdecode
