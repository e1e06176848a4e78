#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "airdecode/errors.hpp"

namespace airdecode {

class TokenDist;

// Non-negative per-token weights. Unlike TokenDist, entries need not sum
// to one; this is the type of regularized attribute vectors and of any
// intermediate product before renormalization.
class WeightVec {
 public:
  WeightVec() = default;
  explicit WeightVec(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& values() const { return weights_; }

 private:
  std::vector<double> weights_;
};

// A probability distribution over the vocabulary, indexed by token id.
// Construction enforces the normalization contract: every entry finite and
// >= 0, total within kSumTolerance of 1.
class TokenDist {
 public:
  static constexpr double kSumTolerance = 1e-9;

  TokenDist() = default;
  explicit TokenDist(std::vector<double> probs);

  // Normalizes an arbitrary non-negative weight vector. Throws
  // NumericsError if the total mass is zero or non-finite.
  static TokenDist normalized(std::vector<double> weights);
  static TokenDist normalized(const WeightVec& weights) {
    return normalized(weights.values());
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }

  bool operator==(const TokenDist& other) const = default;

 private:
  std::vector<double> probs_;
};

// Top `n` (id, prob) pairs ordered by descending probability, ties broken
// by ascending token id. Shared by samplers, trace output and top-set
// diagnostics so every consumer agrees on the tie rule.
std::vector<std::pair<int32_t, double>> top_entries(const std::vector<double>& values,
                                                    std::size_t n);

}  // namespace airdecode
