#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "airdecode/dist.hpp"
#include "airdecode/vocab.hpp"

namespace airdecode {

// Interpolated additive smoothing: each order 1..n contributes an
// additive-alpha estimate, mixed with fixed interpolation weights. The
// default weights favor higher orders (proportional to 2^(k-1)).
struct SmoothingConfig {
  double additive = 0.01;
  std::vector<double> interpolation;  // one weight per order, must sum to 1; empty = default

  static std::vector<double> default_interpolation(int order);
};

// Count-based n-gram language model over a shared vocabulary.
//
// Contexts shorter than order-1 are left-padded with the BOS sentinel; every
// training document is terminated with EOS. Smoothing guarantees full
// support, so queried distributions are always valid and log-probabilities
// finite. Instances are immutable after training and safe to share across
// threads.
class NGramModel {
 public:
  static NGramModel train(const std::vector<std::vector<int32_t>>& docs, int order,
                          const SmoothingConfig& smoothing,
                          std::shared_ptr<const Vocabulary> vocab);

  // An order-1 model assigning exactly 1/V to every token.
  static NGramModel uniform(std::shared_ptr<const Vocabulary> vocab);

  int order() const { return order_; }
  const SmoothingConfig& smoothing() const { return smoothing_; }
  const Vocabulary& vocab() const { return *vocab_; }
  std::shared_ptr<const Vocabulary> vocab_ptr() const { return vocab_; }

  // Full next-token distribution for the given (unpadded) context.
  TokenDist next_token_distribution(std::span<const int32_t> context) const;

  // Smoothed P(token | context) for a single token. Same value as the
  // corresponding entry of next_token_distribution.
  double token_prob(std::span<const int32_t> context, int32_t token) const;

  // Unsmoothed top-order relative frequency; nullopt for unseen contexts.
  std::optional<double> mle_probability(std::span<const int32_t> context, int32_t token) const;

  // Sum of ln P(x_i | x_<i) over the sequence.
  double sequence_log_prob(std::span<const int32_t> ids) const;

  // exp(-(1/n) * sequence_log_prob). Throws DataError on empty input.
  double sequence_perplexity(std::span<const int32_t> ids) const;

  // Sum of all stored top-order counts; serialization checksum.
  std::uint64_t count_checksum() const;

  void save(const std::string& path) const;
  static NGramModel load(const std::string& path);

  std::string to_json_string() const;
  static NGramModel from_json_string(const std::string& text);

 private:
  struct SuccessorTable {
    std::unordered_map<int32_t, std::int64_t> counts;
    std::int64_t total = 0;
  };
  // One map per order k; keys are the (k-1)-token contexts packed as raw
  // little-endian id bytes.
  using ContextMap = std::unordered_map<std::string, SuccessorTable>;

  NGramModel() = default;

  static std::string pack_context(std::span<const int32_t> ctx);
  // Last k-1 tokens of the context, BOS-padded on the left.
  std::string padded_context(std::span<const int32_t> context, int k) const;

  int order_ = 0;
  SmoothingConfig smoothing_;
  std::vector<double> lambda_;  // resolved interpolation weights, size order_
  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<ContextMap> by_order_;  // index k-1 holds the order-k table
};

}  // namespace airdecode
