#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "airdecode/errors.hpp"

namespace airdecode {

struct TokenizerConfig {
  enum class Mode { WhitespaceWord, Character };
  Mode mode = Mode::WhitespaceWord;
  bool lowercase = true;
};

// Splits raw text into token strings. Word mode splits on whitespace runs;
// character mode emits one token per non-whitespace character. Empty text
// yields an empty sequence.
std::vector<std::string> split_tokens(std::string_view text, const TokenizerConfig& config);

// Token <-> dense-id bijection with fixed sentinel ids. Regular tokens are
// stored in lexicographic order, which makes the id assignment independent
// of the order corpora are scanned in: ensembles built from the same corpus
// set always agree on ids no matter how the classes are labeled.
class Vocabulary {
 public:
  static constexpr int32_t kBosId = 0;
  static constexpr int32_t kEosId = 1;
  static constexpr int32_t kUnkId = 2;
  static constexpr const char* kBosToken = "<s>";
  static constexpr const char* kEosToken = "</s>";
  static constexpr const char* kUnkToken = "<unk>";

  // Builds from the union of the given tokenized documents.
  static Vocabulary build(const std::vector<std::vector<std::string>>& docs);

  // Restores a vocabulary from an explicit ordered token list (first three
  // entries must be the sentinels). Used by model deserialization.
  static Vocabulary from_token_list(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::string& token(int32_t id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Closed-vocabulary lookup: unknown tokens map to kUnkId.
  int32_t id_or_unk(std::string_view token) const;
  bool contains(std::string_view token) const;

  std::vector<int32_t> encode(const std::vector<std::string>& tokens) const;
  std::string decode(const std::vector<int32_t>& ids) const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  Vocabulary() = default;
  void rebuild_index();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int32_t> index_;
};

// Tokenize + closed-vocabulary encode in one step.
std::vector<int32_t> tokenize(std::string_view text, const TokenizerConfig& config,
                              const Vocabulary& vocab);

}  // namespace airdecode
