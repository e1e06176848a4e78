#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace airdecode {

// Synthetic two-attribute review corpus. Both classes share the same
// sentence templates and style vocabulary; the class signal lives in two
// designated word tiers:
//
//   - strong attribute words fill the templates' attribute slots, drawn
//     from the class's own list most of the time and from the other list at
//     cross_class_rate, which bounds their per-token likelihood ratios;
//   - rare "flavor" words are sprinkled into random positions, individually
//     infrequent and only mildly class-skewed (filler_cross_rate close to
//     one half), so their ratios are dominated by sampling noise.
//
// The mix keeps per-token evidence moderate the way a pair of same-backbone
// conditional models would, which is what makes high-control-strength
// decoding behave the way it does at full scale.
struct ToyCorpusConfig {
  int docs_per_class = 5000;
  int eval_docs = 2000;  // held-out documents for the evaluation model
  std::uint64_t seed = 20230817;
  double cross_class_rate = 0.25;   // strong attribute slot from the other class
  double filler_cross_rate = 0.2;   // flavor word from the other class
  double neutral_slot_rate = 0.25;  // attribute slot filled with a neutral adjective
  double flourish_rate = 0.5;       // chance a clause carries one flavor word
  double strong_zipf = 0.9;         // rank exponent inside the strong lists
  double common_zipf = 0.7;         // rank exponent for nouns/verbs/etc.
};

struct ToyCorpus {
  std::vector<std::string> positive_docs;
  std::vector<std::string> negative_docs;
  std::vector<std::string> eval_docs;
  std::vector<std::string> prompts;
};

ToyCorpus make_toy_corpus(const ToyCorpusConfig& config);

// Designated attribute word sets (strong + flavor tiers combined).
const std::vector<std::string>& toy_positive_words();
const std::vector<std::string>& toy_negative_words();

// Fraction of tokens that belong to the given word set.
double attribute_word_rate(const std::vector<std::vector<std::string>>& texts,
                           const std::vector<std::string>& words);

}  // namespace airdecode
