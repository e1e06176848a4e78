#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airdecode/ngram.hpp"
#include "airdecode/vocab.hpp"

namespace airdecode {

// Named generation settings. The built-in table carries one preset per
// task/backbone pairing plus bare task aliases for the medium variants.
struct AttributePreset {
  std::string name;
  double omega = 0.0;
  int top_k = 200;
  double top_p = 1.0;
  int length = 50;
};

const std::vector<AttributePreset>& builtin_presets();
std::optional<AttributePreset> preset_by_name(const std::string& name);

// One base model plus one conditional model per attribute class, all over a
// shared vocabulary, with optional class priors (uniform by default).
// Immutable after build; safe for concurrent reads.
class AttributeEnsemble {
 public:
  struct LabeledCorpus {
    std::string label;
    std::vector<std::string> lines;  // one document per line
  };

  // Trains one class model per labeled corpus and the base model on either
  // the supplied neutral corpus or the concatenation of all class corpora.
  // The vocabulary is the union over every corpus involved. class_smoothing,
  // when given, applies to the class models only; the conditional probes can
  // be flatter than the base without changing its sharpness.
  static AttributeEnsemble build(const std::vector<LabeledCorpus>& labeled,
                                 const std::vector<std::string>& base_lines, int order,
                                 const SmoothingConfig& smoothing,
                                 const TokenizerConfig& tokenizer = {},
                                 const std::optional<std::map<std::string, double>>& priors =
                                     std::nullopt,
                                 const std::optional<SmoothingConfig>& class_smoothing =
                                     std::nullopt);

  const Vocabulary& vocab() const { return *vocab_; }
  std::shared_ptr<const Vocabulary> vocab_ptr() const { return vocab_; }
  const TokenizerConfig& tokenizer() const { return tokenizer_; }

  const NGramModel& base() const { return *base_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t num_classes() const { return labels_.size(); }
  std::size_t label_index(const std::string& label) const;  // throws ConfigError if unknown
  const NGramModel& class_model(std::size_t index) const { return *class_models_[index]; }
  const NGramModel& class_model(const std::string& label) const {
    return *class_models_[label_index(label)];
  }

  // Aligned with labels(); uniform unless priors were supplied.
  const std::vector<double>& priors() const { return priors_; }
  const std::vector<double>& log_priors() const { return log_priors_; }

  // One next-token distribution per class, index-aligned with labels().
  std::vector<TokenDist> class_distributions(std::span<const int32_t> context) const;

  // Writes base/class model files plus manifest.json into `dir`; returns the
  // manifest path. load() resolves model paths relative to the manifest.
  std::string save(const std::string& dir) const;
  static AttributeEnsemble load(const std::string& manifest_path);

 private:
  AttributeEnsemble() = default;

  std::shared_ptr<const Vocabulary> vocab_;
  TokenizerConfig tokenizer_;
  std::shared_ptr<const NGramModel> base_;
  std::vector<std::string> labels_;
  std::vector<std::shared_ptr<const NGramModel>> class_models_;
  std::vector<double> priors_;
  std::vector<double> log_priors_;
};

}  // namespace airdecode
