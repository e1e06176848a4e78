#include "airdecode/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace airdecode {

namespace {

constexpr int kManifestVersion = 1;

std::vector<std::vector<int32_t>> encode_corpus(const std::vector<std::string>& lines,
                                                const TokenizerConfig& tok,
                                                const Vocabulary& vocab) {
  std::vector<std::vector<int32_t>> docs;
  docs.reserve(lines.size());
  for (const auto& line : lines) {
    auto ids = tokenize(line, tok, vocab);
    if (!ids.empty()) docs.push_back(std::move(ids));
  }
  return docs;
}

}  // namespace

const std::vector<AttributePreset>& builtin_presets() {
  static const std::vector<AttributePreset> presets = {
      {"sentiment-medium", 140.0, 200, 1.0, 50},
      {"sentiment-large", 130.0, 200, 1.0, 50},
      {"topic-medium", 60.0, 200, 1.0, 50},
      {"topic-large", 70.0, 200, 1.0, 50},
      {"detox-medium", 120.0, 200, 1.0, 50},
      {"detox-large", 140.0, 200, 1.0, 50},
  };
  return presets;
}

std::optional<AttributePreset> preset_by_name(const std::string& name) {
  // Bare task names alias the medium variants.
  std::string wanted = name;
  if (name == "sentiment" || name == "topic" || name == "detox") wanted = name + "-medium";
  for (const auto& p : builtin_presets()) {
    if (p.name == wanted) return p;
  }
  return std::nullopt;
}

AttributeEnsemble AttributeEnsemble::build(
    const std::vector<LabeledCorpus>& labeled, const std::vector<std::string>& base_lines,
    int order, const SmoothingConfig& smoothing, const TokenizerConfig& tokenizer,
    const std::optional<std::map<std::string, double>>& priors,
    const std::optional<SmoothingConfig>& class_smoothing) {
  if (labeled.size() < 2) {
    throw ConfigError("build_ensemble: need at least 2 attribute classes, got " +
                      std::to_string(labeled.size()));
  }
  std::set<std::string> seen;
  for (const auto& lc : labeled) {
    if (lc.label.empty()) throw ConfigError("build_ensemble: empty class label");
    if (!seen.insert(lc.label).second) {
      throw ConfigError("build_ensemble: duplicate class label '" + lc.label + "'");
    }
    if (lc.lines.empty()) {
      throw DataError("build_ensemble: corpus for class '" + lc.label + "' is empty");
    }
  }

  AttributeEnsemble e;
  e.tokenizer_ = tokenizer;

  // Union vocabulary over every corpus, so all per-class distributions are
  // index-aligned.
  std::vector<std::vector<std::string>> all_docs;
  for (const auto& lc : labeled) {
    for (const auto& line : lc.lines) all_docs.push_back(split_tokens(line, tokenizer));
  }
  for (const auto& line : base_lines) all_docs.push_back(split_tokens(line, tokenizer));
  e.vocab_ = std::make_shared<Vocabulary>(Vocabulary::build(all_docs));

  std::vector<std::vector<int32_t>> base_docs;
  if (base_lines.empty()) {
    for (const auto& lc : labeled) {
      auto docs = encode_corpus(lc.lines, tokenizer, *e.vocab_);
      base_docs.insert(base_docs.end(), docs.begin(), docs.end());
    }
  } else {
    base_docs = encode_corpus(base_lines, tokenizer, *e.vocab_);
  }
  e.base_ = std::make_shared<NGramModel>(NGramModel::train(base_docs, order, smoothing, e.vocab_));

  const SmoothingConfig& cls_smoothing = class_smoothing ? *class_smoothing : smoothing;
  for (const auto& lc : labeled) {
    e.labels_.push_back(lc.label);
    e.class_models_.push_back(std::make_shared<NGramModel>(
        NGramModel::train(encode_corpus(lc.lines, tokenizer, *e.vocab_), order, cls_smoothing,
                          e.vocab_)));
  }

  if (priors) {
    if (priors->size() != e.labels_.size()) {
      throw ConfigError("build_ensemble: prior map must have one entry per class");
    }
    double sum = 0.0;
    for (const auto& label : e.labels_) {
      auto it = priors->find(label);
      if (it == priors->end()) {
        throw ConfigError("build_ensemble: missing prior for class '" + label + "'");
      }
      if (!(it->second > 0.0)) {
        throw ConfigError("build_ensemble: prior for class '" + label + "' must be positive");
      }
      e.priors_.push_back(it->second);
      sum += it->second;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ConfigError("build_ensemble: priors sum to " + std::to_string(sum) +
                        ", expected 1");
    }
  } else {
    e.priors_.assign(e.labels_.size(), 1.0 / static_cast<double>(e.labels_.size()));
  }
  for (double p : e.priors_) e.log_priors_.push_back(std::log(p));
  return e;
}

std::size_t AttributeEnsemble::label_index(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw ConfigError("unknown attribute label '" + label + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<TokenDist> AttributeEnsemble::class_distributions(
    std::span<const int32_t> context) const {
  std::vector<TokenDist> dists;
  dists.reserve(class_models_.size());
  for (const auto& m : class_models_) dists.push_back(m->next_token_distribution(context));
  return dists;
}

std::string AttributeEnsemble::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path root(dir);

  base_->save((root / "base.model.json").string());
  nlohmann::json classes = nlohmann::json::array();
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const std::string file = "class_" + labels_[i] + ".model.json";
    class_models_[i]->save((root / file).string());
    classes.push_back({{"label", labels_[i]}, {"model_path", file}, {"prior", priors_[i]}});
  }

  nlohmann::json manifest;
  manifest["format_version"] = kManifestVersion;
  manifest["base_model_path"] = "base.model.json";
  manifest["classes"] = std::move(classes);
  manifest["tokenizer"] = {
      {"mode", tokenizer_.mode == TokenizerConfig::Mode::WhitespaceWord ? "word" : "char"},
      {"lowercase", tokenizer_.lowercase}};

  const std::string manifest_path = (root / "manifest.json").string();
  std::ofstream out(manifest_path, std::ios::binary);
  if (!out) throw IoError("cannot open manifest for writing: " + manifest_path);
  out << manifest.dump(2) << '\n';
  return manifest_path;
}

AttributeEnsemble AttributeEnsemble::load(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("manifest is not valid JSON: ") + e.what());
  }

  try {
    if (manifest.at("format_version").get<int>() != kManifestVersion) {
      throw IoError("unsupported manifest format_version");
    }
    const fs::path root = fs::path(manifest_path).parent_path();

    AttributeEnsemble e;
    if (manifest.contains("tokenizer")) {
      const auto& t = manifest["tokenizer"];
      e.tokenizer_.mode = t.at("mode").get<std::string>() == "char"
                              ? TokenizerConfig::Mode::Character
                              : TokenizerConfig::Mode::WhitespaceWord;
      e.tokenizer_.lowercase = t.at("lowercase").get<bool>();
    }
    e.base_ = std::make_shared<NGramModel>(
        NGramModel::load((root / manifest.at("base_model_path").get<std::string>()).string()));
    e.vocab_ = e.base_->vocab_ptr();

    double prior_sum = 0.0;
    for (const auto& cls : manifest.at("classes")) {
      e.labels_.push_back(cls.at("label").get<std::string>());
      auto model = std::make_shared<NGramModel>(
          NGramModel::load((root / cls.at("model_path").get<std::string>()).string()));
      if (!(model->vocab() == *e.vocab_)) {
        throw IoError("ensemble models do not share a vocabulary (class '" +
                      e.labels_.back() + "')");
      }
      e.class_models_.push_back(std::move(model));
      const double prior = cls.contains("prior") ? cls.at("prior").get<double>()
                                                 : 1.0 / manifest.at("classes").size();
      if (!(prior > 0.0)) throw IoError("manifest prior must be positive");
      e.priors_.push_back(prior);
      prior_sum += prior;
    }
    if (e.labels_.size() < 2) throw IoError("manifest must list at least 2 classes");
    if (std::abs(prior_sum - 1.0) > 1e-9) throw IoError("manifest priors must sum to 1");
    for (double p : e.priors_) e.log_priors_.push_back(std::log(p));
    return e;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("manifest has unexpected structure: ") + e.what());
  }
}

}  // namespace airdecode
