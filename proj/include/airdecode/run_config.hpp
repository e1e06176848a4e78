#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airdecode/decoding.hpp"
#include "airdecode/ngram.hpp"

namespace airdecode {

// A single JSON document describing one experiment: corpora, model
// hyperparameters and generation settings. Relative paths resolve against
// the config file's directory; CLI flags override individual fields.
struct RunConfig {
  std::string task = "run";
  std::vector<std::pair<std::string, std::string>> corpora;  // (label, path), order preserved
  std::optional<std::string> base_corpus;
  int order = 3;
  SmoothingConfig smoothing;
  std::optional<std::map<std::string, double>> priors;
  TokenizerConfig tokenizer;

  std::string preset;  // optional named preset; explicit fields win
  GenerateOptions gen;

  std::optional<std::string> eval_corpus;  // held-out corpus to train the eval model on
  std::optional<std::string> eval_model;   // or a pre-trained eval model file
  std::optional<std::string> prompts_file;
  std::string out_dir = "out";

  static RunConfig load(const std::string& path);

  // Checks label uniqueness and that every referenced path exists; throws
  // ConfigError naming the offending entry.
  void validate() const;
};

}  // namespace airdecode
