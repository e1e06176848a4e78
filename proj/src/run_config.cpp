#include "airdecode/run_config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

namespace airdecode {

namespace {

std::string resolve(const std::filesystem::path& root, const std::string& path) {
  std::filesystem::path p(path);
  return p.is_absolute() ? p.string() : (root / p).string();
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }

  const std::filesystem::path root = std::filesystem::path(path).parent_path();
  RunConfig c;
  try {
    if (j.contains("task")) c.task = j["task"].get<std::string>();
    if (!j.contains("corpora") || !j["corpora"].is_array()) {
      throw ConfigError("config file " + path + ": 'corpora' array is required");
    }
    for (const auto& entry : j["corpora"]) {
      c.corpora.emplace_back(entry.at("label").get<std::string>(),
                             resolve(root, entry.at("path").get<std::string>()));
    }
    if (j.contains("base_corpus")) {
      c.base_corpus = resolve(root, j["base_corpus"].get<std::string>());
    }
    if (j.contains("order")) c.order = j["order"].get<int>();
    if (j.contains("smoothing")) {
      const auto& s = j["smoothing"];
      if (s.contains("additive")) c.smoothing.additive = s["additive"].get<double>();
      if (s.contains("interpolation")) {
        c.smoothing.interpolation = s["interpolation"].get<std::vector<double>>();
      }
    }
    if (j.contains("priors")) {
      c.priors = j["priors"].get<std::map<std::string, double>>();
    }
    if (j.contains("tokenizer")) {
      const auto& t = j["tokenizer"];
      if (t.contains("mode")) {
        c.tokenizer.mode = t["mode"].get<std::string>() == "char"
                               ? TokenizerConfig::Mode::Character
                               : TokenizerConfig::Mode::WhitespaceWord;
      }
      if (t.contains("lowercase")) c.tokenizer.lowercase = t["lowercase"].get<bool>();
    }

    if (j.contains("preset")) {
      c.preset = j["preset"].get<std::string>();
      auto p = preset_by_name(c.preset);
      if (!p) throw ConfigError("config file " + path + ": unknown preset '" + c.preset + "'");
      c.gen = GenerateOptions::from_preset(*p);
    }
    if (j.contains("omega")) c.gen.omega = j["omega"].get<double>();
    if (j.contains("top_k")) c.gen.top_k = j["top_k"].get<int>();
    if (j.contains("top_p")) c.gen.top_p = j["top_p"].get<double>();
    if (j.contains("temperature")) c.gen.temperature = j["temperature"].get<double>();
    if (j.contains("length")) c.gen.length = j["length"].get<int>();
    if (j.contains("mode")) {
      c.gen.mode = composition_mode_from_string(j["mode"].get<std::string>());
    }
    if (j.contains("eos_terminated")) c.gen.eos_terminated = j["eos_terminated"].get<bool>();
    if (j.contains("seed")) c.gen.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("eval_corpus")) c.eval_corpus = resolve(root, j["eval_corpus"].get<std::string>());
    if (j.contains("eval_model")) c.eval_model = resolve(root, j["eval_model"].get<std::string>());
    if (j.contains("prompts_file")) {
      c.prompts_file = resolve(root, j["prompts_file"].get<std::string>());
    }
    if (j.contains("out_dir")) c.out_dir = resolve(root, j["out_dir"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + " has unexpected structure: " + e.what());
  }
  return c;
}

void RunConfig::validate() const {
  if (corpora.size() < 2) {
    throw ConfigError("config: need at least 2 labeled corpora, got " +
                      std::to_string(corpora.size()));
  }
  std::set<std::string> labels;
  for (const auto& [label, path] : corpora) {
    if (!labels.insert(label).second) {
      throw ConfigError("config: duplicate label '" + label + "'");
    }
    if (!std::filesystem::exists(path)) {
      throw ConfigError("config: corpus path does not exist: " + path + " (label '" + label +
                        "')");
    }
  }
  for (const auto& opt : {base_corpus, eval_corpus, eval_model, prompts_file}) {
    if (opt && !std::filesystem::exists(*opt)) {
      throw ConfigError("config: path does not exist: " + *opt);
    }
  }
  if (order < 1) throw ConfigError("config: order must be >= 1");
  if (gen.omega < 0.0) throw ConfigError("config: omega must be >= 0");
  if (gen.length < 1) throw ConfigError("config: length must be >= 1");
}

}  // namespace airdecode
