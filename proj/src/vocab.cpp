#include "airdecode/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace airdecode {

namespace {

std::string lowercased(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view text, const TokenizerConfig& config) {
  std::vector<std::string> out;
  if (config.mode == TokenizerConfig::Mode::WhitespaceWord) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i > start) {
        std::string_view word = text.substr(start, i - start);
        out.push_back(config.lowercase ? lowercased(word) : std::string(word));
      }
    }
  } else {
    for (char c : text) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      char t = config.lowercase ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
                                : c;
      out.push_back(std::string(1, t));
    }
  }
  return out;
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& docs) {
  std::set<std::string> unique;
  for (const auto& doc : docs) {
    for (const auto& tok : doc) unique.insert(tok);
  }
  unique.erase(kBosToken);
  unique.erase(kEosToken);
  unique.erase(kUnkToken);

  Vocabulary v;
  v.tokens_.reserve(unique.size() + 3);
  v.tokens_.push_back(kBosToken);
  v.tokens_.push_back(kEosToken);
  v.tokens_.push_back(kUnkToken);
  v.tokens_.insert(v.tokens_.end(), unique.begin(), unique.end());
  v.rebuild_index();
  return v;
}

Vocabulary Vocabulary::from_token_list(std::vector<std::string> tokens) {
  if (tokens.size() < 3 || tokens[0] != kBosToken || tokens[1] != kEosToken ||
      tokens[2] != kUnkToken) {
    throw IoError("Vocabulary: token list must start with the sentinels <s>, </s>, <unk>");
  }
  Vocabulary v;
  v.tokens_ = std::move(tokens);
  v.rebuild_index();
  if (v.index_.size() != v.tokens_.size()) {
    throw IoError("Vocabulary: token list contains duplicates");
  }
  return v;
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace(tokens_[i], static_cast<int32_t>(i));
  }
}

const std::string& Vocabulary::token(int32_t id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw NumericsError("Vocabulary: token id out of range: " + std::to_string(id));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

int32_t Vocabulary::id_or_unk(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::vector<int32_t> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(id_or_unk(tok));
  return ids;
}

std::string Vocabulary::decode(const std::vector<int32_t>& ids) const {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ' ';
    out += token(ids[i]);
  }
  return out;
}

std::vector<int32_t> tokenize(std::string_view text, const TokenizerConfig& config,
                              const Vocabulary& vocab) {
  return vocab.encode(split_tokens(text, config));
}

}  // namespace airdecode
