#include "airdecode/ngram.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace airdecode {

namespace {

constexpr int kFormatVersion = 1;

std::vector<std::string> split_on_spaces(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::vector<double> SmoothingConfig::default_interpolation(int order) {
  // Weight order k proportional to 4^(k-1): the top order dominates, lower
  // orders only fill in unseen contexts.
  std::vector<double> w(static_cast<std::size_t>(order));
  double sum = 0.0;
  for (int k = 0; k < order; ++k) {
    w[static_cast<std::size_t>(k)] = std::ldexp(1.0, 2 * k);  // 4^k
    sum += w[static_cast<std::size_t>(k)];
  }
  for (double& x : w) x /= sum;
  return w;
}

std::string NGramModel::pack_context(std::span<const int32_t> ctx) {
  std::string key(ctx.size() * sizeof(int32_t), '\0');
  if (!ctx.empty()) std::memcpy(key.data(), ctx.data(), key.size());
  return key;
}

std::string NGramModel::padded_context(std::span<const int32_t> context, int k) const {
  const int need = k - 1;
  std::vector<int32_t> ctx(static_cast<std::size_t>(need), Vocabulary::kBosId);
  const int have = static_cast<int>(context.size());
  const int take = std::min(need, have);
  for (int i = 0; i < take; ++i) {
    ctx[static_cast<std::size_t>(need - take + i)] =
        context[static_cast<std::size_t>(have - take + i)];
  }
  return pack_context(ctx);
}

NGramModel NGramModel::train(const std::vector<std::vector<int32_t>>& docs, int order,
                             const SmoothingConfig& smoothing,
                             std::shared_ptr<const Vocabulary> vocab) {
  if (order < 1) {
    throw ConfigError("NGramModel: order must be >= 1, got " + std::to_string(order));
  }
  if (docs.empty()) {
    throw DataError("NGramModel: training corpus is empty");
  }
  if (!vocab) {
    throw ConfigError("NGramModel: vocabulary is required");
  }
  if (!(smoothing.additive > 0.0)) {
    throw ConfigError("NGramModel: additive smoothing constant must be > 0");
  }

  NGramModel m;
  m.order_ = order;
  m.smoothing_ = smoothing;
  m.vocab_ = std::move(vocab);
  if (smoothing.interpolation.empty()) {
    m.lambda_ = SmoothingConfig::default_interpolation(order);
  } else {
    if (static_cast<int>(smoothing.interpolation.size()) != order) {
      throw ConfigError("NGramModel: interpolation weights must have one entry per order");
    }
    double sum = 0.0;
    for (double w : smoothing.interpolation) {
      if (!(w >= 0.0)) throw ConfigError("NGramModel: interpolation weights must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ConfigError("NGramModel: interpolation weights must sum to 1");
    }
    m.lambda_ = smoothing.interpolation;
  }

  m.by_order_.resize(static_cast<std::size_t>(order));
  std::vector<int32_t> seq;
  for (const auto& doc : docs) {
    seq.clear();
    seq.insert(seq.end(), static_cast<std::size_t>(order - 1), Vocabulary::kBosId);
    seq.insert(seq.end(), doc.begin(), doc.end());
    seq.push_back(Vocabulary::kEosId);
    const std::size_t pad = static_cast<std::size_t>(order - 1);
    for (std::size_t pos = pad; pos < seq.size(); ++pos) {
      const int32_t tok = seq[pos];
      for (int k = 1; k <= order; ++k) {
        auto ctx = std::span<const int32_t>(seq).subspan(pos - static_cast<std::size_t>(k - 1),
                                                         static_cast<std::size_t>(k - 1));
        auto& table = m.by_order_[static_cast<std::size_t>(k - 1)][pack_context(ctx)];
        ++table.counts[tok];
        ++table.total;
      }
    }
  }
  return m;
}

NGramModel NGramModel::uniform(std::shared_ptr<const Vocabulary> vocab) {
  if (!vocab) throw ConfigError("NGramModel: vocabulary is required");
  NGramModel m;
  m.order_ = 1;
  m.smoothing_ = SmoothingConfig{};
  m.lambda_ = {1.0};
  m.vocab_ = std::move(vocab);
  m.by_order_.resize(1);
  // Count 1 for every token, including sentinels: (1 + a) / (V + a V) = 1/V
  // exactly, for any additive constant.
  auto& table = m.by_order_[0][std::string()];
  const int32_t v = static_cast<int32_t>(m.vocab_->size());
  for (int32_t i = 0; i < v; ++i) table.counts[i] = 1;
  table.total = v;
  return m;
}

TokenDist NGramModel::next_token_distribution(std::span<const int32_t> context) const {
  const std::size_t v = vocab_->size();
  const double alpha = smoothing_.additive;
  std::vector<double> probs(v, 0.0);
  for (int k = 1; k <= order_; ++k) {
    const double lambda = lambda_[static_cast<std::size_t>(k - 1)];
    const auto& table_map = by_order_[static_cast<std::size_t>(k - 1)];
    auto it = table_map.find(padded_context(context, k));
    const SuccessorTable* table = it == table_map.end() ? nullptr : &it->second;
    const double total = table ? static_cast<double>(table->total) : 0.0;
    const double denom = total + alpha * static_cast<double>(v);
    const double unseen = lambda * (alpha / denom);
    for (std::size_t i = 0; i < v; ++i) probs[i] += unseen;
    if (table) {
      for (const auto& [tok, cnt] : table->counts) {
        probs[static_cast<std::size_t>(tok)] += lambda * (static_cast<double>(cnt) / denom);
      }
    }
  }
  return TokenDist(std::move(probs));
}

double NGramModel::token_prob(std::span<const int32_t> context, int32_t token) const {
  const double alpha = smoothing_.additive;
  const double v = static_cast<double>(vocab_->size());
  double p = 0.0;
  for (int k = 1; k <= order_; ++k) {
    const double lambda = lambda_[static_cast<std::size_t>(k - 1)];
    const auto& table_map = by_order_[static_cast<std::size_t>(k - 1)];
    auto it = table_map.find(padded_context(context, k));
    const SuccessorTable* table = it == table_map.end() ? nullptr : &it->second;
    const double total = table ? static_cast<double>(table->total) : 0.0;
    const double denom = total + alpha * v;
    p += lambda * (alpha / denom);
    if (table) {
      auto ct = table->counts.find(token);
      if (ct != table->counts.end()) {
        p += lambda * (static_cast<double>(ct->second) / denom);
      }
    }
  }
  return p;
}

std::optional<double> NGramModel::mle_probability(std::span<const int32_t> context,
                                                  int32_t token) const {
  const auto& table_map = by_order_[static_cast<std::size_t>(order_ - 1)];
  auto it = table_map.find(padded_context(context, order_));
  if (it == table_map.end() || it->second.total == 0) return std::nullopt;
  auto ct = it->second.counts.find(token);
  const std::int64_t cnt = ct == it->second.counts.end() ? 0 : ct->second;
  return static_cast<double>(cnt) / static_cast<double>(it->second.total);
}

double NGramModel::sequence_log_prob(std::span<const int32_t> ids) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    sum += std::log(token_prob(ids.subspan(0, i), ids[i]));
  }
  return sum;
}

double NGramModel::sequence_perplexity(std::span<const int32_t> ids) const {
  if (ids.empty()) throw DataError("sequence_perplexity: empty token sequence");
  const double mean = sequence_log_prob(ids) / static_cast<double>(ids.size());
  return std::exp(-mean);
}

std::uint64_t NGramModel::count_checksum() const {
  std::uint64_t sum = 0;
  for (const auto& [ctx, table] : by_order_[static_cast<std::size_t>(order_ - 1)]) {
    sum += static_cast<std::uint64_t>(table.total);
  }
  return sum;
}

std::string NGramModel::to_json_string() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["order"] = order_;
  j["smoothing"] = {{"additive", smoothing_.additive}, {"interpolation", lambda_}};
  j["vocabulary"] = vocab_->tokens();
  nlohmann::json counts = nlohmann::json::object();
  for (int k = 1; k <= order_; ++k) {
    nlohmann::json per_ctx = nlohmann::json::object();
    for (const auto& [packed, table] : by_order_[static_cast<std::size_t>(k - 1)]) {
      std::string key;
      const auto* ids = reinterpret_cast<const int32_t*>(packed.data());
      const std::size_t n = packed.size() / sizeof(int32_t);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) key += ' ';
        key += vocab_->token(ids[i]);
      }
      nlohmann::json succ = nlohmann::json::object();
      for (const auto& [tok, cnt] : table.counts) succ[vocab_->token(tok)] = cnt;
      per_ctx[key] = std::move(succ);
    }
    counts[std::to_string(k)] = std::move(per_ctx);
  }
  j["counts"] = std::move(counts);
  return j.dump(2);
}

NGramModel NGramModel::from_json_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
      throw IoError("model file is missing an integer format_version field");
    }
    const int version = j["format_version"].get<int>();
    if (version != kFormatVersion) {
      throw IoError("unsupported model format_version " + std::to_string(version) +
                    " (expected " + std::to_string(kFormatVersion) + ")");
    }
    NGramModel m;
    m.order_ = j.at("order").get<int>();
    if (m.order_ < 1) throw IoError("model file has invalid order");
    m.smoothing_.additive = j.at("smoothing").at("additive").get<double>();
    m.lambda_ = j.at("smoothing").at("interpolation").get<std::vector<double>>();
    m.smoothing_.interpolation = m.lambda_;
    if (static_cast<int>(m.lambda_.size()) != m.order_) {
      throw IoError("model file interpolation weight count does not match order");
    }
    auto vocab = std::make_shared<Vocabulary>(
        Vocabulary::from_token_list(j.at("vocabulary").get<std::vector<std::string>>()));
    m.vocab_ = vocab;
    m.by_order_.resize(static_cast<std::size_t>(m.order_));
    const auto& counts = j.at("counts");
    for (int k = 1; k <= m.order_; ++k) {
      const auto& per_ctx = counts.at(std::to_string(k));
      auto& table_map = m.by_order_[static_cast<std::size_t>(k - 1)];
      for (auto it = per_ctx.begin(); it != per_ctx.end(); ++it) {
        std::vector<int32_t> ctx;
        for (const auto& tok : split_on_spaces(it.key())) {
          if (!vocab->contains(tok)) throw IoError("model file context token not in vocabulary");
          ctx.push_back(vocab->id_or_unk(tok));
        }
        if (static_cast<int>(ctx.size()) != k - 1) {
          throw IoError("model file context length does not match order " + std::to_string(k));
        }
        SuccessorTable table;
        for (auto st = it.value().begin(); st != it.value().end(); ++st) {
          if (!vocab->contains(st.key())) {
            throw IoError("model file successor token not in vocabulary");
          }
          const std::int64_t cnt = st.value().get<std::int64_t>();
          if (cnt <= 0) throw IoError("model file contains a non-positive count");
          table.counts[vocab->id_or_unk(st.key())] = cnt;
          table.total += cnt;
        }
        table_map[pack_context(ctx)] = std::move(table);
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("model file has unexpected structure: ") + e.what());
  }
}

void NGramModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << to_json_string() << '\n';
  if (!out) throw IoError("failed while writing model file: " + path);
}

NGramModel NGramModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

}  // namespace airdecode
