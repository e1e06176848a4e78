#include "airdecode/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <json.hpp>

namespace airdecode {

std::string MetricsReport::to_json_string() const {
  nlohmann::json j;
  j["accuracy"] = accuracy;
  j["accuracy_kind"] = accuracy_kind;
  j["mean_ppl"] = mean_ppl;
  j["dist1"] = dist1;
  j["dist2"] = dist2;
  j["dist3"] = dist3;
  j["n_texts"] = n_texts;
  return j.dump(2);
}

std::string MetricsReport::to_csv_string() const {
  std::ostringstream out;
  out << "acc,ppl,dist1,dist2,dist3,n_texts\n";
  out << accuracy << ',' << mean_ppl << ',' << dist1 << ',' << dist2 << ',' << dist3 << ','
      << n_texts << '\n';
  return out.str();
}

namespace {

std::string join_ngram(const std::vector<std::string>& text, std::size_t start, int n) {
  std::string key = text[start];
  for (int j = 1; j < n; ++j) {
    key += '\x1f';
    key += text[start + static_cast<std::size_t>(j)];
  }
  return key;
}

}  // namespace

double distinctness(const std::vector<std::vector<std::string>>& texts, int n) {
  if (n < 1) throw ConfigError("distinctness: n must be >= 1");
  if (texts.empty()) throw DataError("distinctness: no texts");
  double sum = 0.0;
  for (std::size_t t = 0; t < texts.size(); ++t) {
    const auto& text = texts[t];
    if (static_cast<int>(text.size()) < n) {
      throw DataError("distinctness: text " + std::to_string(t) + " has " +
                      std::to_string(text.size()) + " tokens, need >= " + std::to_string(n));
    }
    const std::size_t total = text.size() - static_cast<std::size_t>(n) + 1;
    std::unordered_set<std::string> unique;
    unique.reserve(total);
    for (std::size_t i = 0; i < total; ++i) unique.insert(join_ngram(text, i, n));
    sum += static_cast<double>(unique.size()) / static_cast<double>(total);
  }
  return sum / static_cast<double>(texts.size());
}

double distinctness_pooled(const std::vector<std::vector<std::string>>& texts, int n) {
  if (n < 1) throw ConfigError("distinctness: n must be >= 1");
  if (texts.empty()) throw DataError("distinctness: no texts");
  std::unordered_set<std::string> unique;
  std::size_t total = 0;
  for (std::size_t t = 0; t < texts.size(); ++t) {
    const auto& text = texts[t];
    if (static_cast<int>(text.size()) < n) {
      throw DataError("distinctness: text " + std::to_string(t) + " has " +
                      std::to_string(text.size()) + " tokens, need >= " + std::to_string(n));
    }
    const std::size_t count = text.size() - static_cast<std::size_t>(n) + 1;
    for (std::size_t i = 0; i < count; ++i) unique.insert(join_ngram(text, i, n));
    total += count;
  }
  return static_cast<double>(unique.size()) / static_cast<double>(total);
}

double corpus_perplexity(const std::vector<std::vector<int32_t>>& texts,
                         const NGramModel& eval_model) {
  if (texts.empty()) throw DataError("corpus_perplexity: no texts");
  double sum = 0.0;
  for (const auto& ids : texts) sum += eval_model.sequence_perplexity(ids);
  return sum / static_cast<double>(texts.size());
}

std::map<std::string, double> posterior_from_logliks(
    const std::vector<std::pair<std::string, double>>& logliks,
    const std::vector<double>& log_priors) {
  if (logliks.empty()) throw ConfigError("posterior_from_logliks: no classes");
  if (!log_priors.empty() && log_priors.size() != logliks.size()) {
    throw ConfigError("posterior_from_logliks: prior count mismatch");
  }
  std::vector<double> scores(logliks.size());
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logliks.size(); ++i) {
    scores[i] = logliks[i].second + (log_priors.empty() ? 0.0 : log_priors[i]);
    max_score = std::max(max_score, scores[i]);
  }
  double denom = 0.0;
  for (double s : scores) denom += std::exp(s - max_score);
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < logliks.size(); ++i) {
    out[logliks[i].first] = std::exp(scores[i] - max_score) / denom;
  }
  return out;
}

std::map<std::string, double> bayes_classify(const AttributeEnsemble& ensemble,
                                             std::span<const int32_t> ids) {
  std::vector<std::pair<std::string, double>> logliks;
  logliks.reserve(ensemble.num_classes());
  for (std::size_t c = 0; c < ensemble.num_classes(); ++c) {
    logliks.emplace_back(ensemble.labels()[c], ensemble.class_model(c).sequence_log_prob(ids));
  }
  return posterior_from_logliks(logliks, ensemble.log_priors());
}

std::map<std::string, double> bayes_classify(const AttributeEnsemble& ensemble,
                                             const std::string& text) {
  const auto ids = tokenize(text, ensemble.tokenizer(), ensemble.vocab());
  return bayes_classify(ensemble, ids);
}

std::string bayes_argmax(const AttributeEnsemble& ensemble, const std::string& text) {
  const auto posterior = bayes_classify(ensemble, text);
  std::string best;
  double best_p = -1.0;
  for (const auto& label : ensemble.labels()) {  // label order breaks exact ties
    const double p = posterior.at(label);
    if (p > best_p) {
      best_p = p;
      best = label;
    }
  }
  return best;
}

ClassifierHandle ClassifierHandle::bayes(const AttributeEnsemble& e) {
  ClassifierHandle h;
  h.kind = Kind::BayesInternal;
  h.ensemble = &e;
  return h;
}

ClassifierHandle ClassifierHandle::http(ExternalClassifierConfig config) {
  ClassifierHandle h;
  h.kind = Kind::ExternalHttp;
  h.external = std::move(config);
  return h;
}

double attribute_accuracy(const std::vector<ScoredText>& texts,
                          const ClassifierHandle& classifier) {
  return attribute_accuracy_detailed(texts, classifier).value;
}

}  // namespace airdecode
