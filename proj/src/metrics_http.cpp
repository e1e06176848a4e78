#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "airdecode/metrics.hpp"

namespace airdecode {

namespace {

struct ParsedUrl {
  std::string host_port;  // scheme://host:port
  std::string path;
};

ParsedUrl parse_endpoint(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("external classifier endpoint must include a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

double extract_score(const nlohmann::json& body, const std::string& field_path) {
  const nlohmann::json* node = &body;
  std::size_t start = 0;
  while (start <= field_path.size()) {
    const auto dot = field_path.find('.', start);
    const std::string key =
        field_path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(key)) {
      throw DataError("classifier response is missing field '" + field_path + "'");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (!node->is_number()) {
    throw DataError("classifier response field '" + field_path + "' is not numeric");
  }
  return node->get<double>();
}

double score_once(const ParsedUrl& url, const ExternalClassifierConfig& config,
                  const std::string& text) {
  httplib::Client client(url.host_port);
  const auto timeout_ms = static_cast<long>(config.timeout_s * 1000.0);
  client.set_connection_timeout(0, timeout_ms * 1000);
  client.set_read_timeout(0, timeout_ms * 1000);
  client.set_write_timeout(0, timeout_ms * 1000);

  nlohmann::json request;
  request["text"] = text;
  auto res = client.Post(url.path, request.dump(), "application/json");
  if (!res) {
    throw DataError("classifier request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw DataError("classifier returned HTTP " + std::to_string(res->status));
  }
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("classifier response is not JSON: ") + e.what());
  }
  return extract_score(body, config.score_field);
}

}  // namespace

double external_score(const ExternalClassifierConfig& config, const std::string& text) {
  const ParsedUrl url = parse_endpoint(config.endpoint);
  std::string last_error;
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::duration<double>(config.backoff_s * attempt));
    }
    try {
      return score_once(url, config, text);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw DataError(last_error);
}

AccuracyOutcome attribute_accuracy_detailed(const std::vector<ScoredText>& texts,
                                            const ClassifierHandle& classifier) {
  if (texts.empty()) throw DataError("attribute_accuracy: no texts");

  AccuracyOutcome outcome;
  if (classifier.kind == ClassifierHandle::Kind::BayesInternal) {
    if (!classifier.ensemble) throw ConfigError("attribute_accuracy: ensemble not set");
    std::size_t correct = 0;
    for (const auto& st : texts) {
      if (bayes_argmax(*classifier.ensemble, st.text) == st.target) ++correct;
    }
    outcome.value = static_cast<double>(correct) / static_cast<double>(texts.size());
    return outcome;
  }

  const auto& config = classifier.external;
  std::vector<double> scores(texts.size(), std::nan(""));
  std::vector<std::string> errors(texts.size());
  std::atomic<std::size_t> next{0};
  const std::size_t workers =
      std::min<std::size_t>(std::max(1, config.max_in_flight), texts.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < texts.size(); i = next.fetch_add(1)) {
        try {
          scores[i] = external_score(config, texts[i].text);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (!errors[i].empty()) {
      ++outcome.n_failed;
      outcome.error_records.push_back("text " + std::to_string(i) + ": " + errors[i]);
    }
  }
  const double fail_rate =
      static_cast<double>(outcome.n_failed) / static_cast<double>(texts.size());
  if (fail_rate > 0.10) {
    throw DataError("attribute_accuracy: " + std::to_string(outcome.n_failed) + " of " +
                    std::to_string(texts.size()) + " classifier calls failed (" +
                    (outcome.error_records.empty() ? "" : outcome.error_records.front()) + ")");
  }

  std::size_t scored = 0;
  double agg = 0.0;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (!errors[i].empty()) continue;
    ++scored;
    if (config.positive_label.empty()) {
      agg += scores[i];  // mean-score mode
    } else {
      const bool predicted_positive = scores[i] >= config.threshold;
      const bool target_positive = texts[i].target == config.positive_label;
      if (predicted_positive == target_positive) agg += 1.0;
    }
  }
  outcome.value = scored == 0 ? 0.0 : agg / static_cast<double>(scored);
  return outcome;
}

}  // namespace airdecode
