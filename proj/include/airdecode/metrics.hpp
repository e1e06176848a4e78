#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "airdecode/ensemble.hpp"
#include "airdecode/ngram.hpp"

namespace airdecode {

struct MetricsReport {
  double accuracy = 0.0;  // mean score for score-style external classifiers
  double mean_ppl = 0.0;
  double dist1 = 0.0, dist2 = 0.0, dist3 = 0.0;
  int n_texts = 0;
  std::string accuracy_kind = "bayes-argmax";

  std::string to_json_string() const;
  std::string to_csv_string() const;
};

// Mean over texts of |unique n-grams| / |total n-grams|. Throws DataError
// naming the first text shorter than n.
double distinctness(const std::vector<std::vector<std::string>>& texts, int n);

// Corpus-pooled variant: unique and total n-grams counted over all texts.
double distinctness_pooled(const std::vector<std::vector<std::string>>& texts, int n);

// Mean of per-text sequence perplexities under the evaluation model. The
// evaluation model must be trained on data disjoint from whatever produced
// the texts; this is the caller's responsibility.
double corpus_perplexity(const std::vector<std::vector<int32_t>>& texts,
                         const NGramModel& eval_model);

// Softmax of log-prior + log-likelihood per label.
std::map<std::string, double> posterior_from_logliks(
    const std::vector<std::pair<std::string, double>>& logliks,
    const std::vector<double>& log_priors = {});

// Sequence-level Bayes posterior over the ensemble's classes.
std::map<std::string, double> bayes_classify(const AttributeEnsemble& ensemble,
                                             std::span<const int32_t> ids);
std::map<std::string, double> bayes_classify(const AttributeEnsemble& ensemble,
                                             const std::string& text);

std::string bayes_argmax(const AttributeEnsemble& ensemble, const std::string& text);

struct ExternalClassifierConfig {
  std::string endpoint;        // e.g. http://127.0.0.1:8080/score
  double timeout_s = 5.0;
  std::string score_field = "score";  // dot-separated path into the response JSON
  std::string positive_label;  // when set, score >= threshold predicts this label
  double threshold = 0.5;
  int retries = 2;
  double backoff_s = 0.25;
  int max_in_flight = 4;
};

// Exactly one of the two kinds is active.
struct ClassifierHandle {
  enum class Kind { BayesInternal, ExternalHttp };
  Kind kind = Kind::BayesInternal;
  const AttributeEnsemble* ensemble = nullptr;
  ExternalClassifierConfig external;

  static ClassifierHandle bayes(const AttributeEnsemble& e);
  static ClassifierHandle http(ExternalClassifierConfig config);
};

struct ScoredText {
  std::string text;
  std::string target;
};

struct AccuracyOutcome {
  double value = 0.0;
  std::size_t n_failed = 0;
  std::vector<std::string> error_records;  // one entry per failed text
};

// Fraction of texts whose predicted label matches its target. External
// classifiers are queried over HTTP (bounded concurrency, per-call retries);
// individual failures are recorded and the aggregate throws DataError when
// more than 10% of calls fail. With an external handle and no
// positive_label the mean score is returned instead (toxicity-style tasks).
AccuracyOutcome attribute_accuracy_detailed(const std::vector<ScoredText>& texts,
                                            const ClassifierHandle& classifier);
double attribute_accuracy(const std::vector<ScoredText>& texts,
                          const ClassifierHandle& classifier);

// Single external-scorer call; exposed for the eval command.
double external_score(const ExternalClassifierConfig& config, const std::string& text);

}  // namespace airdecode
