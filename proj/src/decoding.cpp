#include "airdecode/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace airdecode {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string to_string(CompositionMode mode) {
  return mode == CompositionMode::Reconstructed ? "reconstructed" : "raw";
}

CompositionMode composition_mode_from_string(const std::string& s) {
  if (s == "reconstructed") return CompositionMode::Reconstructed;
  if (s == "raw") return CompositionMode::Raw;
  throw ConfigError("unknown composition mode '" + s + "' (expected raw|reconstructed)");
}

double reconstruct_floor() {
  static const double floor = -1.0 / std::log(kProbClampLo);
  return floor;
}

WeightVec reconstruct(const TokenDist& dist) {
  std::vector<double> w(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double p = dist[i];
    if (p == 0.0) {
      w[i] = 0.0;  // lim p->0 of -1/ln(p)
    } else {
      const double clamped = std::clamp(p, kProbClampLo, kProbClampHi);
      w[i] = -1.0 / std::log(clamped);
    }
  }
  return WeightVec(std::move(w));
}

DecodeState DecodeState::initial(std::vector<int32_t> prompt, std::size_t num_classes) {
  DecodeState s;
  s.context = std::move(prompt);
  s.log_delta.assign(num_classes, 0.0);
  return s;
}

std::vector<double> attribute_posterior(const std::vector<WeightVec>& weights,
                                        const DecodeState& state, std::size_t target,
                                        const std::vector<double>& log_priors) {
  const std::size_t num_classes = weights.size();
  if (num_classes < 2) throw ConfigError("attribute_posterior: need at least 2 classes");
  if (target >= num_classes) throw ConfigError("attribute_posterior: target out of range");
  if (state.log_delta.size() != num_classes) {
    throw ConfigError("attribute_posterior: state has wrong class count");
  }
  if (!log_priors.empty() && log_priors.size() != num_classes) {
    throw ConfigError("attribute_posterior: log_priors has wrong class count");
  }
  const std::size_t v = weights[0].size();
  for (const auto& w : weights) {
    if (w.size() != v) throw ConfigError("attribute_posterior: weight vectors not index-aligned");
  }

  std::vector<double> offset(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    offset[c] = state.log_delta[c] + (log_priors.empty() ? 0.0 : log_priors[c]);
  }

  std::vector<double> posterior(v);
  std::vector<double> score(num_classes);
  const double tie = 1.0 / static_cast<double>(num_classes);
  for (std::size_t i = 0; i < v; ++i) {
    double max_score = kNegInf;
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double w = weights[c][i];
      score[c] = w == 0.0 ? kNegInf : offset[c] + std::log(w);
      max_score = std::max(max_score, score[c]);
    }
    if (max_score == kNegInf) {
      posterior[i] = tie;  // every class assigns zero weight to this token
      continue;
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) denom += std::exp(score[c] - max_score);
    posterior[i] = std::exp(score[target] - max_score) / denom;
  }
  return posterior;
}

DecodeState update_delta(DecodeState state, int32_t sampled,
                         const std::vector<WeightVec>& weights, double zero_weight_floor) {
  if (weights.size() != state.log_delta.size()) {
    throw ConfigError("update_delta: weight count does not match state");
  }
  const auto idx = static_cast<std::size_t>(sampled);
  for (std::size_t c = 0; c < weights.size(); ++c) {
    if (idx >= weights[c].size()) throw ConfigError("update_delta: sampled id out of range");
    double w = weights[c][idx];
    if (w == 0.0) {
      w = zero_weight_floor;
      ++state.zero_weight_substitutions;
    }
    state.log_delta[c] += std::log(w);
  }
  state.context.push_back(sampled);
  ++state.step;
  return state;
}

TokenDist compose(const TokenDist& base, const std::vector<double>& posterior, double omega) {
  if (omega < 0.0) throw ConfigError("compose: omega must be >= 0");
  if (posterior.size() != base.size()) {
    throw ConfigError("compose: posterior and base are not index-aligned");
  }
  if (omega == 0.0) return base;  // posterior^0 is identically 1

  std::vector<double> log_out(base.size());
  double max_log = kNegInf;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double lb = base[i] == 0.0 ? kNegInf : std::log(base[i]);
    const double lp = posterior[i] == 0.0 ? kNegInf : std::log(posterior[i]);
    log_out[i] = lb + omega * lp;
    max_log = std::max(max_log, log_out[i]);
  }
  if (max_log == kNegInf) {
    throw NumericsError("compose: degenerate composition, product vanishes everywhere");
  }
  for (double& x : log_out) x = std::exp(x - max_log);
  return TokenDist::normalized(std::move(log_out));
}

GenerateOptions GenerateOptions::from_preset(const AttributePreset& p, CompositionMode mode,
                                             std::uint64_t seed) {
  GenerateOptions o;
  o.omega = p.omega;
  o.top_k = p.top_k;
  o.top_p = p.top_p;
  o.length = p.length;
  o.mode = mode;
  o.seed = seed;
  return o;
}

std::string GenerationTrace::text(const Vocabulary& vocab) const {
  return vocab.decode(generated);
}

GenerationTrace generate(const AttributeEnsemble& ensemble, const std::string& prompt,
                         const std::string& target, const GenerateOptions& options) {
  if (options.omega < 0.0) throw ConfigError("generate: omega must be >= 0");
  if (options.length < 1) throw ConfigError("generate: length must be >= 1");
  const std::size_t target_idx = ensemble.label_index(target);
  const std::size_t num_classes = ensemble.num_classes();
  const double floor =
      options.mode == CompositionMode::Reconstructed ? reconstruct_floor() : kProbClampLo;

  GenerationTrace trace;
  trace.labels = ensemble.labels();
  trace.target = target;
  trace.mode = options.mode;
  trace.omega = options.omega;
  trace.seed = options.seed;
  trace.prompt_ids = tokenize(prompt, ensemble.tokenizer(), ensemble.vocab());

  DecodeState state = DecodeState::initial(trace.prompt_ids, num_classes);
  Rng rng(options.seed);

  SamplerConfig sampler;
  if (options.top_k > 0) sampler.top_k = options.top_k;
  sampler.top_p = options.top_p;
  sampler.temperature = options.temperature;

  for (int step = 0; step < options.length; ++step) {
    const std::size_t context_len = state.context.size();
    TokenDist base = ensemble.base().next_token_distribution(state.context);
    std::vector<TokenDist> class_dists = ensemble.class_distributions(state.context);

    std::vector<WeightVec> weights;
    weights.reserve(num_classes);
    for (const auto& d : class_dists) {
      weights.push_back(options.mode == CompositionMode::Reconstructed
                            ? reconstruct(d)
                            : WeightVec(d.probs()));
    }

    std::vector<double> posterior =
        attribute_posterior(weights, state, target_idx, ensemble.log_priors());
    TokenDist output = compose(base, posterior, options.omega);

    // Sentinels never appear in generated text: BOS is context-only, and in
    // fixed-length mode EOS is removed so the sequence reaches its length.
    std::vector<double> maskable = output.probs();
    maskable[static_cast<std::size_t>(Vocabulary::kBosId)] = 0.0;
    if (!options.eos_terminated) maskable[static_cast<std::size_t>(Vocabulary::kEosId)] = 0.0;
    TokenDist to_sample = apply_sampler(TokenDist::normalized(std::move(maskable)), sampler);

    const int32_t sampled = sample(to_sample, rng);
    state = update_delta(std::move(state), sampled, weights, floor);

    TraceStep ts;
    ts.step = step;
    ts.context_len = context_len;
    ts.base = std::move(base);
    ts.class_dists = std::move(class_dists);
    ts.posterior = std::move(posterior);
    ts.output = std::move(output);
    ts.sampled = sampled;
    ts.log_delta = state.log_delta;
    trace.steps.push_back(std::move(ts));
    trace.generated.push_back(sampled);

    if (options.eos_terminated && sampled == Vocabulary::kEosId) break;
  }
  trace.zero_weight_substitutions = state.zero_weight_substitutions;
  return trace;
}

}  // namespace airdecode
