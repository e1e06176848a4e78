#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airdecode/dist.hpp"
#include "airdecode/ensemble.hpp"
#include "airdecode/sampling.hpp"

namespace airdecode {

// Raw: the attribute posterior is formed directly from the per-class
// probabilities. Reconstructed: each class distribution is first mapped
// through w = -1/ln(p), which compresses the spread between attribute and
// non-attribute tokens while preserving their ranking.
enum class CompositionMode { Reconstructed, Raw };

std::string to_string(CompositionMode mode);
CompositionMode composition_mode_from_string(const std::string& s);

// Probabilities are clamped to this range before any logarithm:
// the lower bound keeps ln finite, the upper bound keeps -1/ln(p) finite.
constexpr double kProbClampLo = 1e-300;
constexpr double kProbClampHi = 1.0 - 1e-9;

// Smallest weight reconstruct() can emit for a positive probability;
// the substitution value when a zero reconstructed weight reaches the
// delta update.
double reconstruct_floor();

// w_i = -1/ln(clamp(p_i)). Exactly-zero entries map to 0 (the p -> 0 limit).
// Strictly increasing in p, so the argsort of the input is preserved.
WeightVec reconstruct(const TokenDist& dist);

// Per-sequence decoding state: the rolling context plus one accumulated
// log-weight-product per class. At step 0 every accumulator is 0,
// the log of the empty product.
struct DecodeState {
  std::vector<int32_t> context;
  std::vector<double> log_delta;  // aligned with the ensemble's label order
  int step = 0;
  std::uint64_t zero_weight_substitutions = 0;

  static DecodeState initial(std::vector<int32_t> prompt, std::size_t num_classes);
};

// Posterior probability of the target class for every candidate token:
//
//   posterior_i = N_t,i / sum_l N_l,i,   N_l,i = prior_l * delta_l * w_l,i
//
// evaluated in log space with log-sum-exp stabilization. Tokens where every
// class has zero weight get the tie value 1/num_classes. log_priors may be
// empty (uniform priors cancel in the ratio).
std::vector<double> attribute_posterior(const std::vector<WeightVec>& weights,
                                        const DecodeState& state, std::size_t target,
                                        const std::vector<double>& log_priors = {});

// Advances the recurrence after `sampled` was drawn: appends the token to
// the context and adds ln(w_l[sampled]) to each class accumulator. A zero
// weight is substituted with `zero_weight_floor` before the logarithm and
// counted on the state.
DecodeState update_delta(DecodeState state, int32_t sampled,
                         const std::vector<WeightVec>& weights,
                         double zero_weight_floor = kProbClampLo);

// output_i proportional to base_i * posterior_i^omega, renormalized; omega == 0
// returns the base distribution unchanged. Computed in log space. Throws
// NumericsError when the product vanishes everywhere.
TokenDist compose(const TokenDist& base, const std::vector<double>& posterior, double omega);

struct GenerateOptions {
  double omega = 0.0;
  int top_k = 200;  // 0 disables the filter
  double top_p = 1.0;
  double temperature = 1.0;
  int length = 50;
  CompositionMode mode = CompositionMode::Reconstructed;
  bool eos_terminated = false;  // default: fixed length, EOS masked out
  std::uint64_t seed = 0;

  static GenerateOptions from_preset(const AttributePreset& p,
                                     CompositionMode mode = CompositionMode::Reconstructed,
                                     std::uint64_t seed = 0);
};

// Everything observed at one decoding step. `output` is the composed
// distribution before sampling filters; `log_delta` is the accumulator
// state after consuming the sampled token.
struct TraceStep {
  int step = 0;
  std::size_t context_len = 0;
  TokenDist base;
  std::vector<TokenDist> class_dists;
  std::vector<double> posterior;
  TokenDist output;
  int32_t sampled = -1;
  std::vector<double> log_delta;
};

struct GenerationTrace {
  std::vector<std::string> labels;
  std::string target;
  CompositionMode mode = CompositionMode::Reconstructed;
  double omega = 0.0;
  std::uint64_t seed = 0;
  std::vector<int32_t> prompt_ids;
  std::vector<int32_t> generated;
  std::vector<TraceStep> steps;
  std::uint64_t zero_weight_substitutions = 0;

  std::string text(const Vocabulary& vocab) const;
};

// Runs the full decoding loop for one sequence. Deterministic: identical
// inputs and seed produce a bit-identical trace.
GenerationTrace generate(const AttributeEnsemble& ensemble, const std::string& prompt,
                         const std::string& target, const GenerateOptions& options);

}  // namespace airdecode
