#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "airdecode/decoding.hpp"
#include "airdecode/ngram.hpp"

namespace airdecode {

// Ids of the k most probable tokens (ties by ascending id), returned sorted
// ascending for set operations. Throws ConfigError when k is out of
// [1, size].
std::vector<int32_t> top_set(const std::vector<double>& values, int k);
std::vector<int32_t> top_set(const TokenDist& dist, int k);

// Top-k token sets of the three distributions in play at one decoding step:
// output (composed), raw (base LM) and attribute (posterior^omega,
// renormalized — the renormalized power has the same top-k set as the
// posterior itself for omega > 0).
struct TopSets {
  std::vector<int32_t> s_o, s_r, s_a;
  int k = 0;
};

struct OverlapRatios {
  double r_or = 0.0;   // |S_o n S_r| / |S_o|
  double r_oa = 0.0;   // |S_o n S_a| / |S_o|
  double r_ora = 0.0;  // |S_o n S_r n S_a| / |S_o|
};

OverlapRatios overlap_ratios(const TopSets& sets);

TopSets step_top_sets(const TraceStep& step, double omega, int k);

// Per-step overlap annotation attached to serialized traces.
struct StepOverlap {
  int k = 0;
  OverlapRatios ratios;
  TopSets sets;
};

std::vector<StepOverlap> trace_overlaps(const GenerationTrace& trace, int k);

// One sweep grid point: generation settings plus every automatic metric and
// the mean per-step overlap ratios. `error` is empty on success.
struct SweepRow {
  double omega = 0.0;
  CompositionMode mode = CompositionMode::Reconstructed;
  double accuracy = 0.0;
  double mean_ppl = 0.0;
  double dist1 = 0.0, dist2 = 0.0, dist3 = 0.0;
  double r_or = 0.0, r_oa = 0.0, r_ora = 0.0;
  std::string error;
};

struct SweepConfig {
  std::vector<double> omegas;
  std::vector<CompositionMode> modes;
  int samples_per_point = 100;
  int length = 50;
  int top_k = 200;  // 0 disables
  double top_p = 1.0;
  double temperature = 1.0;
  int overlap_k = 200;  // clamped to the vocabulary size
  std::uint64_t seed = 0;
  int jobs = 1;
};

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

// Generates samples_per_point sequences per (omega, mode) grid point and
// scores them. Sample seeds depend only on the sample index, so rows that
// share a seed are paired across grid points: at omega = 0 both modes
// produce identical rows. Grid points are independent; jobs > 1 runs them
// in parallel with results merged in grid order. A failing point is
// reported in its row's `error` and the sweep continues.
std::vector<SweepRow> omega_sweep(const AttributeEnsemble& ensemble,
                                  const std::vector<std::string>& prompts,
                                  const std::vector<std::string>& targets,
                                  const NGramModel& eval_model, const SweepConfig& config,
                                  const SweepProgress& progress = nullptr);

struct VolumeSweepRow {
  int volume = 0;
  SweepRow row;
};

// Subsamples each class corpus to `volume` documents (seeded), retrains the
// ensemble, and runs omega_sweep per volume. volume == corpus size
// reproduces the plain sweep.
std::vector<VolumeSweepRow> data_volume_sweep(
    const std::vector<AttributeEnsemble::LabeledCorpus>& labeled,
    const std::vector<std::string>& base_lines, const std::vector<int>& volumes, int order,
    const SmoothingConfig& smoothing, const TokenizerConfig& tokenizer,
    const std::vector<std::string>& prompts, const std::vector<std::string>& targets,
    const NGramModel& eval_model, const SweepConfig& config,
    const SweepProgress& progress = nullptr);

// CSV with header omega,mode,acc,ppl,dist1,dist2,dist3,r_or,r_oa,r_ora.
std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);
std::string sweep_rows_to_jsonl(const std::vector<SweepRow>& rows);
// Gnuplot-friendly: one block per mode separated by blank lines.
std::string sweep_rows_to_dat(const std::vector<SweepRow>& rows);

std::string volume_rows_to_csv(const std::vector<VolumeSweepRow>& rows);
std::string volume_rows_to_jsonl(const std::vector<VolumeSweepRow>& rows);

}  // namespace airdecode
