#include "airdecode/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "airdecode/metrics.hpp"

namespace airdecode {

std::vector<int32_t> top_set(const std::vector<double>& values, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > values.size()) {
    throw ConfigError("top_set: k out of range [1, " + std::to_string(values.size()) +
                      "], got " + std::to_string(k));
  }
  auto entries = top_entries(values, static_cast<std::size_t>(k));
  std::vector<int32_t> ids;
  ids.reserve(entries.size());
  for (const auto& [id, _] : entries) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<int32_t> top_set(const TokenDist& dist, int k) { return top_set(dist.probs(), k); }

namespace {

std::size_t intersection_size(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::vector<int32_t> intersection(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
  std::vector<int32_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

OverlapRatios overlap_ratios(const TopSets& sets) {
  if (sets.s_o.empty()) throw DataError("overlap_ratios: output set is empty");
  const double so = static_cast<double>(sets.s_o.size());
  OverlapRatios r;
  r.r_or = static_cast<double>(intersection_size(sets.s_o, sets.s_r)) / so;
  r.r_oa = static_cast<double>(intersection_size(sets.s_o, sets.s_a)) / so;
  r.r_ora =
      static_cast<double>(intersection_size(intersection(sets.s_o, sets.s_r), sets.s_a)) / so;
  return r;
}

TopSets step_top_sets(const TraceStep& step, double omega, int k) {
  TopSets sets;
  sets.k = k;
  sets.s_o = top_set(step.output, k);
  sets.s_r = top_set(step.base, k);
  if (omega > 0.0) {
    // posterior^omega renormalized shares the posterior's top-k set.
    sets.s_a = top_set(step.posterior, k);
  } else {
    std::vector<double> flat(step.posterior.size(), 1.0);
    sets.s_a = top_set(flat, k);
  }
  return sets;
}

std::vector<StepOverlap> trace_overlaps(const GenerationTrace& trace, int k) {
  std::vector<StepOverlap> out;
  out.reserve(trace.steps.size());
  for (const auto& step : trace.steps) {
    StepOverlap so;
    so.k = k;
    so.sets = step_top_sets(step, trace.omega, k);
    so.ratios = overlap_ratios(so.sets);
    out.push_back(std::move(so));
  }
  return out;
}

namespace {

SweepRow run_grid_point(const AttributeEnsemble& ensemble,
                        const std::vector<std::string>& prompts,
                        const std::vector<std::string>& targets, const NGramModel& eval_model,
                        const SweepConfig& config, double omega, CompositionMode mode) {
  SweepRow row;
  row.omega = omega;
  row.mode = mode;

  const int overlap_k =
      std::min(config.overlap_k, static_cast<int>(ensemble.vocab().size()));

  GenerateOptions opts;
  opts.omega = omega;
  opts.top_k = config.top_k;
  opts.top_p = config.top_p;
  opts.temperature = config.temperature;
  opts.length = config.length;
  opts.mode = mode;

  std::vector<std::vector<int32_t>> generated_ids;
  std::vector<std::vector<std::string>> generated_tokens;
  std::size_t correct = 0;
  double sum_or = 0.0, sum_oa = 0.0, sum_ora = 0.0;

  for (int s = 0; s < config.samples_per_point; ++s) {
    // Seeds depend only on the sample index so grid points are paired.
    opts.seed = derive_seed(config.seed, static_cast<std::uint64_t>(s));
    const auto& prompt = prompts[static_cast<std::size_t>(s) % prompts.size()];
    const auto& target = targets[static_cast<std::size_t>(s) % targets.size()];

    GenerationTrace trace = generate(ensemble, prompt, target, opts);

    double t_or = 0.0, t_oa = 0.0, t_ora = 0.0;
    for (const auto& step : trace.steps) {
      const OverlapRatios r = overlap_ratios(step_top_sets(step, omega, overlap_k));
      t_or += r.r_or;
      t_oa += r.r_oa;
      t_ora += r.r_ora;
    }
    const double n_steps = static_cast<double>(trace.steps.size());
    sum_or += t_or / n_steps;
    sum_oa += t_oa / n_steps;
    sum_ora += t_ora / n_steps;

    if (bayes_argmax(ensemble, trace.text(ensemble.vocab())) == target) ++correct;

    std::vector<std::string> tokens;
    tokens.reserve(trace.generated.size());
    for (int32_t id : trace.generated) tokens.push_back(ensemble.vocab().token(id));
    generated_tokens.push_back(std::move(tokens));
    generated_ids.push_back(trace.generated);
  }

  const double n = static_cast<double>(config.samples_per_point);
  row.accuracy = static_cast<double>(correct) / n;
  row.mean_ppl = corpus_perplexity(generated_ids, eval_model);
  row.dist1 = distinctness(generated_tokens, 1);
  row.dist2 = distinctness(generated_tokens, 2);
  row.dist3 = distinctness(generated_tokens, 3);
  row.r_or = sum_or / n;
  row.r_oa = sum_oa / n;
  row.r_ora = sum_ora / n;
  return row;
}

}  // namespace

std::vector<SweepRow> omega_sweep(const AttributeEnsemble& ensemble,
                                  const std::vector<std::string>& prompts,
                                  const std::vector<std::string>& targets,
                                  const NGramModel& eval_model, const SweepConfig& config,
                                  const SweepProgress& progress) {
  if (config.omegas.empty() || config.modes.empty()) {
    throw ConfigError("omega_sweep: empty sweep grid");
  }
  if (prompts.empty()) throw ConfigError("omega_sweep: no prompts");
  if (targets.empty()) throw ConfigError("omega_sweep: no targets");
  if (config.samples_per_point < 1) throw ConfigError("omega_sweep: samples_per_point < 1");

  struct Point {
    double omega;
    CompositionMode mode;
  };
  std::vector<Point> grid;
  for (double omega : config.omegas) {
    for (CompositionMode mode : config.modes) grid.push_back({omega, mode});
  }

  std::vector<SweepRow> rows(grid.size());
  std::mutex progress_mutex;
  std::size_t done = 0;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
      try {
        rows[i] = run_grid_point(ensemble, prompts, targets, eval_model, config, grid[i].omega,
                                 grid[i].mode);
      } catch (const std::exception& e) {
        rows[i].omega = grid[i].omega;
        rows[i].mode = grid[i].mode;
        rows[i].accuracy = rows[i].mean_ppl = std::nan("");
        rows[i].dist1 = rows[i].dist2 = rows[i].dist3 = std::nan("");
        rows[i].r_or = rows[i].r_oa = rows[i].r_ora = std::nan("");
        rows[i].error = e.what();
      }
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(++done, grid.size());
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1, config.jobs), grid.size());
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

std::vector<VolumeSweepRow> data_volume_sweep(
    const std::vector<AttributeEnsemble::LabeledCorpus>& labeled,
    const std::vector<std::string>& base_lines, const std::vector<int>& volumes, int order,
    const SmoothingConfig& smoothing, const TokenizerConfig& tokenizer,
    const std::vector<std::string>& prompts, const std::vector<std::string>& targets,
    const NGramModel& eval_model, const SweepConfig& config, const SweepProgress& progress) {
  if (volumes.empty()) throw ConfigError("data_volume_sweep: no volumes");
  for (int v : volumes) {
    for (const auto& lc : labeled) {
      if (v < 1 || static_cast<std::size_t>(v) > lc.lines.size()) {
        throw ConfigError("data_volume_sweep: volume " + std::to_string(v) +
                          " exceeds corpus size for class '" + lc.label + "' (" +
                          std::to_string(lc.lines.size()) + ")");
      }
    }
  }

  std::vector<VolumeSweepRow> out;
  for (std::size_t vi = 0; vi < volumes.size(); ++vi) {
    const int volume = volumes[vi];
    std::vector<AttributeEnsemble::LabeledCorpus> sub;
    sub.reserve(labeled.size());
    for (std::size_t c = 0; c < labeled.size(); ++c) {
      // Seeded subsample: shuffle a copy, take the first `volume` docs.
      std::vector<std::string> lines = labeled[c].lines;
      Rng rng(derive_seed(config.seed, 0x766f6cULL + static_cast<std::uint64_t>(volume),
                          static_cast<std::uint64_t>(c)));
      for (std::size_t i = lines.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(lines[i - 1], lines[j]);
      }
      lines.resize(static_cast<std::size_t>(volume));
      sub.push_back({labeled[c].label, std::move(lines)});
    }
    AttributeEnsemble ensemble =
        AttributeEnsemble::build(sub, base_lines, order, smoothing, tokenizer);
    auto rows = omega_sweep(ensemble, prompts, targets, eval_model, config, progress);
    for (auto& row : rows) out.push_back({volume, std::move(row)});
  }
  return out;
}

namespace {

void append_row_csv(std::ostringstream& out, const SweepRow& row) {
  out << row.omega << ',' << to_string(row.mode) << ',' << row.accuracy << ',' << row.mean_ppl
      << ',' << row.dist1 << ',' << row.dist2 << ',' << row.dist3 << ',' << row.r_or << ','
      << row.r_oa << ',' << row.r_ora << '\n';
}

nlohmann::json row_to_json(const SweepRow& row) {
  nlohmann::json j;
  j["omega"] = row.omega;
  j["mode"] = to_string(row.mode);
  j["acc"] = row.accuracy;
  j["ppl"] = row.mean_ppl;
  j["dist1"] = row.dist1;
  j["dist2"] = row.dist2;
  j["dist3"] = row.dist3;
  j["r_or"] = row.r_or;
  j["r_oa"] = row.r_oa;
  j["r_ora"] = row.r_ora;
  if (!row.error.empty()) j["error"] = row.error;
  return j;
}

}  // namespace

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "omega,mode,acc,ppl,dist1,dist2,dist3,r_or,r_oa,r_ora\n";
  for (const auto& row : rows) append_row_csv(out, row);
  return out.str();
}

std::string sweep_rows_to_jsonl(const std::vector<SweepRow>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row_to_json(row).dump();
    out += '\n';
  }
  return out;
}

std::string sweep_rows_to_dat(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "# omega acc ppl dist1 dist2 dist3 r_or r_oa r_ora\n";
  bool first = true;
  for (CompositionMode mode : {CompositionMode::Raw, CompositionMode::Reconstructed}) {
    bool any = false;
    for (const auto& row : rows) {
      if (row.mode != mode) continue;
      if (!any) {
        if (!first) out << "\n\n";
        out << "# mode=" << to_string(mode) << '\n';
        any = true;
        first = false;
      }
      out << row.omega << ' ' << row.accuracy << ' ' << row.mean_ppl << ' ' << row.dist1 << ' '
          << row.dist2 << ' ' << row.dist3 << ' ' << row.r_or << ' ' << row.r_oa << ' '
          << row.r_ora << '\n';
    }
  }
  return out.str();
}

std::string volume_rows_to_csv(const std::vector<VolumeSweepRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "volume,omega,mode,acc,ppl,dist1,dist2,dist3,r_or,r_oa,r_ora\n";
  for (const auto& vr : rows) {
    out << vr.volume << ',';
    append_row_csv(out, vr.row);
  }
  return out.str();
}

std::string volume_rows_to_jsonl(const std::vector<VolumeSweepRow>& rows) {
  std::string out;
  for (const auto& vr : rows) {
    nlohmann::json j = row_to_json(vr.row);
    j["volume"] = vr.volume;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace airdecode
