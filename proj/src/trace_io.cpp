#include "airdecode/trace_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace airdecode {

namespace {

nlohmann::json entries_json(const std::vector<double>& values, const Vocabulary& vocab,
                            int top_n) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [id, p] : top_entries(values, static_cast<std::size_t>(top_n))) {
    arr.push_back({vocab.token(id), p});
  }
  return arr;
}

}  // namespace

void write_trace_jsonl(const GenerationTrace& trace, const Vocabulary& vocab,
                       std::ostream& out, int top_n, const std::vector<StepOverlap>* overlaps) {
  if (overlaps && overlaps->size() != trace.steps.size()) {
    throw ConfigError("write_trace_jsonl: overlap annotation count mismatch");
  }
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const TraceStep& step = trace.steps[s];
    nlohmann::json rec;
    rec["step"] = step.step;
    rec["context_len"] = step.context_len;

    nlohmann::json tops;
    tops["base"] = entries_json(step.base.probs(), vocab, top_n);
    for (std::size_t c = 0; c < trace.labels.size(); ++c) {
      tops["class_" + trace.labels[c]] = entries_json(step.class_dists[c].probs(), vocab, top_n);
    }
    tops["posterior"] = entries_json(step.posterior, vocab, top_n);
    tops["output"] = entries_json(step.output.probs(), vocab, top_n);
    rec["top_tokens"] = std::move(tops);

    rec["sampled_token"] = {{"id", step.sampled}, {"token", vocab.token(step.sampled)}};
    nlohmann::json deltas;
    for (std::size_t c = 0; c < trace.labels.size(); ++c) {
      deltas[trace.labels[c]] = step.log_delta[c];
    }
    rec["log_delta"] = std::move(deltas);

    if (overlaps) {
      const StepOverlap& ov = (*overlaps)[s];
      rec["overlap"] = {{"k", ov.k},
                        {"r_or", ov.ratios.r_or},
                        {"r_oa", ov.ratios.r_oa},
                        {"r_ora", ov.ratios.r_ora},
                        {"sets", {{"o", ov.sets.s_o}, {"r", ov.sets.s_r}, {"a", ov.sets.s_a}}}};
    }
    out << rec.dump() << '\n';
  }
}

std::vector<TraceRecord> read_trace_jsonl(std::istream& in) {
  std::vector<TraceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError("trace line " + std::to_string(line_no) + " is not valid JSON: " + e.what());
    }
    try {
      TraceRecord r;
      r.step = rec.at("step").get<int>();
      r.context_len = rec.at("context_len").get<std::size_t>();
      for (auto it = rec.at("top_tokens").begin(); it != rec.at("top_tokens").end(); ++it) {
        std::vector<std::pair<std::string, double>> entries;
        for (const auto& pair : it.value()) {
          entries.emplace_back(pair.at(0).get<std::string>(), pair.at(1).get<double>());
        }
        r.top_tokens[it.key()] = std::move(entries);
      }
      r.sampled_id = rec.at("sampled_token").at("id").get<int32_t>();
      r.sampled_token = rec.at("sampled_token").at("token").get<std::string>();
      for (auto it = rec.at("log_delta").begin(); it != rec.at("log_delta").end(); ++it) {
        r.log_delta[it.key()] = it.value().get<double>();
      }
      if (rec.contains("overlap")) {
        const auto& ov = rec["overlap"];
        StepOverlap so;
        so.k = ov.at("k").get<int>();
        so.ratios.r_or = ov.at("r_or").get<double>();
        so.ratios.r_oa = ov.at("r_oa").get<double>();
        so.ratios.r_ora = ov.at("r_ora").get<double>();
        so.sets.k = so.k;
        so.sets.s_o = ov.at("sets").at("o").get<std::vector<int32_t>>();
        so.sets.s_r = ov.at("sets").at("r").get<std::vector<int32_t>>();
        so.sets.s_a = ov.at("sets").at("a").get<std::vector<int32_t>>();
        r.overlap = std::move(so);
      }
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("trace line " + std::to_string(line_no) +
                    " has unexpected structure: " + e.what());
    }
  }
  return records;
}

std::vector<TraceRecord> read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace file: " + path);
  return read_trace_jsonl(in);
}

}  // namespace airdecode
