#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airdecode/diagnostics.hpp"

namespace airdecode {

// JSON Lines, one record per decoding step:
//   {step, context_len, top_tokens: {base, class_<label>..., posterior,
//    output}, sampled_token, log_delta}
// top_tokens lists are [token, prob] pairs truncated to the `top_n` most
// probable entries. When overlaps are supplied each record also carries
// {overlap: {k, r_or, r_oa, r_ora, sets}} so ratios can be re-derived later.
void write_trace_jsonl(const GenerationTrace& trace, const Vocabulary& vocab,
                       std::ostream& out, int top_n = 20,
                       const std::vector<StepOverlap>* overlaps = nullptr);

// What diagnose can see in a saved trace: the truncated token lists, the
// sampled token, the accumulators, and the optional overlap annotation.
struct TraceRecord {
  int step = 0;
  std::size_t context_len = 0;
  std::map<std::string, std::vector<std::pair<std::string, double>>> top_tokens;
  std::string sampled_token;
  int32_t sampled_id = -1;
  std::map<std::string, double> log_delta;
  std::optional<StepOverlap> overlap;
};

std::vector<TraceRecord> read_trace_jsonl(std::istream& in);
std::vector<TraceRecord> read_trace_file(const std::string& path);

}  // namespace airdecode
