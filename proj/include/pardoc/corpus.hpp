#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pardoc/tokens.hpp"

namespace pardoc {

enum class StreamKind { Table, Formula, Chart, Text };

StreamKind parse_stream_kind(const std::string& name);
std::string to_string(StreamKind kind);

// Synthetic corpus lines with kind-dependent local predictability:
// table streams cycle a short fixed-skeleton motif, formula streams cycle a
// longer motif with injected random symbols, text draws from a small
// alphabet and chart from the full ordinary range. target_len counts
// content tokens; the line is always EOS-terminated.
Sequence gen_structured_stream(StreamKind kind, std::uint64_t seed, std::size_t target_len,
                               const Vocabulary& vocab);

struct HmtSample {
  Sequence input;    // the line, with mask spans substituted when masked
  Sequence labels;   // the original tokens at every position
  bool is_masked = false;
};

struct HmtConfig {
  double masked_share = 0.8;
  std::size_t max_spans = 3;
  std::size_t max_span_len = 16;
};

// Training-sample construction: with probability masked_share the line gets
// 1..max_spans non-overlapping mask spans of length 1..max_span_len placed
// over its content (never the trailing EOS); otherwise it is passed through
// unmasked. labels always reconstruct the original line.
HmtSample make_hmt_sample(const Sequence& line, const HmtConfig& cfg, std::uint64_t seed,
                          const Vocabulary& vocab);

}  // namespace pardoc
