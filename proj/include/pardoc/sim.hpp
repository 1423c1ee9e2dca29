#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "pardoc/corpus.hpp"
#include "pardoc/decoder.hpp"
#include "pardoc/layout.hpp"
#include "pardoc/models.hpp"
#include "pardoc/query.hpp"

namespace pardoc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportFormatVersion = 1;

struct DecodeSimConfig {
  StreamKind scenario = StreamKind::Table;
  std::size_t n = 64;
  bool accept_correction = false;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 10;
  std::size_t line_len = 200;
  Token vocab_size = 64;
  std::size_t corpus_lines = 20;  // training lines behind the drafter
};

struct DecodeSimResult {
  std::size_t iterations = 0;
  std::size_t passes = 0;
  std::size_t tokens = 0;
  double k_avg = 0.0;
  double speedup = 0.0;
  bool equivalence_checked = false;
  bool equivalence_ok = false;
  std::size_t trials = 0;
};

// Drafted decoding over generated streams: the ground truth replays the
// stream, an order-3 n-gram trained on sibling streams drafts ahead, and
// optional candidate noise comes on top. Every trial cross-checks the
// parallel output against the autoregressive baseline.
DecodeSimResult run_decode_sim(const DecodeSimConfig& cfg);

// One drafted trial model plus its scripted line, exposed for tests.
struct TrialSetup {
  Sequence line;
  Sequence prompt;
  std::shared_ptr<const ToyModel> model;
};
TrialSetup make_drafted_trial(const DecodeSimConfig& cfg, std::size_t trial);

struct QuerySimConfig {
  std::size_t m = kDefaultBatchCapacity;
  std::size_t n = 64;
  std::uint64_t seed = 0;
  Token vocab_size = 64;
  double call_overhead = 8.0;
};

struct QuerySimResult {
  QueryTrace trace;
  double cost = 0.0;
  std::uint64_t content_hash = 0;  // order-stable over (element id, content)
  std::vector<RegionResult> results;
};

QuerySimResult run_query_sim(const QuerySimConfig& cfg, const std::vector<LayoutElement>& elements);

// Deterministic page of short elements for query-parallelism studies.
std::vector<LayoutElement> make_synthetic_page(std::size_t count, std::uint64_t seed);

nlohmann::ordered_json decode_sim_report(const DecodeSimConfig& cfg, const DecodeSimResult& result);
nlohmann::ordered_json query_sim_report(const QuerySimConfig& cfg, const QuerySimResult& result);

// Benchmark-shaped summary: an n-sweep per scenario, a consistency check of
// the pass-count speedup law against published reference measurements, and
// an m-sweep of the batched-query cost model.
nlohmann::ordered_json run_bench(std::uint64_t seed);

std::string report_to_markdown(const nlohmann::ordered_json& report);

}  // namespace pardoc
