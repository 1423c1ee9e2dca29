#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pardoc/decoder.hpp"
#include "pardoc/layout.hpp"
#include "pardoc/models.hpp"
#include "pardoc/tokens.hpp"

namespace pardoc {

struct BatchQuery {
  std::string instruction;
  std::vector<LayoutElement> entries;  // at most m_max
  std::string rendered;                // instruction + per-region coordinate/category markup
};

struct RegionResult {
  std::string element_id;
  Sequence content;
  std::size_t batch_index = 0;
  std::size_t slot_index = 0;
};

struct QueryTrace {
  std::size_t generation_calls = 0;  // parallel_decode invocations
  std::size_t passes = 0;
  std::size_t tokens = 0;
  std::size_t fallbacks = 0;  // batches that were re-run element by element
  std::size_t batches = 0;
};

inline constexpr std::size_t kDefaultBatchCapacity = 5;

// Renders one batched prompt: the instruction followed, per element, by
// <x_{x1}><y_{y1}><x_{x2}><y_{y2}><LAYOUT_{category}> and a "|" delimiter
// after every region query including the last.
BatchQuery build_batch_query(const std::string& instruction,
                             const std::vector<LayoutElement>& elements,
                             std::size_t m_max = kDefaultBatchCapacity);

// Partitions elements in reading order into ceil(k/m) batches, all full
// except possibly the last.
std::vector<std::vector<LayoutElement>> plan_batches(const std::vector<LayoutElement>& elements,
                                                     std::size_t m);

// Splits an EOS-terminated output on the separator token into exactly m
// segments (empty segments are legitimate). A wrong segment count raises
// DecompositionMismatch with both counts.
std::vector<Sequence> decompose_output(const Sequence& output, std::size_t m,
                                       const Vocabulary& vocab);

// Deterministic region-content ground truth, keyed by (box, category, seed).
Sequence region_content(const BoundingBox& box, LayoutCategory category, std::uint64_t seed,
                        const Vocabulary& vocab);

// Stands in for the region-prompted decoder: hands out per-element content
// and scripts the model a batched decode runs against. A batch emission is
// by construction the SEP-joined concatenation of the member contents.
class RegionOracle {
 public:
  RegionOracle(std::uint64_t seed, const Vocabulary& vocab) : seed_(seed), vocab_(vocab) {}
  virtual ~RegionOracle() = default;

  Sequence content(const LayoutElement& element) const {
    return region_content(element.box, element.category, seed_, vocab_);
  }

  virtual Sequence batch_target(std::span<const LayoutElement> elements) const;

  const Vocabulary& vocab() const { return vocab_; }

 private:
  std::uint64_t seed_;
  Vocabulary vocab_;
};

// Maps prompt text onto ordinary tokens so scripted decodes have a
// well-defined token prefix.
Sequence encode_prompt(const std::string& text, const Vocabulary& vocab);

// Batched region extraction: plan, decode each batch, decompose, and map
// segments back to elements by query order. A batch whose output does not
// decompose is transparently re-run element by element.
std::pair<std::vector<RegionResult>, QueryTrace> run_query_parallel(
    const RegionOracle& oracle, const std::vector<LayoutElement>& elements, std::size_t m,
    const DecodeConfig& cfg, const std::string& instruction = "Extract the content of each region.");

// Fixed-overhead cost model: each generation call costs `call_overhead`
// pass-equivalents on top of the passes it actually ran.
double modeled_cost(const QueryTrace& trace, double call_overhead);

}  // namespace pardoc
