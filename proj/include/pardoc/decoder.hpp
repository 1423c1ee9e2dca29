#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pardoc/models.hpp"
#include "pardoc/tokens.hpp"

namespace pardoc {

struct DecodeConfig {
  std::size_t n = 64;              // mask-slot count per iteration
  bool accept_correction = false;  // also keep the verifier's token at the first mismatch
  std::size_t max_len = 4096;      // hard cap on emitted tokens
  Vocabulary vocab;

  void validate() const;
};

struct IterationRecord {
  std::size_t accepted = 0;        // tokens kept this iteration (after EOS/cap truncation)
  std::size_t matched_prefix = 0;  // verified candidate prefix length
  bool hit_eos = false;
};

struct DecodeTrace {
  std::vector<IterationRecord> iterations;
  std::size_t passes = 0;  // always 2 per iteration: one generation + one verification
  std::size_t tokens = 0;  // sum of accepted counts == emitted length
};

struct SpeedupStats {
  double k_avg = 0.0;   // tokens / iterations
  double speedup = 0.0; // tokens / passes == k_avg / 2 under the unit-cost pass model
};

struct VerifyResult {
  std::size_t matched_prefix = 0;
  std::optional<Token> correction;  // the verifier's prediction at the first mismatch
};

// Plain autoregressive baseline: one pass per emitted token. The returned
// sequence excludes the prompt and stops after EOS or max_len tokens.
Sequence ar_decode(const ToyModel& model, const Sequence& prompt, std::size_t max_len,
                   const Vocabulary& vocab);

// One generation pass: extend the context with n mask slots and ask the
// model for the AR next token plus n look-ahead candidates.
SpeculateResult generate_candidates(const ToyModel& model, const Sequence& context, std::size_t n,
                                    const Vocabulary& vocab);

// One verification pass over context + next_token + candidates: find the
// first candidate that disagrees with the model's own prediction given the
// verified prefix before it.
VerifyResult verify_candidates(const ToyModel& model, const Sequence& context, Token next_token,
                               const Sequence& candidates, const Vocabulary& vocab);

// Iterative two-pass decoding. Output is token-identical to ar_decode under
// the same cap; the trace records per-iteration acceptance and total pass
// counts.
std::pair<Sequence, DecodeTrace> parallel_decode(const ToyModel& model, const Sequence& prompt,
                                                 const DecodeConfig& cfg);

SpeedupStats speedup_stats(const DecodeTrace& trace);

}  // namespace pardoc
