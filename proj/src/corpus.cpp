#include "pardoc/corpus.hpp"

#include <algorithm>

#include "pardoc/rng.hpp"

namespace pardoc {
namespace {

Token clamp_ordinary(std::uint64_t raw, Token lo, Token span, const Vocabulary& vocab) {
  if (lo >= vocab.size) lo = 0;
  Token avail = vocab.size - lo;
  if (span > avail) span = avail;
  return lo + static_cast<Token>(raw % static_cast<std::uint64_t>(span));
}

// Table lines share a fixed two-token skeleton; only the filler varies per
// seed. That gives cross-seed regularity an n-gram can exploit, the way
// delimiter-heavy table markup does.
Sequence table_stream(std::uint64_t seed, std::size_t len, const Vocabulary& vocab) {
  std::uint64_t s = rng::derive(seed, "table", 0);
  Token filler = clamp_ordinary(rng::splitmix(s), 2, 6, vocab);
  Token d0 = clamp_ordinary(0, 0, 1, vocab);
  Token d1 = clamp_ordinary(1, 1, 1, vocab);
  Token motif[3] = {d0, d1, filler};
  Sequence line;
  line.reserve(len + 1);
  for (std::size_t i = 0; i < len; ++i) line.push_back(motif[i % 3]);
  return line;
}

// Formula lines cycle a period-6 motif with fixed operator positions and
// two per-seed symbols, occasionally perturbed by a random symbol.
Sequence formula_stream(std::uint64_t seed, std::size_t len, const Vocabulary& vocab) {
  std::uint64_t s = rng::derive(seed, "formula", 0);
  Token y0 = clamp_ordinary(rng::splitmix(s), 4, 12, vocab);
  Token y1 = clamp_ordinary(rng::splitmix(s), 4, 12, vocab);
  Token f0 = clamp_ordinary(0, 0, 1, vocab);
  Token f1 = clamp_ordinary(1, 1, 1, vocab);
  Token f2 = clamp_ordinary(2, 2, 1, vocab);
  Token f3 = clamp_ordinary(3, 3, 1, vocab);
  Token motif[6] = {f0, y0, f1, y1, f2, f3};
  Sequence line;
  line.reserve(len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t inject = rng::derive(seed, "formula-inject", i);
    if (inject % 8 == 0) {
      line.push_back(clamp_ordinary(inject >> 8, 4, 12, vocab));
    } else {
      line.push_back(motif[i % 6]);
    }
  }
  return line;
}

Sequence noise_stream(std::uint64_t seed, std::size_t len, const Vocabulary& vocab,
                      const char* tag, Token lo, Token span) {
  Sequence line;
  line.reserve(len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    line.push_back(clamp_ordinary(rng::derive(seed, tag, i), lo, span, vocab));
  }
  return line;
}

}  // namespace

StreamKind parse_stream_kind(const std::string& name) {
  if (name == "table") return StreamKind::Table;
  if (name == "formula") return StreamKind::Formula;
  if (name == "chart") return StreamKind::Chart;
  if (name == "text") return StreamKind::Text;
  throw ValidationError("unknown stream kind: " + name);
}

std::string to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::Table: return "table";
    case StreamKind::Formula: return "formula";
    case StreamKind::Chart: return "chart";
    case StreamKind::Text: return "text";
  }
  throw ValidationError("unknown stream kind");
}

Sequence gen_structured_stream(StreamKind kind, std::uint64_t seed, std::size_t target_len,
                               const Vocabulary& vocab) {
  if (target_len < 1) throw ValidationError("stream length must be at least 1");
  Sequence line;
  switch (kind) {
    case StreamKind::Table:
      line = table_stream(seed, target_len, vocab);
      break;
    case StreamKind::Formula:
      line = formula_stream(seed, target_len, vocab);
      break;
    case StreamKind::Text:
      // Small alphabet: window collisions keep it slightly more
      // predictable than chart noise.
      line = noise_stream(seed, target_len, vocab, "text", 8, 40);
      break;
    case StreamKind::Chart:
      line = noise_stream(seed, target_len, vocab, "chart", 0, vocab.size);
      break;
  }
  line.push_back(vocab.eos);
  return line;
}

HmtSample make_hmt_sample(const Sequence& line, const HmtConfig& cfg, std::uint64_t seed,
                          const Vocabulary& vocab) {
  if (line.size() < 2) throw ValidationError("line must have at least 2 tokens");
  if (line.back() != vocab.eos) throw ValidationError("line must be EOS-terminated");

  HmtSample sample;
  sample.labels = line;
  sample.input = line;

  std::uint64_t s = rng::derive(seed, "hmt-gate", 0);
  if (rng::unit_real(s) >= cfg.masked_share) return sample;

  sample.is_masked = true;
  std::size_t maskable = line.size() - 1;  // everything but the trailing EOS
  std::vector<bool> used(maskable, false);

  std::uint64_t span_state = rng::derive(seed, "hmt-spans", 0);
  std::size_t spans = 1 + rng::bounded(span_state, cfg.max_spans);
  for (std::size_t k = 0; k < spans; ++k) {
    std::size_t len = 1 + rng::bounded(span_state, cfg.max_span_len);
    len = std::min(len, maskable);
    // A handful of placement attempts; overlapping draws are skipped so
    // spans stay disjoint.
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::size_t start = rng::bounded(span_state, maskable - len + 1);
      bool free = true;
      for (std::size_t i = start; i < start + len; ++i) {
        if (used[i]) {
          free = false;
          break;
        }
      }
      if (!free) continue;
      for (std::size_t i = start; i < start + len; ++i) {
        used[i] = true;
        sample.input[i] = vocab.mask;
      }
      break;
    }
  }
  return sample;
}

}  // namespace pardoc
