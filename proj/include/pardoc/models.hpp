#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "pardoc/tokens.hpp"

namespace pardoc {

struct SpeculateResult {
  Token next = 0;                // the exact autoregressive next token
  Sequence candidates;           // look-ahead guesses for the mask slots
};

// Deterministic next-token oracle. `next` must be a pure function of the
// context; `speculate(ctx, n).next` must always equal `next(ctx)`.
class ToyModel {
 public:
  virtual ~ToyModel() = default;
  virtual Token next(const Sequence& context) const = 0;
  virtual SpeculateResult speculate(const Sequence& context, std::size_t n) const;
};

// Greedy n-gram table: each observed context window maps to its most
// frequent continuation (smallest token on ties). Unseen windows emit the
// fallback token so generation always terminates.
class NgramModel : public ToyModel {
 public:
  NgramModel(std::size_t order, Token fallback);

  Token next(const Sequence& context) const override;

  std::size_t order() const { return order_; }
  Token fallback() const { return fallback_; }

 private:
  friend NgramModel build_ngram(const std::vector<Sequence>& corpus, std::size_t order,
                                const Vocabulary& vocab);
  std::size_t order_;
  Token fallback_;
  std::map<Sequence, Token> table_;
};

NgramModel build_ngram(const std::vector<Sequence>& corpus, std::size_t order,
                       const Vocabulary& vocab);

// Replays a fixed target continuation after a fixed prompt, emitting EOS
// forever once the target is exhausted. Stands in for content whose ground
// truth is determined externally (a document region, a generated stream).
class ScriptedModel : public ToyModel {
 public:
  ScriptedModel(Sequence prompt, Sequence target, const Vocabulary& vocab);

  Token next(const Sequence& context) const override;

  const Sequence& prompt() const { return prompt_; }
  const Sequence& target() const { return target_; }

 private:
  Sequence prompt_;
  Sequence target_;
  Token eos_;
};

// Splits the two model capabilities: `truth` answers next-token queries,
// `drafter` produces the look-ahead candidates by rolling its own greedy
// chain forward from the confirmed context.
class DraftedModel : public ToyModel {
 public:
  DraftedModel(std::shared_ptr<const ToyModel> truth, std::shared_ptr<const ToyModel> drafter);

  Token next(const Sequence& context) const override;
  SpeculateResult speculate(const Sequence& context, std::size_t n) const override;

 private:
  std::shared_ptr<const ToyModel> truth_;
  std::shared_ptr<const ToyModel> drafter_;
};

// Corrupts each candidate independently with probability p, replacing it
// with a uniformly random ordinary token different from the original.
// `next` passes through untouched. Draws are keyed by
// (seed, context hash, slot index) so concurrent calls reproduce.
class NoisySpeculator : public ToyModel {
 public:
  NoisySpeculator(std::shared_ptr<const ToyModel> inner, double corruption, std::uint64_t seed,
                  const Vocabulary& vocab);

  Token next(const Sequence& context) const override;
  SpeculateResult speculate(const Sequence& context, std::size_t n) const override;

  double corruption() const { return corruption_; }

 private:
  std::shared_ptr<const ToyModel> inner_;
  double corruption_;
  std::uint64_t seed_;
  Vocabulary vocab_;
};

std::shared_ptr<NoisySpeculator> wrap_noisy(std::shared_ptr<const ToyModel> inner, double p,
                                            std::uint64_t seed, const Vocabulary& vocab);

}  // namespace pardoc
