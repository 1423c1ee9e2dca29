#include "pardoc/models.hpp"

#include <utility>

#include "pardoc/rng.hpp"

namespace pardoc {

SpeculateResult ToyModel::speculate(const Sequence& context, std::size_t n) const {
  // Default speculation: the model's own greedy rollout. For a
  // deterministic model this is a perfect look-ahead.
  SpeculateResult res;
  res.next = next(context);
  Sequence chain = context;
  chain.push_back(res.next);
  res.candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Token t = next(chain);
    res.candidates.push_back(t);
    chain.push_back(t);
  }
  return res;
}

NgramModel::NgramModel(std::size_t order, Token fallback) : order_(order), fallback_(fallback) {}

Token NgramModel::next(const Sequence& context) const {
  std::size_t window = order_ - 1;
  Sequence key;
  if (context.size() >= window) {
    key.assign(context.end() - static_cast<std::ptrdiff_t>(window), context.end());
  } else {
    key = context;
  }
  auto it = table_.find(key);
  return it == table_.end() ? fallback_ : it->second;
}

NgramModel build_ngram(const std::vector<Sequence>& corpus, std::size_t order,
                       const Vocabulary& vocab) {
  if (corpus.empty()) throw ValidationError("corpus must be nonempty");
  if (order < 2) throw ValidationError("n-gram order must be at least 2");
  for (const auto& line : corpus) {
    if (line.empty() || line.back() != vocab.eos) {
      throw ValidationError("every corpus line must end with <eos>");
    }
  }

  std::size_t window = order - 1;
  std::map<Sequence, std::map<Token, std::size_t>> counts;
  for (const auto& line : corpus) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      std::size_t start = i >= window ? i - window : 0;
      Sequence key(line.begin() + static_cast<std::ptrdiff_t>(start),
                   line.begin() + static_cast<std::ptrdiff_t>(i));
      counts[key][line[i]]++;
    }
  }

  NgramModel model(order, vocab.eos);
  for (const auto& [key, dist] : counts) {
    Token best = 0;
    std::size_t best_count = 0;
    for (const auto& [tok, c] : dist) {
      // std::map iterates tokens ascending, so ties keep the smallest.
      if (c > best_count) {
        best = tok;
        best_count = c;
      }
    }
    model.table_[key] = best;
  }
  return model;
}

ScriptedModel::ScriptedModel(Sequence prompt, Sequence target, const Vocabulary& vocab)
    : prompt_(std::move(prompt)), target_(std::move(target)), eos_(vocab.eos) {}

Token ScriptedModel::next(const Sequence& context) const {
  if (context.size() < prompt_.size() ||
      !std::equal(prompt_.begin(), prompt_.end(), context.begin())) {
    throw ValidationError("scripted model queried with a foreign prompt");
  }
  std::size_t off = context.size() - prompt_.size();
  return off < target_.size() ? target_[off] : eos_;
}

DraftedModel::DraftedModel(std::shared_ptr<const ToyModel> truth,
                           std::shared_ptr<const ToyModel> drafter)
    : truth_(std::move(truth)), drafter_(std::move(drafter)) {}

Token DraftedModel::next(const Sequence& context) const { return truth_->next(context); }

SpeculateResult DraftedModel::speculate(const Sequence& context, std::size_t n) const {
  SpeculateResult res;
  res.next = truth_->next(context);
  Sequence chain = context;
  chain.push_back(res.next);
  res.candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Token t = drafter_->next(chain);
    res.candidates.push_back(t);
    chain.push_back(t);
  }
  return res;
}

NoisySpeculator::NoisySpeculator(std::shared_ptr<const ToyModel> inner, double corruption,
                                 std::uint64_t seed, const Vocabulary& vocab)
    : inner_(std::move(inner)), corruption_(corruption), seed_(seed), vocab_(vocab) {
  if (!(corruption >= 0.0 && corruption <= 1.0)) {
    throw ValidationError("corruption probability must lie in [0, 1]");
  }
}

Token NoisySpeculator::next(const Sequence& context) const { return inner_->next(context); }

SpeculateResult NoisySpeculator::speculate(const Sequence& context, std::size_t n) const {
  SpeculateResult res = inner_->speculate(context, n);
  if (corruption_ == 0.0) return res;

  std::uint64_t ctx_hash = rng::hash_bytes(
      std::string_view(reinterpret_cast<const char*>(context.data()),
                       context.size() * sizeof(Token)),
      seed_);
  for (std::size_t j = 0; j < res.candidates.size(); ++j) {
    std::uint64_t state = rng::mix(ctx_hash, j);
    if (rng::unit_real(state) >= corruption_) continue;
    Token original = res.candidates[j];
    Token replacement;
    do {
      replacement = static_cast<Token>(rng::bounded(state, static_cast<std::uint64_t>(vocab_.size)));
    } while (replacement == original);
    res.candidates[j] = replacement;
  }
  return res;
}

std::shared_ptr<NoisySpeculator> wrap_noisy(std::shared_ptr<const ToyModel> inner, double p,
                                            std::uint64_t seed, const Vocabulary& vocab) {
  return std::make_shared<NoisySpeculator>(std::move(inner), p, seed, vocab);
}

}  // namespace pardoc
