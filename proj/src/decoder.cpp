#include "pardoc/decoder.hpp"

namespace pardoc {

void DecodeConfig::validate() const {
  if (max_len < 1) throw ValidationError("max_len must be at least 1");
  if (vocab.size < 2) throw ValidationError("decode config carries an invalid vocabulary");
}

Sequence ar_decode(const ToyModel& model, const Sequence& prompt, std::size_t max_len,
                   const Vocabulary& vocab) {
  if (is_terminated(prompt, vocab)) throw ValidationError("prompt is already terminated");
  Sequence context = prompt;
  Sequence out;
  while (out.size() < max_len) {
    Token t = model.next(context);
    out.push_back(t);
    context.push_back(t);
    if (t == vocab.eos) break;
  }
  return out;
}

SpeculateResult generate_candidates(const ToyModel& model, const Sequence& context, std::size_t n,
                                    const Vocabulary& vocab) {
  // Shapes the masked input of the generation pass; also enforces that the
  // context is unterminated and mask-free.
  Sequence masked = append_masks(context, n, vocab);
  (void)masked;
  return model.speculate(context, n);
}

VerifyResult verify_candidates(const ToyModel& model, const Sequence& context, Token next_token,
                               const Sequence& candidates, const Vocabulary& vocab) {
  if (is_terminated(context, vocab)) throw ValidationError("context is already terminated");
  VerifyResult res;
  Sequence prefix = context;
  prefix.reserve(context.size() + candidates.size() + 1);
  prefix.push_back(next_token);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    Token predicted = model.next(prefix);
    if (predicted != candidates[i]) {
      res.matched_prefix = i;
      res.correction = predicted;
      return res;
    }
    prefix.push_back(candidates[i]);
  }
  res.matched_prefix = candidates.size();
  return res;
}

std::pair<Sequence, DecodeTrace> parallel_decode(const ToyModel& model, const Sequence& prompt,
                                                 const DecodeConfig& cfg) {
  cfg.validate();
  if (is_terminated(prompt, cfg.vocab)) throw ValidationError("prompt is already terminated");

  Sequence context = prompt;
  Sequence out;
  DecodeTrace trace;

  while (out.size() < cfg.max_len) {
    SpeculateResult spec = generate_candidates(model, context, cfg.n, cfg.vocab);
    VerifyResult ver = verify_candidates(model, context, spec.next, spec.candidates, cfg.vocab);

    Sequence accepted;
    accepted.reserve(ver.matched_prefix + 2);
    accepted.push_back(spec.next);
    accepted.insert(accepted.end(), spec.candidates.begin(),
                    spec.candidates.begin() + static_cast<std::ptrdiff_t>(ver.matched_prefix));
    if (cfg.accept_correction && ver.correction) {
      // The verification pass's prediction at the mismatch is the exact AR
      // token, so keeping it preserves equivalence.
      accepted.push_back(*ver.correction);
    }

    std::size_t room = cfg.max_len - out.size();
    if (accepted.size() > room) accepted.resize(room);

    IterationRecord rec;
    rec.matched_prefix = ver.matched_prefix;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      if (accepted[i] == cfg.vocab.eos) {
        // EOS ends the output; anything speculated past it is discarded.
        accepted.resize(i + 1);
        rec.hit_eos = true;
        break;
      }
    }
    rec.accepted = accepted.size();

    out.insert(out.end(), accepted.begin(), accepted.end());
    context.insert(context.end(), accepted.begin(), accepted.end());
    trace.iterations.push_back(rec);
    trace.tokens += rec.accepted;
    trace.passes += 2;

    if (rec.hit_eos) break;
  }
  return {out, trace};
}

SpeedupStats speedup_stats(const DecodeTrace& trace) {
  if (trace.iterations.empty()) throw ValidationError("trace has no iterations");
  SpeedupStats s;
  s.k_avg = static_cast<double>(trace.tokens) / static_cast<double>(trace.iterations.size());
  s.speedup = static_cast<double>(trace.tokens) / static_cast<double>(trace.passes);
  return s;
}

}  // namespace pardoc
