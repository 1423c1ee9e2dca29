#include "pardoc/query.hpp"

#include "pardoc/rng.hpp"

namespace pardoc {

BatchQuery build_batch_query(const std::string& instruction,
                             const std::vector<LayoutElement>& elements, std::size_t m_max) {
  if (elements.empty()) throw ValidationError("batch query needs at least one element");
  if (elements.size() > m_max) {
    throw ValidationError("batch overflow: " + std::to_string(elements.size()) +
                          " elements exceed capacity " + std::to_string(m_max));
  }
  BatchQuery q;
  q.instruction = instruction;
  q.entries = elements;
  q.rendered = instruction;
  for (const auto& e : elements) {
    e.box.require_valid();
    q.rendered += "<x_" + std::to_string(e.box.x1) + ">";
    q.rendered += "<y_" + std::to_string(e.box.y1) + ">";
    q.rendered += "<x_" + std::to_string(e.box.x2) + ">";
    q.rendered += "<y_" + std::to_string(e.box.y2) + ">";
    q.rendered += "<LAYOUT_" + to_string(e.category) + ">";
    q.rendered += "|";
  }
  return q;
}

std::vector<std::vector<LayoutElement>> plan_batches(const std::vector<LayoutElement>& elements,
                                                     std::size_t m) {
  if (m < 1) throw ValidationError("batch size must be at least 1");
  std::vector<std::vector<LayoutElement>> batches;
  for (std::size_t i = 0; i < elements.size(); i += m) {
    std::size_t end = std::min(i + m, elements.size());
    batches.emplace_back(elements.begin() + static_cast<std::ptrdiff_t>(i),
                         elements.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

std::vector<Sequence> decompose_output(const Sequence& output, std::size_t m,
                                       const Vocabulary& vocab) {
  if (output.empty() || output.back() != vocab.eos) {
    throw ValidationError("output to decompose must be EOS-terminated");
  }
  std::vector<Sequence> segments(1);
  for (std::size_t i = 0; i + 1 < output.size(); ++i) {
    if (output[i] == vocab.sep) {
      segments.emplace_back();
    } else {
      segments.back().push_back(output[i]);
    }
  }
  if (segments.size() != m) throw DecompositionMismatch(m, segments.size());
  return segments;
}

Sequence region_content(const BoundingBox& box, LayoutCategory category, std::uint64_t seed,
                        const Vocabulary& vocab) {
  box.require_valid();
  bool short_form = category == LayoutCategory::Title || category == LayoutCategory::Seal ||
                    category == LayoutCategory::HeaderFigure ||
                    category == LayoutCategory::FooterFigure;
  std::uint64_t h = rng::mix(seed, rng::hash_bytes(to_string(category)));
  h = rng::mix(h, static_cast<std::uint64_t>(box.x1) << 48 |
                      static_cast<std::uint64_t>(box.y1) << 32 |
                      static_cast<std::uint64_t>(box.x2) << 16 |
                      static_cast<std::uint64_t>(box.y2));
  std::uint64_t state = h;
  std::size_t len = short_form ? 2 + rng::bounded(state, 7) : 8 + rng::bounded(state, 57);
  Sequence content;
  content.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    content.push_back(static_cast<Token>(rng::bounded(state, static_cast<std::uint64_t>(vocab.size))));
  }
  return content;
}

Sequence RegionOracle::batch_target(std::span<const LayoutElement> elements) const {
  Sequence target;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i) target.push_back(vocab_.sep);
    Sequence part = content(elements[i]);
    target.insert(target.end(), part.begin(), part.end());
  }
  target.push_back(vocab_.eos);
  return target;
}

Sequence encode_prompt(const std::string& text, const Vocabulary& vocab) {
  Sequence tokens;
  tokens.reserve(text.size());
  for (unsigned char c : text) {
    tokens.push_back(static_cast<Token>(c % vocab.size));
  }
  return tokens;
}

namespace {

// Decode one batch against the oracle's scripted emission and split it.
std::vector<Sequence> decode_batch(const RegionOracle& oracle,
                                   const std::vector<LayoutElement>& batch,
                                   const std::string& instruction, const DecodeConfig& cfg,
                                   QueryTrace& trace) {
  BatchQuery q = build_batch_query(instruction, batch, batch.size());
  Sequence prompt = encode_prompt(q.rendered, cfg.vocab);
  ScriptedModel model(prompt, oracle.batch_target(batch), cfg.vocab);
  auto [out, dtrace] = parallel_decode(model, prompt, cfg);
  trace.generation_calls += 1;
  trace.passes += dtrace.passes;
  trace.tokens += dtrace.tokens;
  return decompose_output(out, batch.size(), cfg.vocab);
}

}  // namespace

std::pair<std::vector<RegionResult>, QueryTrace> run_query_parallel(
    const RegionOracle& oracle, const std::vector<LayoutElement>& elements, std::size_t m,
    const DecodeConfig& cfg, const std::string& instruction) {
  if (elements.empty()) throw ValidationError("no layout elements to query");
  auto batches = plan_batches(elements, m);

  std::vector<RegionResult> results;
  results.reserve(elements.size());
  QueryTrace trace;
  trace.batches = batches.size();

  for (std::size_t bi = 0; bi < batches.size(); ++bi) {
    const auto& batch = batches[bi];
    try {
      auto segments = decode_batch(oracle, batch, instruction, cfg, trace);
      for (std::size_t si = 0; si < batch.size(); ++si) {
        results.push_back({batch[si].id, std::move(segments[si]), bi, si});
      }
    } catch (const DecompositionMismatch&) {
      // Malformed batched emission: redo this batch one element at a time
      // so results stay exact.
      trace.fallbacks += 1;
      for (std::size_t si = 0; si < batch.size(); ++si) {
        std::vector<LayoutElement> single{batch[si]};
        auto segments = decode_batch(oracle, single, instruction, cfg, trace);
        results.push_back({batch[si].id, std::move(segments[0]), bi, si});
      }
    }
  }
  return {std::move(results), trace};
}

double modeled_cost(const QueryTrace& trace, double call_overhead) {
  return call_overhead * static_cast<double>(trace.generation_calls) +
         static_cast<double>(trace.passes);
}

}  // namespace pardoc
