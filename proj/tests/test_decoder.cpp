#include <doctest.h>

#include <memory>

#include "pardoc/corpus.hpp"
#include "pardoc/decoder.hpp"
#include "pardoc/rng.hpp"
#include "pardoc/sim.hpp"

using namespace pardoc;

namespace {

const Vocabulary kVocab = make_vocab(10);

std::shared_ptr<NgramModel> single_path_model() {
  std::vector<Sequence> corpus{{1, 2, 3, kVocab.eos}};
  return std::make_shared<NgramModel>(build_ngram(corpus, 2, kVocab));
}

DecodeConfig config(std::size_t n, const Vocabulary& v = kVocab, std::size_t max_len = 4096) {
  DecodeConfig cfg;
  cfg.n = n;
  cfg.max_len = max_len;
  cfg.vocab = v;
  return cfg;
}

}  // namespace

TEST_CASE("ar_decode walks the n-gram path to EOS") {
  auto m = single_path_model();
  CHECK(ar_decode(*m, {1}, 100, kVocab) == Sequence{2, 3, kVocab.eos});
  CHECK(ar_decode(*m, {1}, 1, kVocab) == Sequence{2});  // cap binds
  CHECK(ar_decode(*m, {3}, 100, kVocab) == Sequence{kVocab.eos});
  CHECK_THROWS_AS(ar_decode(*m, {1, kVocab.eos}, 10, kVocab), ValidationError);
}

TEST_CASE("generate_candidates shapes") {
  auto m = single_path_model();
  auto zero = generate_candidates(*m, {1}, 0, kVocab);
  CHECK(zero.next == 2);
  CHECK(zero.candidates.empty());

  auto spec = generate_candidates(*m, {1}, 2, kVocab);
  CHECK(spec.next == 2);
  CHECK(spec.candidates == Sequence{3, kVocab.eos});  // true AR continuation

  auto noisy = wrap_noisy(m, 1.0, 4, kVocab);
  auto corrupted = generate_candidates(*noisy, {1}, 2, kVocab);
  CHECK(corrupted.candidates[0] != spec.candidates[0]);
  CHECK(corrupted.candidates[1] != spec.candidates[1]);

  CHECK_THROWS_AS(generate_candidates(*m, {1, kVocab.eos}, 2, kVocab), ValidationError);
}

TEST_CASE("verify_candidates finds the first mismatch and its correction") {
  // Truth: prompt [] -> a b c d ...
  Sequence target{4, 5, 6, 7, 8};
  ScriptedModel m({}, target, kVocab);

  SUBCASE("full match") {
    VerifyResult r = verify_candidates(m, {}, 4, {5, 6, 7}, kVocab);
    CHECK(r.matched_prefix == 3);
    CHECK(!r.correction.has_value());
  }
  SUBCASE("mismatch in the middle") {
    // candidates [5, 9, 7] against true continuation [5, 6, 7]
    VerifyResult r = verify_candidates(m, {}, 4, {5, 9, 7}, kVocab);
    CHECK(r.matched_prefix == 1);
    REQUIRE(r.correction.has_value());
    CHECK(*r.correction == 6);
  }
  SUBCASE("empty speculation") {
    VerifyResult r = verify_candidates(m, {}, 4, {}, kVocab);
    CHECK(r.matched_prefix == 0);
    CHECK(!r.correction.has_value());
  }
}

TEST_CASE("perfect speculator packs n+1 tokens per iteration") {
  // Output length 10 (9 content + EOS), n = 4 -> ceil(10/5) = 2 iterations.
  Sequence target{1, 2, 3, 4, 5, 6, 7, 8, 9};
  ScriptedModel m({}, target, kVocab);

  auto [out, trace] = parallel_decode(m, {}, config(4));
  CHECK(out == ar_decode(m, {}, 4096, kVocab));
  CHECK(out.size() == 10);
  CHECK(trace.iterations.size() == 2);
  CHECK(trace.tokens == 10);
  CHECK(trace.passes == 4);
  for (const auto& it : trace.iterations) CHECK(it.accepted == 5);
}

TEST_CASE("n=0 degenerates to one token per iteration at speedup 0.5") {
  auto m = single_path_model();
  auto [out, trace] = parallel_decode(*m, {1}, config(0));
  CHECK(out == Sequence{2, 3, kVocab.eos});
  CHECK(trace.iterations.size() == 3);
  CHECK(trace.passes == 6);
  SpeedupStats s = speedup_stats(trace);
  CHECK(s.speedup == doctest::Approx(0.5));
  CHECK(s.k_avg == doctest::Approx(1.0));
}

TEST_CASE("trace invariants hold across noise levels") {
  Vocabulary v = make_vocab(64);
  for (double p : {0.0, 0.1, 0.5, 1.0}) {
    Sequence line = gen_structured_stream(StreamKind::Formula, 5, 120, v);
    auto truth = std::make_shared<ScriptedModel>(Sequence{}, line, v);
    auto model = wrap_noisy(truth, p, 17, v);
    auto [out, trace] = parallel_decode(*model, {}, config(16, v));
    CHECK(trace.passes == 2 * trace.iterations.size());
    std::size_t sum = 0;
    for (const auto& it : trace.iterations) {
      CHECK(it.accepted >= 1);
      sum += it.accepted;
    }
    CHECK(sum == trace.tokens);
    CHECK(trace.tokens == out.size());
  }
}

TEST_CASE("speedup_stats arithmetic and the k/2 identity") {
  DecodeTrace trace;
  trace.iterations.resize(1);
  trace.tokens = 65;
  trace.passes = 2;
  SpeedupStats one = speedup_stats(trace);
  CHECK(one.k_avg == doctest::Approx(65.0));
  CHECK(one.speedup == doctest::Approx(32.5));

  trace.iterations.resize(3);
  trace.tokens = 18;
  trace.passes = 6;
  SpeedupStats three = speedup_stats(trace);
  CHECK(three.k_avg == doctest::Approx(6.0));
  CHECK(three.speedup == doctest::Approx(3.0));

  DecodeTrace empty;
  CHECK_THROWS_AS(speedup_stats(empty), ValidationError);
}

TEST_CASE("EOS inside the matched prefix stops decoding and discards the rest") {
  // Target: 3 content tokens then EOS; speculate far past it.
  ScriptedModel m({}, {4, 5, 6}, kVocab);
  auto [out, trace] = parallel_decode(m, {}, config(16));
  CHECK(out == Sequence{4, 5, 6, kVocab.eos});
  CHECK(trace.iterations.size() == 1);
  CHECK(trace.iterations[0].hit_eos);
  CHECK(trace.iterations[0].accepted == 4);
}

TEST_CASE("immediate EOS prompt yields a single-token decode") {
  auto m = single_path_model();
  auto [out, trace] = parallel_decode(*m, {3}, config(8));
  CHECK(out == Sequence{kVocab.eos});
  CHECK(trace.iterations.size() == 1);
}

TEST_CASE("max_len truncation matches the AR baseline") {
  Vocabulary v = make_vocab(64);
  // Non-terminating cycle, capped output.
  Sequence target;
  for (int i = 0; i < 500; ++i) target.push_back(i % 64);
  ScriptedModel m({}, target, v);
  auto cfg = config(16, v, 100);
  auto [out, trace] = parallel_decode(m, {}, cfg);
  CHECK(out.size() == 100);
  CHECK(out == ar_decode(m, {}, 100, v));
  CHECK(trace.tokens == 100);
}

TEST_CASE("lossless equivalence across n, noise, correction and models") {
  Vocabulary v = make_vocab(64);
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    StreamKind kind = static_cast<StreamKind>(seed % 4);
    Sequence line = gen_structured_stream(kind, rng::derive(seed, "line", 0), 90, v);
    auto truth = std::make_shared<ScriptedModel>(Sequence{}, line, v);

    std::vector<Sequence> corpus;
    for (std::uint64_t c = 0; c < 6; ++c) {
      corpus.push_back(gen_structured_stream(kind, rng::derive(seed, "corpus", c), 90, v));
    }
    auto drafter = std::make_shared<NgramModel>(build_ngram(corpus, 3, v));
    auto drafted = std::make_shared<DraftedModel>(truth, drafter);

    for (std::size_t n : {0UL, 2UL, 16UL, 64UL}) {
      for (double p : {0.0, 0.3, 1.0}) {
        for (bool corr : {false, true}) {
          std::shared_ptr<const ToyModel> model = drafted;
          if (p > 0) model = wrap_noisy(model, p, rng::derive(seed, "noise", n), v);
          DecodeConfig cfg = config(n, v, 200);
          cfg.accept_correction = corr;
          auto [out, trace] = parallel_decode(*model, {}, cfg);
          CHECK(out == ar_decode(*model, {}, cfg.max_len, v));
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 6 * 4 * 3 * 2);
}

TEST_CASE("accept_correction keeps output identical and adds one token per mismatch") {
  Vocabulary v = make_vocab(64);
  Sequence line = gen_structured_stream(StreamKind::Text, 9, 150, v);
  auto truth = std::make_shared<ScriptedModel>(Sequence{}, line, v);
  auto model = wrap_noisy(truth, 0.4, 3, v);

  DecodeConfig plain = config(16, v);
  DecodeConfig corrected = config(16, v);
  corrected.accept_correction = true;

  auto [out_plain, trace_plain] = parallel_decode(*model, {}, plain);
  auto [out_corr, trace_corr] = parallel_decode(*model, {}, corrected);
  CHECK(out_plain == out_corr);

  // Within the corrected run: accepted == 1 + matched + (1 on mismatch),
  // up to EOS truncation on the final iteration.
  for (std::size_t i = 0; i + 1 < trace_corr.iterations.size(); ++i) {
    const auto& it = trace_corr.iterations[i];
    std::size_t expect = 1 + it.matched_prefix + (it.matched_prefix < corrected.n ? 1 : 0);
    CHECK(it.accepted == expect);
  }
  CHECK(trace_corr.iterations.size() <= trace_plain.iterations.size());
}

TEST_CASE("k_avg never decreases as the slot budget grows") {
  for (StreamKind kind : {StreamKind::Table, StreamKind::Text}) {
    for (double noise : {0.0, 0.2}) {
      double prev = 0.0;
      for (std::size_t n : {0UL, 1UL, 2UL, 16UL, 32UL, 64UL}) {
        DecodeSimConfig cfg;
        cfg.scenario = kind;
        cfg.n = n;
        cfg.noise = noise;
        cfg.seed = 21;
        cfg.trials = 6;
        cfg.line_len = 150;
        DecodeSimResult r = run_decode_sim(cfg);
        CHECK(r.k_avg >= prev);
        prev = r.k_avg;
      }
    }
  }
}

TEST_CASE("acceptance analytics match the geometric closed form") {
  Vocabulary v = make_vocab(64);
  Sequence target;
  for (int i = 0; i < 40000; ++i) target.push_back(i % 64);
  auto inner = std::make_shared<ScriptedModel>(Sequence{}, target, v);
  auto model = wrap_noisy(inner, 0.1, 123, v);

  DecodeConfig cfg = config(64, v, 20000);
  auto [out, trace] = parallel_decode(*model, {}, cfg);
  REQUIRE(trace.iterations.size() > 1000);

  double sum = 0.0;
  std::size_t count = trace.iterations.size() - 1;  // last iteration is cap-truncated
  for (std::size_t i = 0; i < count; ++i) sum += trace.iterations[i].accepted;
  double mean = sum / static_cast<double>(count);

  double expected = 1.0;
  double q = 0.9, pw = 1.0;
  for (int i = 1; i <= 64; ++i) {
    pw *= q;
    expected += pw;
  }
  CHECK(mean == doctest::Approx(expected).epsilon(0.05));
}
