#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pardoc/corpus.hpp"
#include "pardoc/eval.hpp"
#include "pardoc/hierarchy.hpp"
#include "pardoc/otsl.hpp"
#include "pardoc/rng.hpp"
#include "pardoc/sim.hpp"
#include "pardoc/tokens.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pardoc::ValidationError("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pardoc::ValidationError("cannot write file: " + path);
  out << content;
}

void write_report(const ordered_json& report, const std::string& path, const std::string& format) {
  std::string body =
      format == "markdown" ? pardoc::report_to_markdown(report) : report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << body;
  } else {
    write_file(path, body);
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PARDOC_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel decoding simulator and document-structure evaluation toolkit"};
  app.set_version_flag("--version", std::string("pardoc ") + pardoc::kToolVersion +
                                        " (report format " +
                                        std::to_string(pardoc::kReportFormatVersion) + ")");
  app.require_subcommand(1);

  std::string report_path;
  std::string format = "json";

  // --- decode-sim -----------------------------------------------------------
  auto* decode_cmd = app.add_subcommand("decode-sim", "Token-parallel decoding simulation");
  pardoc::DecodeSimConfig dcfg;
  dcfg.seed = default_seed();
  std::string scenario = "table";
  decode_cmd->add_option("--n", dcfg.n, "mask slots per iteration")->check(CLI::Range(0, 64));
  decode_cmd->add_flag("--accept-correction", dcfg.accept_correction,
                       "also accept the verifier's token at the first mismatch");
  decode_cmd->add_option("--noise", dcfg.noise, "candidate corruption probability")
      ->check(CLI::Range(0.0, 1.0));
  decode_cmd->add_option("--seed", dcfg.seed, "master seed");
  decode_cmd->add_option("--scenario", scenario, "stream kind")
      ->check(CLI::IsMember({"table", "formula", "chart", "text"}));
  decode_cmd->add_option("--trials", dcfg.trials, "independent decodes");
  decode_cmd->add_option("--len", dcfg.line_len, "content tokens per line");
  decode_cmd->add_option("--report", report_path, "report output path");
  decode_cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "markdown"}));

  // --- query-sim ------------------------------------------------------------
  auto* query_cmd = app.add_subcommand("query-sim", "Batched region-query simulation");
  pardoc::QuerySimConfig qcfg;
  qcfg.seed = default_seed();
  std::string layout_path;
  std::size_t synth_count = 0;
  query_cmd->add_option("--layout", layout_path, "layout elements JSONL");
  query_cmd->add_option("--synth", synth_count, "generate a synthetic page of N short elements");
  query_cmd->add_option("--m", qcfg.m, "elements per batch")->check(CLI::Range(1, 5));
  query_cmd->add_option("--n", qcfg.n, "mask slots per iteration");
  query_cmd->add_option("--seed", qcfg.seed, "master seed");
  query_cmd->add_option("--overhead", qcfg.call_overhead, "pass-equivalents charged per call");
  query_cmd->add_option("--report", report_path, "report output path");
  query_cmd->add_option("--format", format, "report format: json|markdown");

  // --- hier -----------------------------------------------------------------
  auto* hier_cmd = app.add_subcommand("hier", "Relational markup utilities");
  hier_cmd->require_subcommand(1);
  std::string hier_in, hier_out, hier_elements;
  auto* hier_parse = hier_cmd->add_subcommand("parse", "relations + elements -> tree JSON");
  auto* hier_linearize = hier_cmd->add_subcommand("linearize", "tree JSON -> relations");
  auto* hier_roundtrip =
      hier_cmd->add_subcommand("roundtrip", "relations -> tree -> canonical relations");
  for (auto* sub : {hier_parse, hier_linearize, hier_roundtrip}) {
    sub->add_option("--in", hier_in, "input path")->required();
    sub->add_option("--out", hier_out, "output path (default stdout)");
  }
  hier_parse->add_option("--elements", hier_elements, "elements JSONL (reading order)")->required();
  hier_roundtrip->add_option("--elements", hier_elements, "elements JSONL (reading order)")
      ->required();

  // --- otsl -----------------------------------------------------------------
  auto* otsl_cmd = app.add_subcommand("otsl", "Table-structure language utilities");
  otsl_cmd->require_subcommand(1);
  std::string otsl_in, otsl_out;
  auto* otsl_parse = otsl_cmd->add_subcommand("parse", "token stream -> grid JSON");
  auto* otsl_html = otsl_cmd->add_subcommand("to-html", "token stream -> HTML table");
  auto* otsl_roundtrip = otsl_cmd->add_subcommand("roundtrip", "parse then re-emit, verify identity");
  for (auto* sub : {otsl_parse, otsl_html, otsl_roundtrip}) {
    sub->add_option("--in", otsl_in, "input path")->required();
    sub->add_option("--out", otsl_out, "output path (default stdout)");
  }

  // --- eval -----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Score gt/pred pairs for one task");
  std::string eval_task, eval_pairs;
  eval_cmd->add_option("--task", eval_task, "metric task")
      ->required()
      ->check(CLI::IsMember(
          {"text", "table", "chart_data", "chart_logic", "formula", "layout", "seal"}));
  eval_cmd->add_option("--pairs", eval_pairs, "pairs JSONL path")->required();
  eval_cmd->add_option("--report", report_path, "report output path");
  eval_cmd->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "markdown"}));

  // --- bench ----------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "Scenario sweep + cost-model consistency report");
  std::uint64_t bench_seed = default_seed();
  bench_cmd->add_option("--seed", bench_seed, "master seed");
  bench_cmd->add_option("--report", report_path, "report output path");
  bench_cmd->add_option("--format", format, "report format: json|markdown");

  // --- gen ------------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "Generate structured corpus lines");
  std::string gen_kind = "table", gen_out;
  std::uint64_t gen_seed = default_seed();
  std::size_t gen_len = 64, gen_count = 1;
  int gen_vocab = 64;
  gen_cmd->add_option("--kind", gen_kind, "table|formula|chart|text");
  gen_cmd->add_option("--seed", gen_seed, "master seed");
  gen_cmd->add_option("--len", gen_len, "content tokens per line");
  gen_cmd->add_option("--count", gen_count, "number of lines");
  gen_cmd->add_option("--vocab", gen_vocab, "ordinary vocabulary size");
  gen_cmd->add_option("--out", gen_out, "corpus output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (*decode_cmd) {
      dcfg.scenario = pardoc::parse_stream_kind(scenario);
      auto result = pardoc::run_decode_sim(dcfg);
      write_report(pardoc::decode_sim_report(dcfg, result), report_path, format);
    } else if (*query_cmd) {
      if (layout_path.empty() == (synth_count == 0)) {
        std::cerr << "query-sim needs exactly one of --layout or --synth\n";
        return 2;
      }
      auto elements = synth_count ? pardoc::make_synthetic_page(synth_count, qcfg.seed)
                                  : pardoc::load_layout_jsonl(layout_path);
      auto result = pardoc::run_query_sim(qcfg, elements);
      write_report(pardoc::query_sim_report(qcfg, result), report_path, format);
    } else if (*hier_parse) {
      auto elements = pardoc::load_elements_jsonl(hier_elements);
      auto relations = pardoc::parse_relations(read_file(hier_in));
      auto tree = pardoc::build_tree(elements, relations);
      write_file(hier_out.empty() ? "-" : hier_out, pardoc::tree_to_json(tree) + "\n");
    } else if (*hier_linearize) {
      auto tree = pardoc::tree_from_json(read_file(hier_in));
      write_file(hier_out.empty() ? "-" : hier_out,
                 pardoc::format_relations(pardoc::linearize(tree)));
    } else if (*hier_roundtrip) {
      auto elements = pardoc::load_elements_jsonl(hier_elements);
      auto relations = pardoc::parse_relations(read_file(hier_in));
      auto tree = pardoc::build_tree(elements, relations);
      write_file(hier_out.empty() ? "-" : hier_out,
                 pardoc::format_relations(pardoc::linearize(tree)));
    } else if (*otsl_parse) {
      auto grid = pardoc::parse_otsl(pardoc::otsl_from_text(read_file(otsl_in)));
      write_file(otsl_out.empty() ? "-" : otsl_out, pardoc::grid_to_json(grid) + "\n");
    } else if (*otsl_html) {
      auto grid = pardoc::parse_otsl(pardoc::otsl_from_text(read_file(otsl_in)));
      write_file(otsl_out.empty() ? "-" : otsl_out, pardoc::grid_to_html(grid) + "\n");
    } else if (*otsl_roundtrip) {
      auto tokens = pardoc::otsl_from_text(read_file(otsl_in));
      auto again = pardoc::grid_to_otsl(pardoc::parse_otsl(tokens));
      std::string text = pardoc::otsl_to_text(again);
      write_file(otsl_out.empty() ? "-" : otsl_out, text);
      if (again != tokens) {
        std::cerr << "roundtrip: input was not canonical; canonical form written\n";
        return 1;
      }
    } else if (*eval_cmd) {
      write_report(pardoc::run_eval(eval_task, eval_pairs), report_path, format);
    } else if (*bench_cmd) {
      write_report(pardoc::run_bench(bench_seed), report_path, format);
    } else if (*gen_cmd) {
      auto vocab = pardoc::make_vocab(gen_vocab);
      auto kind = pardoc::parse_stream_kind(gen_kind);
      std::vector<pardoc::Sequence> corpus;
      for (std::size_t i = 0; i < gen_count; ++i) {
        corpus.push_back(pardoc::gen_structured_stream(
            kind, pardoc::rng::derive(gen_seed, "corpus", i), gen_len, vocab));
      }
      if (gen_out.empty()) {
        for (const auto& line : corpus) std::cout << pardoc::render_sequence(line, vocab) << "\n";
      } else {
        pardoc::save_corpus(gen_out, corpus);
      }
    }
  } catch (const pardoc::Error& e) {
    ordered_json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    ordered_json err{{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
