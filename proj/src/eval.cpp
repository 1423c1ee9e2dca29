#include "pardoc/eval.hpp"

#include <fstream>
#include <map>
#include <set>

#include "pardoc/metrics.hpp"
#include "pardoc/sim.hpp"

namespace pardoc {

namespace {

std::vector<BoundingBox> boxes_from_json(const nlohmann::json& j) {
  std::vector<BoundingBox> boxes;
  for (const auto& b : j) {
    boxes.push_back({b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                     b.at(3).get<int>()});
  }
  return boxes;
}

std::map<std::string, double> score_pair(const std::string& task, const nlohmann::json& gt,
                                         const nlohmann::json& pred) {
  std::map<std::string, double> scores;
  if (task == "text" || task == "seal") {
    double ned = norm_edit_distance(gt.get<std::string>(), pred.get<std::string>());
    scores["edit_distance"] = ned;
    scores["similarity"] = 1.0 - ned;
  } else if (task == "table") {
    auto gt_tokens = otsl_from_text(gt.get<std::string>());
    auto pred_tokens = otsl_from_text(pred.get<std::string>());
    RewardBreakdown r = table_reward(pred_tokens, gt_tokens);
    scores["lev"] = r.components.at("lev");
    scores["teds"] = r.components.at("teds");
    double teds_s = 0.0;
    try {
      teds_s = teds(grid_to_tree(parse_otsl(gt_tokens)), grid_to_tree(parse_otsl(pred_tokens)),
                    true);
    } catch (const Error&) {
    }
    scores["teds_s"] = teds_s;
    scores["total"] = r.total;
  } else if (task == "chart_data") {
    scores["css"] = css_score(parse_markdown_table(gt.get<std::string>()),
                              parse_markdown_table(pred.get<std::string>()));
  } else if (task == "chart_logic") {
    EdgeF1 f = edge_f1(parse_mermaid_edges(gt.get<std::string>()),
                       parse_mermaid_edges(pred.get<std::string>()));
    scores["precision"] = f.precision;
    scores["recall"] = f.recall;
    scores["f1"] = f.f1;
  } else if (task == "formula") {
    RewardBreakdown r = formula_reward(pred.get<std::string>(), gt.get<std::string>());
    for (const auto& [name, value] : r.components) scores[name] = value;
    scores["total"] = r.total;
  } else if (task == "layout") {
    RewardBreakdown r = layout_reward(boxes_from_json(pred), boxes_from_json(gt));
    for (const auto& [name, value] : r.components) scores[name] = value;
    scores["total"] = r.total;
  } else {
    throw ValidationError("unknown eval task: " + task);
  }
  return scores;
}

}  // namespace

nlohmann::ordered_json run_eval(const std::string& task, const std::string& pairs_path) {
  static const std::set<std::string> kTasks{"text",    "table",  "chart_data", "chart_logic",
                                            "formula", "layout", "seal"};
  if (!kTasks.count(task)) throw ValidationError("unknown eval task: " + task);
  std::ifstream in(pairs_path);
  if (!in) throw ValidationError("cannot open pairs file: " + pairs_path);

  nlohmann::ordered_json report;
  report["tool_version"] = kToolVersion;
  report["format_version"] = kReportFormatVersion;
  report["config"] = {{"command", "eval"}, {"task", task}, {"pairs", pairs_path}};

  auto per_id = nlohmann::ordered_json::array();
  std::map<std::string, double> sums;
  std::size_t count = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad pair JSON: ") + e.what(), lineno);
    }
    std::string pair_task = j.value("task", task);
    if (pair_task != task) continue;
    auto scores = score_pair(task, j.at("gt"), j.at("pred"));
    nlohmann::ordered_json row;
    row["id"] = j.at("id").get<std::string>();
    for (const auto& [name, value] : scores) {
      row[name] = value;
      sums[name] += value;
    }
    per_id.push_back(std::move(row));
    ++count;
  }

  report["per_id"] = per_id;
  nlohmann::ordered_json agg;
  agg["count"] = count;
  for (const auto& [name, total] : sums) {
    agg["mean_" + name] = count ? total / static_cast<double>(count) : 0.0;
  }
  report["aggregate"] = agg;
  return report;
}

}  // namespace pardoc
