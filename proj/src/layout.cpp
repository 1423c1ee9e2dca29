#include "pardoc/layout.hpp"

#include <fstream>

#include <json.hpp>

namespace pardoc {

LayoutCategory parse_layout_category(const std::string& name) {
  if (name == "TEXT") return LayoutCategory::Text;
  if (name == "TITLE") return LayoutCategory::Title;
  if (name == "TABLE") return LayoutCategory::Table;
  if (name == "FIGURE") return LayoutCategory::Figure;
  if (name == "CHART_DATA") return LayoutCategory::ChartData;
  if (name == "CHART_LOGIC") return LayoutCategory::ChartLogic;
  if (name == "SEAL") return LayoutCategory::Seal;
  if (name == "HEADER_FIGURE") return LayoutCategory::HeaderFigure;
  if (name == "FOOTER_FIGURE") return LayoutCategory::FooterFigure;
  // Aliases folded into TEXT.
  if (name == "FORMULA" || name == "HEADER" || name == "FOOTER" || name == "CAPTION" ||
      name == "CODE") {
    return LayoutCategory::Text;
  }
  throw ValidationError("unknown layout category: " + name);
}

std::string to_string(LayoutCategory category) {
  switch (category) {
    case LayoutCategory::Text: return "TEXT";
    case LayoutCategory::Title: return "TITLE";
    case LayoutCategory::Table: return "TABLE";
    case LayoutCategory::Figure: return "FIGURE";
    case LayoutCategory::ChartData: return "CHART_DATA";
    case LayoutCategory::ChartLogic: return "CHART_LOGIC";
    case LayoutCategory::Seal: return "SEAL";
    case LayoutCategory::HeaderFigure: return "HEADER_FIGURE";
    case LayoutCategory::FooterFigure: return "FOOTER_FIGURE";
  }
  throw ValidationError("unknown layout category");
}

std::vector<LayoutElement> load_layout_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open layout file: " + path);
  std::vector<LayoutElement> elements;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad layout JSON: ") + e.what(), lineno);
    }
    LayoutElement e;
    try {
      e.id = j.at("id").get<std::string>();
      auto bbox = j.at("bbox");
      e.box = BoundingBox{bbox.at(0).get<int>(), bbox.at(1).get<int>(), bbox.at(2).get<int>(),
                          bbox.at(3).get<int>()};
      e.category = parse_layout_category(j.at("category").get<std::string>());
      e.page = j.value("page", 0);
    } catch (const nlohmann::json::exception& e2) {
      throw ParseError(std::string("bad layout element: ") + e2.what(), lineno);
    }
    e.box.require_valid();
    elements.push_back(std::move(e));
  }
  return elements;
}

void save_layout_jsonl(const std::string& path, const std::vector<LayoutElement>& elements) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write layout file: " + path);
  for (const auto& e : elements) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["bbox"] = {e.box.x1, e.box.y1, e.box.x2, e.box.y2};
    j["category"] = to_string(e.category);
    j["page"] = e.page;
    out << j.dump() << '\n';
  }
}

}  // namespace pardoc
