#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pardoc/errors.hpp"

namespace pardoc {

// Normalized thousandth-of-page coordinate bins.
struct BoundingBox {
  int x1 = 0, y1 = 0, x2 = 0, y2 = 0;

  bool valid() const {
    return x1 >= 0 && y1 >= 0 && x2 <= 999 && y2 <= 999 && x1 < x2 && y1 < y2;
  }
  void require_valid() const {
    if (!valid()) {
      throw ValidationError("invalid bounding box [" + std::to_string(x1) + "," +
                            std::to_string(y1) + "," + std::to_string(x2) + "," +
                            std::to_string(y2) + "]");
    }
  }
  bool operator==(const BoundingBox&) const = default;
};

enum class LayoutCategory {
  Text,
  Title,
  Table,
  Figure,
  ChartData,
  ChartLogic,
  Seal,
  HeaderFigure,
  FooterFigure,
};

// Accepts the canonical nine categories plus the aliases that fold into
// TEXT (FORMULA, HEADER, FOOTER, CAPTION, CODE).
LayoutCategory parse_layout_category(const std::string& name);
std::string to_string(LayoutCategory category);

struct LayoutElement {
  std::string id;
  BoundingBox box;
  LayoutCategory category = LayoutCategory::Text;
  int page = 0;
};

// JSON Lines, one element per line:
// {"id": str, "bbox": [x1,y1,x2,y2], "category": str, "page": int}
std::vector<LayoutElement> load_layout_jsonl(const std::string& path);
void save_layout_jsonl(const std::string& path, const std::vector<LayoutElement>& elements);

}  // namespace pardoc
