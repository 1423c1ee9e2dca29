#include "pardoc/otsl.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

namespace pardoc {

namespace {

[[noreturn]] void structural(std::size_t token_index, const std::string& what) {
  throw StructureError("otsl token " + std::to_string(token_index) + ": " + what);
}

std::string escape_html(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::size_t tree_size(const TableTree& tree) {
  std::size_t n = 1;
  for (const auto& child : tree.children) n += tree_size(child);
  return n;
}

TableGrid parse_otsl(const std::vector<OtslToken>& tokens) {
  if (tokens.empty()) throw ValidationError("empty otsl stream");

  // coverage[r][c] = index into cells of the owning anchor.
  std::vector<std::vector<std::size_t>> coverage;
  std::vector<TableCell> cells;
  std::vector<std::size_t> current;
  std::size_t row = 0;
  std::size_t width = 0;  // fixed by the first row

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    std::size_t col = current.size();
    switch (tok.tag) {
      case OtslTag::Fcel:
      case OtslTag::Ecel: {
        if (row > 0 && col >= width) structural(i, "row wider than the first row");
        cells.push_back({row, col, 1, 1, tok.tag == OtslTag::Fcel ? tok.content : ""});
        current.push_back(cells.size() - 1);
        break;
      }
      case OtslTag::Lcel: {
        if (col == 0) structural(i, "left merge with no cell on the left");
        if (row > 0 && col >= width) structural(i, "row wider than the first row");
        std::size_t idx = current[col - 1];
        TableCell& left = cells[idx];
        if (left.row != row) structural(i, "left merge into a cell anchored on another row");
        left.colspan = col - left.col + 1;
        current.push_back(idx);
        break;
      }
      case OtslTag::Ucel: {
        if (row == 0) structural(i, "up merge with no row above");
        if (col >= width) structural(i, "row wider than the first row");
        std::size_t idx = coverage[row - 1][col];
        TableCell& up = cells[idx];
        if (up.col != col) structural(i, "up merge into a cell anchored on another column");
        up.rowspan = row - up.row + 1;
        current.push_back(idx);
        break;
      }
      case OtslTag::Xcel: {
        if (row == 0 || col == 0) structural(i, "2-D merge needs both neighbors");
        if (col >= width) structural(i, "row wider than the first row");
        std::size_t left_idx = current[col - 1];
        std::size_t up_idx = coverage[row - 1][col];
        if (left_idx != up_idx) structural(i, "2-D merge with disagreeing neighbors");
        TableCell& cell = cells[left_idx];
        cell.rowspan = std::max(cell.rowspan, row - cell.row + 1);
        cell.colspan = std::max(cell.colspan, col - cell.col + 1);
        current.push_back(left_idx);
        break;
      }
      case OtslTag::Nl: {
        if (current.empty()) structural(i, "empty row");
        if (row == 0) {
          width = current.size();
        } else if (current.size() != width) {
          structural(i, "ragged row: got " + std::to_string(current.size()) + " columns, expected " +
                            std::to_string(width));
        }
        coverage.push_back(std::move(current));
        current.clear();
        ++row;
        break;
      }
    }
  }
  if (!current.empty()) {
    structural(tokens.size() - 1, "stream does not end with a row break");
  }

  TableGrid grid;
  grid.rows = coverage.size();
  grid.cols = width;
  grid.cells = std::move(cells);

  // Spans must exactly reproduce the incremental coverage, otherwise some
  // merge claimed territory another token assigned elsewhere.
  for (std::size_t idx = 0; idx < grid.cells.size(); ++idx) {
    const auto& cell = grid.cells[idx];
    if (cell.row + cell.rowspan > grid.rows || cell.col + cell.colspan > grid.cols) {
      throw StructureError("cell span exceeds grid bounds");
    }
    for (std::size_t r = cell.row; r < cell.row + cell.rowspan; ++r) {
      for (std::size_t c = cell.col; c < cell.col + cell.colspan; ++c) {
        if (coverage[r][c] != idx) {
          throw StructureError("cell spans do not tile the grid");
        }
      }
    }
  }
  std::size_t area = 0;
  for (const auto& cell : grid.cells) area += cell.rowspan * cell.colspan;
  if (area != grid.rows * grid.cols) throw StructureError("cell spans do not tile the grid");

  return grid;
}

std::vector<OtslToken> grid_to_otsl(const TableGrid& grid) {
  std::vector<std::vector<const TableCell*>> coverage(
      grid.rows, std::vector<const TableCell*>(grid.cols, nullptr));
  for (const auto& cell : grid.cells) {
    for (std::size_t r = cell.row; r < cell.row + cell.rowspan; ++r) {
      for (std::size_t c = cell.col; c < cell.col + cell.colspan; ++c) {
        coverage.at(r).at(c) = &cell;
      }
    }
  }
  std::vector<OtslToken> tokens;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    for (std::size_t c = 0; c < grid.cols; ++c) {
      const TableCell* cell = coverage[r][c];
      if (!cell) throw StructureError("grid has an uncovered position");
      if (cell->row == r && cell->col == c) {
        if (cell->content.empty()) {
          tokens.push_back({OtslTag::Ecel, ""});
        } else {
          tokens.push_back({OtslTag::Fcel, cell->content});
        }
      } else if (cell->row == r) {
        tokens.push_back({OtslTag::Lcel, ""});
      } else if (cell->col == c) {
        tokens.push_back({OtslTag::Ucel, ""});
      } else {
        tokens.push_back({OtslTag::Xcel, ""});
      }
    }
    tokens.push_back({OtslTag::Nl, ""});
  }
  return tokens;
}

namespace {

std::vector<const TableCell*> anchors_in_order(const TableGrid& grid) {
  std::vector<const TableCell*> ordered;
  ordered.reserve(grid.cells.size());
  for (const auto& cell : grid.cells) ordered.push_back(&cell);
  std::sort(ordered.begin(), ordered.end(), [](const TableCell* a, const TableCell* b) {
    return a->row != b->row ? a->row < b->row : a->col < b->col;
  });
  return ordered;
}

}  // namespace

std::string grid_to_html(const TableGrid& grid) {
  auto ordered = anchors_in_order(grid);
  std::string html = "<table>";
  for (std::size_t r = 0; r < grid.rows; ++r) {
    html += "<tr>";
    for (const TableCell* cellp : ordered) {
      const TableCell& cell = *cellp;
      if (cell.row != r) continue;
      html += "<td";
      if (cell.rowspan > 1) html += " rowspan=\"" + std::to_string(cell.rowspan) + "\"";
      if (cell.colspan > 1) html += " colspan=\"" + std::to_string(cell.colspan) + "\"";
      html += ">";
      html += escape_html(cell.content);
      html += "</td>";
    }
    html += "</tr>";
  }
  html += "</table>";
  return html;
}

TableTree grid_to_tree(const TableGrid& grid) {
  auto ordered = anchors_in_order(grid);
  TableTree root;
  root.tag = TableTree::Tag::Table;
  for (std::size_t r = 0; r < grid.rows; ++r) {
    TableTree row;
    row.tag = TableTree::Tag::Row;
    for (const TableCell* cellp : ordered) {
      const TableCell& cell = *cellp;
      if (cell.row != r) continue;
      TableTree node;
      node.tag = TableTree::Tag::Cell;
      node.rowspan = cell.rowspan;
      node.colspan = cell.colspan;
      node.content = cell.content;
      row.children.push_back(std::move(node));
    }
    root.children.push_back(std::move(row));
  }
  return root;
}

std::string otsl_to_text(const std::vector<OtslToken>& tokens) {
  std::string out;
  bool line_start = true;
  for (const auto& tok : tokens) {
    if (!line_start) out += ' ';
    switch (tok.tag) {
      case OtslTag::Fcel: {
        out += "fcel \"";
        for (char c : tok.content) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
        break;
      }
      case OtslTag::Ecel: out += "ecel"; break;
      case OtslTag::Lcel: out += "lcel"; break;
      case OtslTag::Ucel: out += "ucel"; break;
      case OtslTag::Xcel: out += "xcel"; break;
      case OtslTag::Nl: out += "nl"; break;
    }
    if (tok.tag == OtslTag::Nl) {
      out += '\n';
      line_start = true;
    } else {
      line_start = false;
    }
  }
  return out;
}

std::vector<OtslToken> otsl_from_text(const std::string& text) {
  std::vector<OtslToken> tokens;
  std::size_t i = 0;
  std::size_t item = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                               text[i] == '\r')) {
      ++i;
    }
  };
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    ++item;
    std::size_t start = i;
    while (i < text.size() && !isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string word = text.substr(start, i - start);
    if (word == "ecel")
      tokens.push_back({OtslTag::Ecel, ""});
    else if (word == "lcel")
      tokens.push_back({OtslTag::Lcel, ""});
    else if (word == "ucel")
      tokens.push_back({OtslTag::Ucel, ""});
    else if (word == "xcel")
      tokens.push_back({OtslTag::Xcel, ""});
    else if (word == "nl")
      tokens.push_back({OtslTag::Nl, ""});
    else if (word == "fcel") {
      skip_ws();
      if (i >= text.size() || text[i] != '"') throw ParseError("fcel without quoted content", item);
      ++i;
      std::string content;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        content += text[i++];
      }
      if (i >= text.size()) throw ParseError("unterminated fcel content", item);
      ++i;  // closing quote
      tokens.push_back({OtslTag::Fcel, std::move(content)});
    } else {
      throw ParseError("unknown otsl token '" + word + "'", item);
    }
  }
  return tokens;
}

std::string grid_to_json(const TableGrid& grid) {
  nlohmann::ordered_json j;
  j["rows"] = grid.rows;
  j["cols"] = grid.cols;
  j["cells"] = nlohmann::ordered_json::array();
  for (const auto& cell : grid.cells) {
    j["cells"].push_back({{"row", cell.row},
                          {"col", cell.col},
                          {"rowspan", cell.rowspan},
                          {"colspan", cell.colspan},
                          {"content", cell.content}});
  }
  return j.dump(2);
}

}  // namespace pardoc
