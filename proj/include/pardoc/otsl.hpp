#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pardoc/errors.hpp"

namespace pardoc {

enum class OtslTag {
  Fcel,  // new cell with content
  Ecel,  // new empty cell
  Lcel,  // merged into the cell on the left
  Ucel,  // merged into the cell above
  Xcel,  // merged into the cell up-left (2-D span interior)
  Nl,    // row break
};

struct OtslToken {
  OtslTag tag = OtslTag::Ecel;
  std::string content;  // only meaningful for Fcel

  bool operator==(const OtslToken&) const = default;
};

struct TableCell {
  std::size_t row = 0, col = 0;          // anchor position
  std::size_t rowspan = 1, colspan = 1;
  std::string content;

  bool operator==(const TableCell&) const = default;
};

struct TableGrid {
  std::size_t rows = 0, cols = 0;
  std::vector<TableCell> cells;  // anchor cells in row-major order

  bool operator==(const TableGrid&) const = default;
};

// Generic labeled tree; the table form is TABLE -> ROW* -> CELL*.
struct TableTree {
  enum class Tag { Table, Row, Cell };
  Tag tag = Tag::Table;
  std::size_t rowspan = 1, colspan = 1;  // CELL attributes
  std::string content;                   // CELL text
  std::vector<TableTree> children;
};

std::size_t tree_size(const TableTree& tree);

// Resolves span tokens into a rectangular grid; any inconsistency (left
// merge in column 0, up merge in row 0, disagreeing neighbors, ragged rows,
// spans that fail to tile) raises StructureError naming the token index.
TableGrid parse_otsl(const std::vector<OtslToken>& tokens);

// Canonical emission; parse_otsl(grid_to_otsl(g)) == g, and empty cell
// content always serializes as ecel.
std::vector<OtslToken> grid_to_otsl(const TableGrid& grid);

// <table><tr><td ...> markup, span attributes only when > 1, content
// escaped; byte-stable for a given grid.
std::string grid_to_html(const TableGrid& grid);

TableTree grid_to_tree(const TableGrid& grid);

// Text form: whitespace-separated lowercase tags, fcel followed by its
// content in double quotes with backslash escaping.
std::string otsl_to_text(const std::vector<OtslToken>& tokens);
std::vector<OtslToken> otsl_from_text(const std::string& text);

std::string grid_to_json(const TableGrid& grid);

}  // namespace pardoc
