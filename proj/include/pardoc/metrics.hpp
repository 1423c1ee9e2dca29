#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pardoc/layout.hpp"
#include "pardoc/otsl.hpp"

namespace pardoc {

// 1-based sparse cell matrix; absent entries denote missing cells.
struct CellMatrix {
  std::size_t rows = 0, cols = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::string> cells;

  void set(std::size_t i, std::size_t j, std::string value);
  std::optional<std::string> get(std::size_t i, std::size_t j) const;
  CellMatrix transposed() const;
};

struct DirectedGraph {
  std::set<std::pair<std::string, std::string>> edges;
  std::size_t skipped_lines = 0;  // unparseable input lines (diagnostics only)
};

struct EdgeF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct RewardBreakdown {
  double total = 0.0;
  std::map<std::string, double> components;
};

std::size_t levenshtein(const std::string& a, const std::string& b);

// Levenshtein(a, b) / max(|a|, |b|); 0 when both empty.
double norm_edit_distance(const std::string& a, const std::string& b);

// Three-case cell similarity: equal (including both missing) -> 1, exactly
// one missing -> 0, otherwise 1 - normalized edit distance.
double cell_similarity(const std::optional<std::string>& a, const std::optional<std::string>& p);

// Orientation detection against the prediction and its transpose, greedy
// header/key alignment of columns and data rows, then mean cell similarity
// over the ground truth's data region (rows 2..R, all columns).
double css_score(const CellMatrix& gt, const CellMatrix& pred);

// Pipe-table parsing ("| a | b |" rows, separator rows skipped); empty
// cells become missing entries.
CellMatrix parse_markdown_table(const std::string& text);

// Extracts directed edges from flowchart markup: graph/flowchart headers,
// A[Label] / A(Label) / A{Label} declarations, plain and |labeled| arrows.
// Node identifiers resolve to their declared display labels; labels are
// trimmed, whitespace-collapsed, lowercased and quote-stripped. Lines that
// parse as nothing are skipped and tallied.
DirectedGraph parse_mermaid_edges(const std::string& text);

EdgeF1 edge_f1(const DirectedGraph& gt, const DirectedGraph& pred);

// Tree-edit-distance similarity between table trees: unit insert/delete,
// cell relabel costs 1 on span mismatch and the content edit distance
// otherwise (0 in structure_only mode).
double teds(const TableTree& gt, const TableTree& pred, bool structure_only = false);

// Optimal-assignment IoU reward over bounding boxes; syntactically invalid
// predictions are dropped but still penalized through the denominator.
RewardBreakdown layout_reward(const std::vector<BoundingBox>& pred,
                              const std::vector<BoundingBox>& gt);

// Mean of token-stream Levenshtein similarity and TEDS; an unparseable
// prediction zeroes the TEDS component, an unparseable ground truth is an
// error.
RewardBreakdown table_reward(const std::vector<OtslToken>& pred, const std::vector<OtslToken>& gt);

// Mean of character similarity, skeleton similarity (alphanumeric runs
// abstracted to "v"), symbol-set Jaccard overlap and delimiter-balance
// agreement.
RewardBreakdown formula_reward(const std::string& pred, const std::string& gt);

std::string skeletonize_formula(const std::string& text);
std::set<std::string> formula_symbols(const std::string& text);

// Group-relative advantages: (r - mean) / population std, all zeros when
// the group has no variance.
std::vector<double> group_advantage(const std::vector<double>& rewards);

double iou(const BoundingBox& a, const BoundingBox& b);

}  // namespace pardoc
