#include "pardoc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pardoc {

void CellMatrix::set(std::size_t i, std::size_t j, std::string value) {
  if (i < 1 || j < 1) throw ValidationError("cell indices are 1-based");
  cells[{i, j}] = std::move(value);
  rows = std::max(rows, i);
  cols = std::max(cols, j);
}

std::optional<std::string> CellMatrix::get(std::size_t i, std::size_t j) const {
  auto it = cells.find({i, j});
  if (it == cells.end()) return std::nullopt;
  return it->second;
}

CellMatrix CellMatrix::transposed() const {
  CellMatrix t;
  t.rows = cols;
  t.cols = rows;
  for (const auto& [pos, value] : cells) t.cells[{pos.second, pos.first}] = value;
  return t;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  if (n == 0) return m;
  if (m == 0) return n;
  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double norm_edit_distance(const std::string& a, const std::string& b) {
  std::size_t denom = std::max(a.size(), b.size());
  if (denom == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(denom);
}

double cell_similarity(const std::optional<std::string>& a, const std::optional<std::string>& p) {
  if (a == p) return 1.0;
  if (!a || !p) return 0.0;
  return 1.0 - norm_edit_distance(*a, *p);
}

namespace {

// Orientation score: how well the candidate's header row explains the
// ground truth's, best match per ground-truth header so column order does
// not matter.
double header_affinity(const CellMatrix& gt, const CellMatrix& cand) {
  if (gt.cols == 0) return 0.0;
  double total = 0.0;
  for (std::size_t j = 1; j <= gt.cols; ++j) {
    auto g = gt.get(1, j);
    double best = 0.0;
    for (std::size_t k = 1; k <= cand.cols; ++k) {
      best = std::max(best, cell_similarity(g, cand.get(1, k)));
    }
    total += best;
  }
  return total / static_cast<double>(gt.cols);
}

// Greedy bipartite matching by descending similarity, lowest index first on
// ties. Returns gt index -> matched candidate index (1-based, 0 = none).
std::vector<std::size_t> greedy_match(const std::vector<std::vector<double>>& sim) {
  std::size_t n = sim.size();
  std::size_t m = n ? sim[0].size() : 0;
  struct Entry {
    double s;
    std::size_t i, j;
  };
  std::vector<Entry> entries;
  entries.reserve(n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) entries.push_back({sim[i][j], i, j});
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.s != b.s) return a.s > b.s;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<std::size_t> match(n, 0);
  std::vector<bool> used_i(n, false), used_j(m, false);
  for (const auto& e : entries) {
    if (used_i[e.i] || used_j[e.j]) continue;
    used_i[e.i] = true;
    used_j[e.j] = true;
    match[e.i] = e.j + 1;
  }
  return match;
}

}  // namespace

double css_score(const CellMatrix& gt, const CellMatrix& pred) {
  if (gt.rows < 2) throw ValidationError("ground-truth table has no data rows");

  // 1. Orientation: keep the prediction or adopt its transpose, whichever
  //    header row lines up better; ties keep it untransposed.
  CellMatrix oriented = pred;
  if (header_affinity(gt, pred.transposed()) > header_affinity(gt, pred)) {
    oriented = pred.transposed();
  }

  // 2. Column alignment on header similarity.
  std::vector<std::vector<double>> col_sim(gt.cols, std::vector<double>(oriented.cols, 0.0));
  for (std::size_t j = 1; j <= gt.cols; ++j)
    for (std::size_t k = 1; k <= oriented.cols; ++k)
      col_sim[j - 1][k - 1] = cell_similarity(gt.get(1, j), oriented.get(1, k));
  std::vector<std::size_t> col_match = greedy_match(col_sim);

  // 3. Data-row alignment on first-column keys; the prediction's key column
  //    is whichever column matched the ground truth's first one.
  std::size_t pred_key_col = gt.cols >= 1 && col_match[0] ? col_match[0] : 1;
  std::size_t gt_data = gt.rows - 1;
  std::size_t pred_data = oriented.rows > 1 ? oriented.rows - 1 : 0;
  std::vector<std::vector<double>> row_sim(gt_data, std::vector<double>(pred_data, 0.0));
  for (std::size_t i = 2; i <= gt.rows; ++i)
    for (std::size_t r = 2; r <= oriented.rows; ++r)
      row_sim[i - 2][r - 2] = cell_similarity(gt.get(i, 1), oriented.get(r, pred_key_col));
  std::vector<std::size_t> row_match = greedy_match(row_sim);

  // 4. Mean similarity over the ground truth's data region.
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 2; i <= gt.rows; ++i) {
    for (std::size_t j = 1; j <= gt.cols; ++j) {
      std::optional<std::string> aligned;
      std::size_t pr = row_match[i - 2];
      std::size_t pc = col_match[j - 1];
      if (pr && pc) aligned = oriented.get(pr + 1, pc);
      total += cell_similarity(gt.get(i, j), aligned);
      ++count;
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

CellMatrix parse_markdown_table(const std::string& text) {
  CellMatrix matrix;
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string trimmed = line.substr(first, last - first + 1);
    if (trimmed.front() != '|') continue;
    // Split on pipes; leading/trailing pipes delimit the row.
    std::vector<std::string> fields;
    std::string field;
    for (std::size_t i = 1; i < trimmed.size(); ++i) {
      if (trimmed[i] == '|') {
        fields.push_back(field);
        field.clear();
      } else {
        field += trimmed[i];
      }
    }
    if (!field.empty()) fields.push_back(field);
    // Trim each field; a row of dashes is the header separator.
    bool separator = !fields.empty();
    for (auto& f : fields) {
      auto b = f.find_first_not_of(" \t");
      auto e = f.find_last_not_of(" \t");
      f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
      if (f.empty() || f.find_first_not_of(":-") != std::string::npos) separator = false;
    }
    if (separator) continue;
    ++row;
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (!fields[j].empty()) matrix.set(row, j + 1, fields[j]);
      matrix.rows = std::max(matrix.rows, row);
      matrix.cols = std::max(matrix.cols, j + 1);
    }
  }
  return matrix;
}

EdgeF1 edge_f1(const DirectedGraph& gt, const DirectedGraph& pred) {
  std::size_t inter = 0;
  for (const auto& e : pred.edges) inter += gt.edges.count(e);
  EdgeF1 out;
  out.precision = static_cast<double>(inter) /
                  static_cast<double>(std::max<std::size_t>(1, pred.edges.size()));
  out.recall = static_cast<double>(inter) /
               static_cast<double>(std::max<std::size_t>(1, gt.edges.size()));
  out.f1 = (out.precision + out.recall) > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

std::vector<double> group_advantage(const std::vector<double>& rewards) {
  if (rewards.empty()) throw ValidationError("reward group must be nonempty");
  std::vector<double> out(rewards.size(), 0.0);
  // Zero variance means all rewards are equal; checking that directly
  // avoids dividing by rounding dust when the mean is inexact.
  bool constant = std::all_of(rewards.begin(), rewards.end(),
                              [&](double r) { return r == rewards.front(); });
  if (constant) return out;
  double n = static_cast<double>(rewards.size());
  double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= n;
  double std_dev = std::sqrt(var);
  for (std::size_t i = 0; i < rewards.size(); ++i) out[i] = (rewards[i] - mean) / std_dev;
  return out;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  int ix1 = std::max(a.x1, b.x1), iy1 = std::max(a.y1, b.y1);
  int ix2 = std::min(a.x2, b.x2), iy2 = std::min(a.y2, b.y2);
  double inter = static_cast<double>(std::max(0, ix2 - ix1)) * std::max(0, iy2 - iy1);
  double area_a = static_cast<double>(a.x2 - a.x1) * (a.y2 - a.y1);
  double area_b = static_cast<double>(b.x2 - b.x1) * (b.y2 - b.y1);
  double uni = area_a + area_b - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace pardoc
