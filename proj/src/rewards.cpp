#include <algorithm>
#include <cctype>
#include <limits>

#include "pardoc/metrics.hpp"

namespace pardoc {
namespace {

// Assignment minimizing total cost over a square matrix, potentials method.
// Returns row -> assigned column.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  std::size_t n = cost.size();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // column -> row (1-based)
  std::vector<std::size_t> way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      std::size_t i0 = match[j0], j1 = 0;
      double delta = std::numeric_limits<double>::infinity();
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (match[j]) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

RewardBreakdown layout_reward(const std::vector<BoundingBox>& pred,
                              const std::vector<BoundingBox>& gt) {
  std::vector<BoundingBox> valid_pred, valid_gt;
  for (const auto& b : pred)
    if (b.valid()) valid_pred.push_back(b);
  for (const auto& b : gt)
    if (b.valid()) valid_gt.push_back(b);

  double matched = 0.0;
  if (!valid_pred.empty() && !valid_gt.empty()) {
    std::size_t n = std::max(valid_pred.size(), valid_gt.size());
    std::vector<std::vector<double>> cost(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < valid_pred.size(); ++i)
      for (std::size_t j = 0; j < valid_gt.size(); ++j)
        cost[i][j] = 1.0 - iou(valid_pred[i], valid_gt[j]);
    auto assignment = hungarian(cost);
    for (std::size_t i = 0; i < valid_pred.size(); ++i) {
      if (assignment[i] < valid_gt.size()) matched += iou(valid_pred[i], valid_gt[assignment[i]]);
    }
  }

  // The original counts stay in the denominator so dropped (syntactically
  // invalid) predictions still cost reward.
  std::size_t denom = std::max(pred.size(), gt.size());
  RewardBreakdown out;
  out.components["iou"] = denom ? matched / static_cast<double>(denom) : 1.0;
  out.components["valid_fraction"] =
      pred.empty() ? 1.0 : static_cast<double>(valid_pred.size()) / static_cast<double>(pred.size());
  out.total = out.components["iou"];
  return out;
}

RewardBreakdown table_reward(const std::vector<OtslToken>& pred, const std::vector<OtslToken>& gt) {
  TableTree gt_tree;
  try {
    gt_tree = grid_to_tree(parse_otsl(gt));
  } catch (const Error&) {
    throw ValidationError("table reward needs a well-formed ground truth");
  }

  RewardBreakdown out;
  out.components["lev"] = 1.0 - norm_edit_distance(otsl_to_text(pred), otsl_to_text(gt));
  double teds_score = 0.0;  // structural hallucinations score zero here
  try {
    teds_score = teds(gt_tree, grid_to_tree(parse_otsl(pred)), false);
  } catch (const Error&) {
  }
  out.components["teds"] = teds_score;
  out.total = 0.5 * out.components["lev"] + 0.5 * out.components["teds"];
  return out;
}

std::string skeletonize_formula(const std::string& text) {
  std::string out;
  std::size_t i = 0;
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  while (i < text.size()) {
    if (text[i] == '\\') {
      // Keep the command name verbatim.
      out += text[i++];
      while (i < text.size() && alnum(text[i])) out += text[i++];
    } else if (alnum(text[i])) {
      out += 'v';
      while (i < text.size() && alnum(text[i])) ++i;
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::set<std::string> formula_symbols(const std::string& text) {
  std::set<std::string> symbols;
  std::size_t i = 0;
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  while (i < text.size()) {
    if (text[i] == '\\') {
      std::size_t start = i++;
      while (i < text.size() && alnum(text[i])) ++i;
      if (i - start > 1) {
        symbols.insert(text.substr(start, i - start));
      } else if (i < text.size()) {
        symbols.insert(text.substr(start, 2));  // escaped single char like \{
        ++i;
      }
    } else if (!alnum(text[i]) && !std::isspace(static_cast<unsigned char>(text[i]))) {
      symbols.insert(std::string(1, text[i]));
      ++i;
    } else {
      ++i;
    }
  }
  return symbols;
}

namespace {

int balance(const std::string& text, char open, char close) {
  int opens = 0, closes = 0;
  for (char c : text) {
    if (c == open) ++opens;
    if (c == close) ++closes;
  }
  return opens - closes;
}

int left_right_balance(const std::string& text) {
  int bal = 0;
  auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
  for (std::size_t i = 0; i + 4 < text.size(); ++i) {
    if (text[i] != '\\') continue;
    if (text.compare(i, 5, "\\left") == 0 && (i + 5 >= text.size() || !alpha(text[i + 5]))) ++bal;
    if (i + 5 < text.size() && text.compare(i, 6, "\\right") == 0 &&
        (i + 6 >= text.size() || !alpha(text[i + 6]))) {
      --bal;
    }
  }
  return bal;
}

}  // namespace

RewardBreakdown formula_reward(const std::string& pred, const std::string& gt) {
  RewardBreakdown out;
  out.components["char"] = 1.0 - norm_edit_distance(pred, gt);
  out.components["skeleton"] =
      1.0 - norm_edit_distance(skeletonize_formula(pred), skeletonize_formula(gt));

  auto sp = formula_symbols(pred);
  auto sg = formula_symbols(gt);
  if (sp.empty() && sg.empty()) {
    out.components["jaccard"] = 1.0;
  } else {
    std::size_t inter = 0;
    for (const auto& s : sp) inter += sg.count(s);
    std::size_t uni = sp.size() + sg.size() - inter;
    out.components["jaccard"] = static_cast<double>(inter) / static_cast<double>(uni);
  }

  bool delims_agree = balance(pred, '{', '}') == balance(gt, '{', '}') &&
                      balance(pred, '[', ']') == balance(gt, '[', ']') &&
                      balance(pred, '(', ')') == balance(gt, '(', ')') &&
                      left_right_balance(pred) == left_right_balance(gt);
  out.components["delim"] = delims_agree ? 1.0 : 0.0;

  out.total = (out.components["char"] + out.components["skeleton"] + out.components["jaccard"] +
               out.components["delim"]) /
              4.0;
  return out;
}

}  // namespace pardoc
