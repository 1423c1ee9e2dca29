#include <algorithm>
#include <vector>

#include "pardoc/metrics.hpp"

namespace pardoc {
namespace {

// Flattened postorder view of a TableTree for the tree-edit-distance
// recurrence (Zhang & Shasha: keyroot decomposition over postorder with
// leftmost-leaf indices).
struct FlatTree {
  std::vector<const TableTree*> post;  // nodes in postorder
  std::vector<std::size_t> lml;        // index of each node's leftmost leaf
  std::vector<std::size_t> keyroots;

  explicit FlatTree(const TableTree& root) {
    walk(root);
    std::vector<bool> is_keyroot(post.size(), false);
    std::vector<bool> seen_lml(post.size(), false);
    for (std::size_t i = post.size(); i-- > 0;) {
      if (!seen_lml[lml[i]]) {
        seen_lml[lml[i]] = true;
        is_keyroot[i] = true;
      }
    }
    for (std::size_t i = 0; i < post.size(); ++i) {
      if (is_keyroot[i]) keyroots.push_back(i);
    }
  }

  std::size_t walk(const TableTree& node) {
    std::size_t first_leaf = post.size();
    for (std::size_t c = 0; c < node.children.size(); ++c) {
      std::size_t child_lml = walk(node.children[c]);
      if (c == 0) first_leaf = child_lml;
    }
    post.push_back(&node);
    lml.push_back(node.children.empty() ? post.size() - 1 : first_leaf);
    return lml.back();
  }
};

double relabel_cost(const TableTree& a, const TableTree& b, bool structure_only) {
  if (a.tag != b.tag) return 1.0;
  if (a.tag != TableTree::Tag::Cell) return 0.0;
  if (a.rowspan != b.rowspan || a.colspan != b.colspan) return 1.0;
  return structure_only ? 0.0 : norm_edit_distance(a.content, b.content);
}

double tree_edit_distance(const TableTree& t1, const TableTree& t2, bool structure_only) {
  FlatTree a(t1), b(t2);
  std::size_t n = a.post.size(), m = b.post.size();
  std::vector<std::vector<double>> treedist(n, std::vector<double>(m, 0.0));

  std::vector<std::vector<double>> fd(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t ki : a.keyroots) {
    for (std::size_t kj : b.keyroots) {
      std::size_t li = a.lml[ki], lj = b.lml[kj];
      std::size_t rows = ki - li + 2, cols = kj - lj + 2;
      fd[0][0] = 0.0;
      for (std::size_t i = 1; i < rows; ++i) fd[i][0] = fd[i - 1][0] + 1.0;
      for (std::size_t j = 1; j < cols; ++j) fd[0][j] = fd[0][j - 1] + 1.0;
      for (std::size_t i = 1; i < rows; ++i) {
        for (std::size_t j = 1; j < cols; ++j) {
          std::size_t ni = li + i - 1, nj = lj + j - 1;
          if (a.lml[ni] == li && b.lml[nj] == lj) {
            double cost = relabel_cost(*a.post[ni], *b.post[nj], structure_only);
            fd[i][j] = std::min({fd[i - 1][j] + 1.0, fd[i][j - 1] + 1.0, fd[i - 1][j - 1] + cost});
            treedist[ni][nj] = fd[i][j];
          } else {
            std::size_t pi = a.lml[ni] - li, pj = b.lml[nj] - lj;
            fd[i][j] = std::min(
                {fd[i - 1][j] + 1.0, fd[i][j - 1] + 1.0, fd[pi][pj] + treedist[ni][nj]});
          }
        }
      }
    }
  }
  return treedist[n - 1][m - 1];
}

}  // namespace

double teds(const TableTree& gt, const TableTree& pred, bool structure_only) {
  double distance = tree_edit_distance(gt, pred, structure_only);
  double denom = static_cast<double>(std::max(tree_size(gt), tree_size(pred)));
  return denom > 0.0 ? 1.0 - distance / denom : 1.0;
}

}  // namespace pardoc
