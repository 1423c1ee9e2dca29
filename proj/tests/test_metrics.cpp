#include <doctest.h>

#include <numeric>
#include <random>

#include "pardoc/metrics.hpp"

using namespace pardoc;

namespace {

// Classic quadratic DP, kept separate from the production implementation.
std::size_t dp_oracle(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    }
  }
  return d[a.size()][b.size()];
}

std::string random_word(std::mt19937& gen, int max_len = 10) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> ch('a', 'e');
  std::string s;
  int n = len(gen);
  for (int i = 0; i < n; ++i) s += static_cast<char>(ch(gen));
  return s;
}

CellMatrix matrix_from(const std::vector<std::vector<std::string>>& rows) {
  CellMatrix m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.rows = std::max(m.rows, i + 1);
      m.cols = std::max(m.cols, j + 1);
      if (!rows[i][j].empty()) m.set(i + 1, j + 1, rows[i][j]);
    }
  }
  return m;
}

}  // namespace

TEST_CASE("normalized edit distance basics") {
  CHECK(norm_edit_distance("hello", "hello") == doctest::Approx(0.0));
  CHECK(norm_edit_distance("abc", "abd") == doctest::Approx(1.0 / 3));
  CHECK(norm_edit_distance("", "xy") == doctest::Approx(1.0));
  CHECK(norm_edit_distance("", "") == doctest::Approx(0.0));
}

TEST_CASE("levenshtein agrees with the DP oracle, is symmetric, obeys the triangle") {
  std::mt19937 gen(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::string a = random_word(gen), b = random_word(gen), c = random_word(gen);
    CHECK(levenshtein(a, b) == dp_oracle(a, b));
    CHECK(levenshtein(a, b) == levenshtein(b, a));
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("cell similarity three-case rule") {
  using S = std::optional<std::string>;
  CHECK(cell_similarity(S{"12"}, S{"12"}) == doctest::Approx(1.0));
  CHECK(cell_similarity(S{"12"}, S{}) == doctest::Approx(0.0));
  CHECK(cell_similarity(S{}, S{"12"}) == doctest::Approx(0.0));
  CHECK(cell_similarity(S{}, S{}) == doctest::Approx(1.0));
  CHECK(cell_similarity(S{"120"}, S{"125"}) == doctest::Approx(2.0 / 3));
}

TEST_CASE("css scores a perfect prediction at 1") {
  CellMatrix gt = matrix_from({{"name", "q1", "q2"}, {"a", "1", "2"}, {"b", "3", "4"}});
  CHECK(css_score(gt, gt) == doctest::Approx(1.0));
}

TEST_CASE("css recovers a transposed prediction") {
  CellMatrix gt = matrix_from({{"name", "q1", "q2"}, {"alpha", "1", "2"}, {"beta", "3", "4"}});
  CellMatrix pred = gt.transposed();
  // Brute-force oracle: scoring both orientations shows the transpose wins.
  CHECK(css_score(gt, pred) == doctest::Approx(1.0));
}

TEST_CASE("css scores an all-missing prediction at 0") {
  CellMatrix gt = matrix_from({{"h1", "h2"}, {"1", "2"}});
  CellMatrix pred = matrix_from({{"h1", "h2"}});
  CHECK(css_score(gt, pred) == doctest::Approx(0.0));
}

TEST_CASE("css requires at least one data row") {
  CellMatrix gt = matrix_from({{"h1", "h2"}});
  CHECK_THROWS_AS(css_score(gt, gt), ValidationError);
}

TEST_CASE("css is invariant under data-row and column permutations") {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(2, 5);
    std::size_t rows = dim(gen), cols = dim(gen);
    // Distinct headers and keys so alignment is unambiguous.
    std::vector<std::vector<std::string>> data(rows, std::vector<std::string>(cols));
    for (std::size_t j = 0; j < cols; ++j) data[0][j] = "hdr" + std::to_string(j) + "#";
    for (std::size_t i = 1; i < rows; ++i) {
      data[i][0] = "key" + std::to_string(i) + "#";
      for (std::size_t j = 1; j < cols; ++j) {
        data[i][j] = "v" + std::to_string(i * 131 + j * 17);
      }
    }
    CellMatrix gt = matrix_from(data);

    std::vector<std::size_t> row_perm(rows - 1), col_perm(cols);
    std::iota(row_perm.begin(), row_perm.end(), 1);
    std::iota(col_perm.begin(), col_perm.end(), 0);
    std::shuffle(row_perm.begin(), row_perm.end(), gen);
    std::shuffle(col_perm.begin(), col_perm.end(), gen);

    std::vector<std::vector<std::string>> shuffled(rows, std::vector<std::string>(cols));
    for (std::size_t j = 0; j < cols; ++j) shuffled[0][j] = data[0][col_perm[j]];
    for (std::size_t i = 1; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) shuffled[i][j] = data[row_perm[i - 1]][col_perm[j]];
    }
    CellMatrix pred = matrix_from(shuffled);
    CHECK(css_score(gt, pred) == doctest::Approx(1.0));
    if (trial % 4 == 0) CHECK(css_score(gt, pred.transposed()) == doctest::Approx(1.0));
  }
}

TEST_CASE("css stays in [0,1] on unrelated random matrices") {
  std::mt19937 gen(123);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    CellMatrix gt, pred;
    std::size_t gr = 2 + dim(gen) % 4, gc = dim(gen);
    for (std::size_t i = 1; i <= gr; ++i)
      for (std::size_t j = 1; j <= gc; ++j)
        if (gen() % 4) gt.set(i, j, random_word(gen, 4));
    gt.rows = gr;
    gt.cols = gc;
    std::size_t pr = dim(gen), pc = dim(gen);
    for (std::size_t i = 1; i <= pr; ++i)
      for (std::size_t j = 1; j <= pc; ++j)
        if (gen() % 4) pred.set(i, j, random_word(gen, 4));
    pred.rows = std::max(pred.rows, pr);
    pred.cols = std::max(pred.cols, pc);
    double s = css_score(gt, pred);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("markdown tables parse into cell matrices") {
  CellMatrix m = parse_markdown_table("| name | q1 |\n|------|----|\n| a | 1 |\n| b |  |\n");
  CHECK(m.rows == 3);
  CHECK(m.cols == 2);
  CHECK(m.get(1, 1) == std::optional<std::string>{"name"});
  CHECK(m.get(3, 1) == std::optional<std::string>{"b"});
  CHECK(!m.get(3, 2).has_value());  // empty cell is a missing cell
}

TEST_CASE("mermaid: plain edges") {
  DirectedGraph g = parse_mermaid_edges("graph TD\nA-->B\nB-->C");
  CHECK(g.edges == std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}});
  CHECK(g.skipped_lines == 0);
}

TEST_CASE("mermaid: labels resolve and normalize") {
  DirectedGraph g = parse_mermaid_edges("flowchart LR\nA[Start] --> B[End ]");
  CHECK(g.edges == std::set<std::pair<std::string, std::string>>{{"start", "end"}});

  DirectedGraph q = parse_mermaid_edges("A[\"Multi  Word\"] --> B");
  CHECK(q.edges == std::set<std::pair<std::string, std::string>>{{"multi word", "b"}});

  // A declaration after the edge still resolves earlier uses.
  DirectedGraph late = parse_mermaid_edges("A --> B\nA[Alpha]");
  CHECK(late.edges == std::set<std::pair<std::string, std::string>>{{"alpha", "b"}});
}

TEST_CASE("mermaid: duplicate edges collapse, labeled arrows parse") {
  DirectedGraph g = parse_mermaid_edges("A-->B\nA-->B");
  CHECK(g.edges.size() == 1);

  DirectedGraph lbl = parse_mermaid_edges("A -->|yes| B\nB --> |no| C");
  CHECK(lbl.edges ==
        std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}});
}

TEST_CASE("mermaid: chains, self-loops and noise") {
  DirectedGraph chain = parse_mermaid_edges("A --> B --> C");
  CHECK(chain.edges ==
        std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}});

  DirectedGraph self = parse_mermaid_edges("A --> A2\nA2 --> A2");
  CHECK(self.edges.count({"a2", "a2"}) == 1);

  DirectedGraph noisy = parse_mermaid_edges("graph TD\n???\nA-->B\nstyle A fill:#f9f\n%% note");
  CHECK(noisy.edges.size() == 1);
  CHECK(noisy.skipped_lines == 2);
}

TEST_CASE("edge f1 formula") {
  DirectedGraph a, b;
  a.edges = {{"x", "y"}, {"y", "z"}};
  EdgeF1 same = edge_f1(a, a);
  CHECK(same.precision == doctest::Approx(1.0));
  CHECK(same.recall == doctest::Approx(1.0));
  CHECK(same.f1 == doctest::Approx(1.0));

  b.edges = {{"p", "q"}};
  EdgeF1 disjoint = edge_f1(a, b);
  CHECK(disjoint.f1 == doctest::Approx(0.0));

  DirectedGraph gt4, pred2;
  gt4.edges = {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "e"}};
  pred2.edges = {{"a", "b"}, {"b", "c"}};
  EdgeF1 partial = edge_f1(gt4, pred2);
  CHECK(partial.precision == doctest::Approx(1.0));
  CHECK(partial.recall == doctest::Approx(0.5));
  CHECK(partial.f1 == doctest::Approx(2.0 / 3));

  EdgeF1 both_empty = edge_f1({}, {});
  CHECK(both_empty.f1 == doctest::Approx(0.0));
}

TEST_CASE("edge f1 ignores case and spacing in the source text") {
  DirectedGraph a = parse_mermaid_edges("Alpha --> Beta");
  DirectedGraph b = parse_mermaid_edges("  alpha   -->   BETA  ");
  CHECK(edge_f1(a, b).f1 == doctest::Approx(1.0));
}

TEST_CASE("group advantage normalization") {
  CHECK(group_advantage({1, 1, 1}) == std::vector<double>{0, 0, 0});
  auto two = group_advantage({0, 2});
  CHECK(two[0] == doctest::Approx(-1.0));
  CHECK(two[1] == doctest::Approx(1.0));
  CHECK(group_advantage({0.37}) == std::vector<double>{0});
  CHECK_THROWS_AS(group_advantage({}), ValidationError);
}

TEST_CASE("group advantage has zero mean and unit variance over random groups") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> reward(0.0, 1.0);
  std::uniform_int_distribution<int> size(2, 16);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> rewards(size(gen));
    for (auto& r : rewards) r = reward(gen);
    auto adv = group_advantage(rewards);
    double mean = 0.0, var = 0.0;
    for (double a : adv) mean += a;
    mean /= static_cast<double>(adv.size());
    for (double a : adv) var += (a - mean) * (a - mean);
    var /= static_cast<double>(adv.size());
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-9));
  }
}
