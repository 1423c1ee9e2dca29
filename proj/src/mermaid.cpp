#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "pardoc/metrics.hpp"

namespace pardoc {
namespace {

std::string normalize_label(std::string s) {
  // Trim, strip one layer of quotes, collapse inner whitespace, lowercase.
  auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && issp(s.front())) s.erase(s.begin());
  while (!s.empty() && issp(s.back())) s.pop_back();
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\''))) {
    s = s.substr(1, s.size() - 2);
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
  }
  std::string out;
  bool pending_space = false;
  for (unsigned char c : s) {
    if (issp(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

struct NodeRef {
  std::string id;
  std::string label;  // empty when the reference had no declaration part
};

// Parses `ident` or `ident[Label]` / `ident(Label)` / `ident{Label}`
// starting at pos; returns nullopt when pos does not start a node.
std::optional<NodeRef> parse_node(const std::string& s, std::size_t& pos) {
  std::size_t i = pos;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  std::size_t start = i;
  while (i < s.size() && ident_char(s[i]) &&
         !(s[i] == '-' && i + 1 < s.size() && s[i + 1] == '-')) {
    ++i;
  }
  if (i == start) return std::nullopt;
  NodeRef ref;
  ref.id = s.substr(start, i - start);
  if (i < s.size() && (s[i] == '[' || s[i] == '(' || s[i] == '{')) {
    char close = s[i] == '[' ? ']' : s[i] == '(' ? ')' : '}';
    std::size_t end = s.find(close, i + 1);
    if (end == std::string::npos) return std::nullopt;
    ref.label = s.substr(i + 1, end - i - 1);
    i = end + 1;
    // Double-bracket shapes like ((Label)) or [[Label]].
    while (i < s.size() && (s[i] == ')' || s[i] == ']' || s[i] == '}')) ++i;
  }
  pos = i;
  return ref;
}

bool is_header(const std::string& line) {
  std::istringstream ss(line);
  std::string word, dir;
  if (!(ss >> word)) return false;
  std::transform(word.begin(), word.end(), word.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (word != "graph" && word != "flowchart") return false;
  ss >> dir;  // TD/LR/RL/BT or nothing
  return true;
}

}  // namespace

DirectedGraph parse_mermaid_edges(const std::string& text) {
  DirectedGraph graph;
  std::map<std::string, std::string> labels;  // id -> declared display label

  struct RawEdge {
    std::string from, to;
  };
  std::vector<RawEdge> raw_edges;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // %% comments and blank lines carry nothing.
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line.compare(first, 2, "%%") == 0) continue;
    if (is_header(line)) continue;

    std::size_t pos = first;
    auto node = parse_node(line, pos);
    if (!node) {
      graph.skipped_lines += 1;
      continue;
    }
    if (!node->label.empty()) labels[node->id] = node->label;

    bool bad = false;
    while (true) {
      std::size_t p = pos;
      while (p < line.size() && std::isspace(static_cast<unsigned char>(line[p]))) ++p;
      if (p >= line.size() || line[p] == '\r') break;  // bare declaration or end of chain
      // Arrow: one or more dashes then '>', optionally followed by |label|.
      std::size_t dash = p;
      while (dash < line.size() && line[dash] == '-') ++dash;
      if (dash == p || dash >= line.size() || line[dash] != '>') {
        bad = true;
        break;
      }
      pos = dash + 1;
      std::size_t q = pos;
      while (q < line.size() && std::isspace(static_cast<unsigned char>(line[q]))) ++q;
      if (q < line.size() && line[q] == '|') {
        std::size_t end = line.find('|', q + 1);
        if (end == std::string::npos) {
          bad = true;
          break;
        }
        pos = end + 1;  // edge labels are discarded
      }
      auto target = parse_node(line, pos);
      if (!target) {
        bad = true;
        break;
      }
      if (!target->label.empty()) labels[target->id] = target->label;
      raw_edges.push_back({node->id, target->id});
      node = target;  // chains: A --> B --> C
    }
    if (bad) graph.skipped_lines += 1;
  }

  for (const auto& e : raw_edges) {
    auto display = [&](const std::string& id) {
      auto it = labels.find(id);
      return normalize_label(it == labels.end() ? id : it->second);
    };
    graph.edges.insert({display(e.from), display(e.to)});
  }
  return graph;
}

}  // namespace pardoc
