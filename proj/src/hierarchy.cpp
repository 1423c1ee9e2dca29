#include "pardoc/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pardoc {

namespace {

const char* marker(RelationKind kind) {
  switch (kind) {
    case RelationKind::ParentChild: return "<<";
    case RelationKind::Group: return "++";
    case RelationKind::Continuation: return "||";
  }
  return "?";
}

// Continuation fragments merge without a separator for formula-like
// content, with a single space otherwise.
std::string join_content(const std::string& category, const std::string& a,
                         const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (category == "FORMULA" || category == "CODE") return a + b;
  return a + " " + b;
}

}  // namespace

std::vector<Relation> parse_relations(const std::string& text) {
  std::vector<Relation> relations;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string left, op, right, extra;
    if (!(ls >> left)) continue;  // blank line
    if (!(ls >> op >> right)) throw ParseError("incomplete relation", lineno);
    if (ls >> extra) throw ParseError("trailing tokens after relation", lineno);
    RelationKind kind;
    if (op == "<<")
      kind = RelationKind::ParentChild;
    else if (op == "++")
      kind = RelationKind::Group;
    else if (op == "||")
      kind = RelationKind::Continuation;
    else
      throw ParseError("unknown relation marker '" + op + "'", lineno);
    if (left == right) throw ParseError("relation endpoints must differ", lineno);
    relations.push_back({kind, left, right});
  }
  return relations;
}

std::string format_relations(const std::vector<Relation>& relations) {
  std::string out;
  for (const auto& r : relations) {
    out += r.left;
    out += ' ';
    out += marker(r.kind);
    out += ' ';
    out += r.right;
    out += '\n';
  }
  return out;
}

DocTree build_tree(const std::vector<DocElement>& elements,
                   const std::vector<Relation>& relations) {
  std::map<std::string, std::size_t> order;
  std::map<std::string, DocElement> by_id;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    if (by_id.count(e.id)) throw StructureError("duplicate element id '" + e.id + "'");
    order[e.id] = i;
    by_id[e.id] = e;
  }
  auto require_known = [&](const std::string& id) {
    if (!order.count(id)) throw StructureError("relation references unknown id '" + id + "'");
  };
  for (const auto& r : relations) {
    require_known(r.left);
    require_known(r.right);
  }

  // --- continuation chains -------------------------------------------------
  std::map<std::string, std::string> cont_next;  // fragment -> its continuation
  std::map<std::string, std::string> cont_prev;
  for (const auto& r : relations) {
    if (r.kind != RelationKind::Continuation) continue;
    if (cont_next.count(r.left)) {
      throw StructureError("fragment '" + r.left + "' is continued by both '" +
                           cont_next[r.left] + "' and '" + r.right + "'");
    }
    if (cont_prev.count(r.right)) {
      throw StructureError("fragment '" + r.right + "' continues both '" + cont_prev[r.right] +
                           "' and '" + r.left + "'");
    }
    cont_next[r.left] = r.right;
    cont_prev[r.right] = r.left;
  }

  std::map<std::string, std::string> absorbed_into;  // fragment -> surviving id
  std::vector<MergedUnit> merged_units;
  for (const auto& [head, unused] : cont_next) {
    (void)unused;
    if (cont_prev.count(head)) continue;  // not the chain head
    MergedUnit unit;
    unit.survivor = head;
    std::set<std::string> seen{head};
    std::string cur = head;
    while (cont_next.count(cur)) {
      cur = cont_next.at(cur);
      if (!seen.insert(cur).second) {
        throw StructureError("continuation cycle through '" + cur + "'");
      }
      unit.absorbed.push_back(cur);
      absorbed_into[cur] = head;
    }
    merged_units.push_back(std::move(unit));
  }
  // A fragment with a predecessor that no chain walk absorbed sits on a
  // cycle with no head.
  for (const auto& [frag, next] : cont_next) {
    (void)next;
    if (cont_prev.count(frag) && !absorbed_into.count(frag)) {
      throw StructureError("continuation cycle through '" + frag + "'");
    }
  }

  auto resolve = [&](const std::string& id) -> std::string {
    auto it = absorbed_into.find(id);
    return it == absorbed_into.end() ? id : it->second;
  };

  // --- explicit parents and group predecessor links ------------------------
  std::map<std::string, std::string> parent;
  std::map<std::string, std::string> follows;                 // member -> predecessor
  std::map<std::string, std::vector<std::string>> followers;  // predecessor -> members
  for (const auto& r : relations) {
    if (r.kind == RelationKind::ParentChild) {
      std::string p = resolve(r.left), c = resolve(r.right);
      if (p == c) throw StructureError("element '" + p + "' cannot parent its own fragment");
      auto it = parent.find(c);
      if (it != parent.end() && it->second != p) {
        throw StructureError("conflicting parents for '" + c + "': '" + it->second + "' and '" +
                             p + "'");
      }
      parent[c] = p;
    } else if (r.kind == RelationKind::Group) {
      std::string member = resolve(r.left), pred = resolve(r.right);
      if (member == pred) throw StructureError("element '" + member + "' cannot group with itself");
      auto it = follows.find(member);
      if (it != follows.end() && it->second != pred) {
        throw StructureError("'" + member + "' follows both '" + it->second + "' and '" + pred +
                             "'");
      }
      if (it == follows.end()) {
        follows[member] = pred;
        followers[pred].push_back(member);
      }
    }
  }

  // Group-chain heads: walk predecessor links; cycles are errors.
  auto chain_head = [&](const std::string& id) {
    std::set<std::string> seen{id};
    std::string cur = id;
    while (follows.count(cur)) {
      cur = follows.at(cur);
      if (!seen.insert(cur).second) throw StructureError("group cycle through '" + cur + "'");
    }
    return cur;
  };

  // Chain members inherit the resolved parent of their chain head.
  for (const auto& [member, pred] : follows) {
    (void)pred;
    std::string head = chain_head(member);
    auto head_parent = parent.find(head);
    auto own = parent.find(member);
    if (head_parent != parent.end()) {
      if (own != parent.end() && own->second != head_parent->second) {
        throw StructureError("conflicting parents for '" + member + "': '" + own->second +
                             "' and '" + head_parent->second + "'");
      }
      parent[member] = head_parent->second;
    } else if (own != parent.end()) {
      throw StructureError("conflicting parents for '" + member + "': '" + own->second +
                           "' and the root level");
    }
  }

  // Parent-link cycle detection.
  for (const auto& [child, unused] : parent) {
    (void)unused;
    std::set<std::string> seen{child};
    std::string cur = child;
    while (parent.count(cur)) {
      cur = parent.at(cur);
      if (!seen.insert(cur).second) throw StructureError("parent cycle through '" + cur + "'");
    }
  }

  // --- assemble -------------------------------------------------------------
  DocTree tree;
  tree.merged_units = merged_units;
  std::sort(tree.merged_units.begin(), tree.merged_units.end(),
            [&](const MergedUnit& a, const MergedUnit& b) {
              return order.at(a.survivor) < order.at(b.survivor);
            });

  for (const auto& e : elements) {
    if (absorbed_into.count(e.id)) continue;
    DocNode node{e.category, e.content};
    tree.nodes[e.id] = std::move(node);
  }
  // Fold absorbed fragment content into the survivors, in chain order.
  for (const auto& unit : tree.merged_units) {
    DocNode& node = tree.nodes.at(unit.survivor);
    for (const auto& frag : unit.absorbed) {
      node.content = join_content(node.category, node.content, by_id.at(frag).content);
    }
  }

  // Sibling layout: anchors (non-followers) in reading order, each
  // immediately followed by its chain, depth first.
  std::map<std::string, std::vector<std::string>> anchors;  // parent ("" = roots) -> anchors
  for (const auto& e : elements) {
    if (absorbed_into.count(e.id)) continue;
    if (follows.count(e.id)) continue;  // placed after its predecessor instead
    auto it = parent.find(e.id);
    anchors[it == parent.end() ? std::string() : it->second].push_back(e.id);
  }
  for (auto& [p, list] : anchors) {
    (void)p;
    std::sort(list.begin(), list.end(),
              [&](const std::string& a, const std::string& b) { return order.at(a) < order.at(b); });
  }

  auto emit_chain = [&](auto&& self, std::vector<std::string>& out, const std::string& id) -> void {
    out.push_back(id);
    auto it = followers.find(id);
    if (it == followers.end()) return;
    std::vector<std::string> next = it->second;
    std::sort(next.begin(), next.end(),
              [&](const std::string& a, const std::string& b) { return order.at(a) < order.at(b); });
    for (const auto& f : next) self(self, out, f);
  };

  for (const auto& [p, list] : anchors) {
    std::vector<std::string> ordered;
    for (const auto& a : list) emit_chain(emit_chain, ordered, a);
    if (p.empty()) {
      tree.roots = ordered;
    } else {
      tree.children[p] = ordered;
    }
  }

  return tree;
}

std::vector<Relation> linearize(const DocTree& tree) {
  std::vector<Relation> out;
  for (const auto& unit : tree.merged_units) {
    std::string prev = unit.survivor;
    for (const auto& frag : unit.absorbed) {
      out.push_back({RelationKind::Continuation, prev, frag});
      prev = frag;
    }
  }
  auto emit = [&](auto&& self, const std::string& id) -> void {
    auto it = tree.children.find(id);
    if (it == tree.children.end() || it->second.empty()) return;
    const auto& kids = it->second;
    out.push_back({RelationKind::ParentChild, id, kids[0]});
    for (std::size_t i = 1; i < kids.size(); ++i) {
      out.push_back({RelationKind::Group, kids[i], kids[i - 1]});
    }
    for (const auto& kid : kids) self(self, kid);
  };
  for (const auto& root : tree.roots) emit(emit, root);
  return out;
}

std::string tree_to_json(const DocTree& tree) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::object();
  for (const auto& [id, node] : tree.nodes) {
    j["nodes"][id] = {{"category", node.category}, {"content", node.content}};
  }
  j["roots"] = tree.roots;
  j["children"] = nlohmann::ordered_json::object();
  for (const auto& [id, kids] : tree.children) {
    if (!kids.empty()) j["children"][id] = kids;
  }
  j["merged_units"] = nlohmann::ordered_json::array();
  for (const auto& unit : tree.merged_units) {
    j["merged_units"].push_back({{"survivor", unit.survivor}, {"absorbed", unit.absorbed}});
  }
  return j.dump(2);
}

DocTree tree_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad tree JSON: ") + e.what());
  }
  DocTree tree;
  for (const auto& [id, node] : j.at("nodes").items()) {
    tree.nodes[id] = {node.at("category").get<std::string>(), node.at("content").get<std::string>()};
  }
  tree.roots = j.at("roots").get<std::vector<std::string>>();
  for (const auto& [id, kids] : j.at("children").items()) {
    tree.children[id] = kids.get<std::vector<std::string>>();
  }
  for (const auto& unit : j.at("merged_units")) {
    tree.merged_units.push_back(
        {unit.at("survivor").get<std::string>(), unit.at("absorbed").get<std::vector<std::string>>()});
  }
  return tree;
}

std::vector<DocElement> load_elements_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open elements file: " + path);
  std::vector<DocElement> elements;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      DocElement e;
      e.id = j.at("id").get<std::string>();
      e.category = j.value("category", "TEXT");
      e.content = j.value("content", "");
      elements.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad element JSON: ") + e.what(), lineno);
    }
  }
  return elements;
}

}  // namespace pardoc
