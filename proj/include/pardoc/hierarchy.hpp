#pragma once

#include <map>
#include <string>
#include <vector>

#include "pardoc/errors.hpp"

namespace pardoc {

enum class RelationKind { ParentChild, Group, Continuation };

// "A << B": B is a child of A. "E2 ++ E1": E2 is a sibling following E1.
// "C1 || C2": C2 continues C1 and is merged into it.
struct Relation {
  RelationKind kind = RelationKind::ParentChild;
  std::string left;
  std::string right;

  bool operator==(const Relation&) const = default;
};

struct DocElement {
  std::string id;
  std::string category = "TEXT";
  std::string content;
};

struct MergedUnit {
  std::string survivor;
  std::vector<std::string> absorbed;  // in chain order

  bool operator==(const MergedUnit&) const = default;
};

struct DocNode {
  std::string category;
  std::string content;

  bool operator==(const DocNode&) const = default;
};

struct DocTree {
  std::map<std::string, DocNode> nodes;
  std::map<std::string, std::vector<std::string>> children;  // parent id -> ordered child ids
  std::vector<std::string> roots;                            // reading order
  std::vector<MergedUnit> merged_units;

  bool operator==(const DocTree&) const = default;
};

// One relation per nonblank line: `<id> (<<|++|\|\|) <id>`, ids
// whitespace-delimited and opaque.
std::vector<Relation> parse_relations(const std::string& text);
std::string format_relations(const std::vector<Relation>& relations);

// Resolves continuation merges, group chains and parent links into a tree.
// Inconsistent inputs (unknown ids, cycles, conflicting parents, branching
// continuations) are hard errors, never silently repaired.
DocTree build_tree(const std::vector<DocElement>& elements, const std::vector<Relation>& relations);

// Canonical emission: continuation chains from merged_units first, then for
// every parent in pre-order one << to its first child and a ++ chain over
// the remaining siblings. Roots are implicit in reading order.
std::vector<Relation> linearize(const DocTree& tree);

// Tree export/import as JSON (nodes/children/roots/merged_units).
std::string tree_to_json(const DocTree& tree);
DocTree tree_from_json(const std::string& json_text);

// JSON Lines of {"id", "category", "content"} in reading order.
std::vector<DocElement> load_elements_jsonl(const std::string& path);

}  // namespace pardoc
