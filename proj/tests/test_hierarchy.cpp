#include <doctest.h>

#include <algorithm>
#include <random>

#include "pardoc/hierarchy.hpp"

using namespace pardoc;

namespace {

std::vector<DocElement> elements(std::initializer_list<const char*> ids) {
  std::vector<DocElement> out;
  for (const char* id : ids) out.push_back({id, "TEXT", std::string("c-") + id});
  return out;
}

}  // namespace

TEST_CASE("parse_relations reads each marker") {
  auto rels = parse_relations("T1 << E1\nE2 ++ E1\nC1 || C2\n");
  REQUIRE(rels.size() == 3);
  CHECK(rels[0] == Relation{RelationKind::ParentChild, "T1", "E1"});
  CHECK(rels[1] == Relation{RelationKind::Group, "E2", "E1"});
  CHECK(rels[2] == Relation{RelationKind::Continuation, "C1", "C2"});

  CHECK(parse_relations("\n  \n").empty());
  CHECK_THROWS_AS(parse_relations("A <> B"), ParseError);
  CHECK_THROWS_AS(parse_relations("A <<"), ParseError);
  CHECK_THROWS_AS(parse_relations("A << B C"), ParseError);
  CHECK_THROWS_AS(parse_relations("A << A"), ParseError);
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_relations("A << B\nA >> B\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("grouping chain lands all members under the head's parent in order") {
  auto tree = build_tree(elements({"T1", "E1", "E2", "E3"}),
                         parse_relations("T1 << E1\nE2 ++ E1\nE3 ++ E2\n"));
  CHECK(tree.roots == std::vector<std::string>{"T1"});
  CHECK(tree.children.at("T1") == std::vector<std::string>{"E1", "E2", "E3"});
  CHECK(tree.merged_units.empty());
}

TEST_CASE("group lines can arrive shuffled, order comes from the chain links") {
  auto elems = elements({"T1", "E1", "E2", "E3", "E4"});
  std::vector<Relation> rels = parse_relations("T1 << E1\nE2 ++ E1\nE3 ++ E2\nE4 ++ E3\n");
  auto expected = build_tree(elems, rels);

  std::vector<Relation> groups(rels.begin() + 1, rels.end());
  std::mt19937 gen(3);
  for (int shuffle = 0; shuffle < 10; ++shuffle) {
    std::shuffle(groups.begin(), groups.end(), gen);
    std::vector<Relation> mixed{rels[0]};
    mixed.insert(mixed.end(), groups.begin(), groups.end());
    CHECK(build_tree(elems, mixed) == expected);
  }
}

TEST_CASE("continuation merges into the earliest fragment and records the rest") {
  auto elems = elements({"C1", "C2", "C3"});
  auto tree = build_tree(elems, parse_relations("C1 || C2\nC2 || C3\n"));
  CHECK(tree.roots == std::vector<std::string>{"C1"});
  CHECK(tree.nodes.count("C2") == 0);
  CHECK(tree.nodes.count("C3") == 0);
  REQUIRE(tree.merged_units.size() == 1);
  CHECK(tree.merged_units[0] == MergedUnit{"C1", {"C2", "C3"}});
  CHECK(tree.nodes.at("C1").content == "c-C1 c-C2 c-C3");
}

TEST_CASE("continuation merge order does not depend on line order") {
  auto elems = elements({"C1", "C2", "C3"});
  auto a = build_tree(elems, parse_relations("C1 || C2\nC2 || C3\n"));
  auto b = build_tree(elems, parse_relations("C2 || C3\nC1 || C2\n"));
  CHECK(a == b);
}

TEST_CASE("formula fragments concatenate without a separator") {
  std::vector<DocElement> elems{{"F1", "FORMULA", "x+"}, {"F2", "FORMULA", "y"}};
  auto tree = build_tree(elems, parse_relations("F1 || F2"));
  CHECK(tree.nodes.at("F1").content == "x+y");
}

TEST_CASE("relations referencing merged fragments follow the survivor") {
  auto elems = elements({"T", "C1", "C2"});
  auto tree = build_tree(elems, parse_relations("C1 || C2\nT << C2\n"));
  CHECK(tree.children.at("T") == std::vector<std::string>{"C1"});

  // The absorbed fragment can also appear on the parent side.
  auto elems2 = elements({"C1", "C2", "X"});
  auto tree2 = build_tree(elems2, parse_relations("C1 || C2\nC2 << X\n"));
  CHECK(tree2.children.at("C1") == std::vector<std::string>{"X"});
}

TEST_CASE("an explicit parent consistent with the chain is redundant, not a conflict") {
  auto tree = build_tree(elements({"T", "E1", "E2"}),
                         parse_relations("T << E1\nE2 ++ E1\nT << E2\n"));
  CHECK(tree.children.at("T") == std::vector<std::string>{"E1", "E2"});
}

TEST_CASE("co-followers order by reading order, each with its own chain") {
  // B and C both follow A; D extends B's branch.
  auto tree = build_tree(elements({"P", "A", "B", "C", "D"}),
                         parse_relations("P << A\nB ++ A\nC ++ A\nD ++ B\n"));
  CHECK(tree.children.at("P") == std::vector<std::string>{"A", "B", "D", "C"});
  // The canonical re-emission linearizes that order and rebuilds the same tree.
  DocTree again = build_tree(elements({"P", "A", "B", "C", "D"}), linearize(tree));
  CHECK(again == tree);
}

TEST_CASE("structural conflicts are hard errors") {
  CHECK_THROWS_AS(build_tree(elements({"A", "B"}), parse_relations("A << B\nB << A")),
                  StructureError);
  CHECK_THROWS_AS(build_tree(elements({"A", "B", "C"}), parse_relations("A << C\nB << C")),
                  StructureError);
  CHECK_THROWS_AS(build_tree(elements({"A", "B", "C"}), parse_relations("A || B\nA || C")),
                  StructureError);
  CHECK_THROWS_AS(build_tree(elements({"A", "B"}), parse_relations("A || B\nB || A")),
                  StructureError);
  CHECK_THROWS_AS(build_tree(elements({"A", "B"}), parse_relations("A ++ B\nB ++ A")),
                  StructureError);
  CHECK_THROWS_AS(build_tree(elements({"A"}), parse_relations("A << B")), StructureError);
}

TEST_CASE("conflict messages name both parents") {
  try {
    build_tree(elements({"A", "B", "C"}), parse_relations("A << C\nB << C"));
    FAIL("expected StructureError");
  } catch (const StructureError& e) {
    std::string msg = e.what();
    CHECK(msg.find("A") != std::string::npos);
    CHECK(msg.find("B") != std::string::npos);
  }
}

TEST_CASE("elements without relations become roots in reading order") {
  auto tree = build_tree(elements({"X", "Y", "Z"}), {});
  CHECK(tree.roots == std::vector<std::string>{"X", "Y", "Z"});
  CHECK(tree.children.empty());
  CHECK(linearize(tree).empty());
}

TEST_CASE("root-level group chains attach as root siblings") {
  auto tree = build_tree(elements({"A", "B", "C"}), parse_relations("B ++ A\n"));
  CHECK(tree.roots == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("canonical linearization") {
  auto elems = elements({"T1", "E1", "E2", "E3"});
  auto rels = parse_relations("T1 << E1\nE2 ++ E1\nE3 ++ E2\n");
  auto tree = build_tree(elems, rels);
  CHECK(linearize(tree) == rels);

  // Two roots with one child each: two parent lines, no group lines.
  auto two = build_tree(elements({"R1", "A", "R2", "B"}), parse_relations("R1 << A\nR2 << B\n"));
  auto lin = linearize(two);
  REQUIRE(lin.size() == 2);
  CHECK(lin[0] == Relation{RelationKind::ParentChild, "R1", "A"});
  CHECK(lin[1] == Relation{RelationKind::ParentChild, "R2", "B"});
}

TEST_CASE("relation text round-trips through format and parse") {
  auto rels = parse_relations("T1 << E1\nE2 ++ E1\nC1 || C2\n");
  CHECK(parse_relations(format_relations(rels)) == rels);
}

namespace {

struct RandomDoc {
  std::vector<DocElement> elems;
  std::vector<Relation> rels;
};

// A random forest in canonical form: ids assigned in pre-order so reading
// order matches sibling order, plus a few continuation chains over extra
// fragment elements.
RandomDoc random_doc(std::mt19937& gen) {
  RandomDoc doc;
  std::uniform_int_distribution<int> node_count(1, 24);
  int n = node_count(gen);

  // parent[i] < i, or -1 for roots; bounded depth via parent choice.
  std::vector<int> parent(n, -1);
  std::vector<int> depth(n, 0);
  for (int i = 1; i < n; ++i) {
    std::uniform_int_distribution<int> pick(-1, i - 1);
    int p = pick(gen);
    while (p >= 0 && depth[p] >= 4) p = pick(gen);
    parent[i] = p;
    depth[i] = p >= 0 ? depth[p] + 1 : 0;
  }

  for (int i = 0; i < n; ++i) {
    doc.elems.push_back({"n" + std::to_string(i), "TEXT", "body" + std::to_string(i)});
  }

  // Canonical relations: << to the first child, ++ chain for the rest.
  std::vector<std::vector<int>> kids(n);
  for (int i = 1; i < n; ++i) {
    if (parent[i] >= 0) kids[parent[i]].push_back(i);
  }
  for (int p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < kids[p].size(); ++k) {
      if (k == 0) {
        doc.rels.push_back(
            {RelationKind::ParentChild, "n" + std::to_string(p), "n" + std::to_string(kids[p][0])});
      } else {
        doc.rels.push_back({RelationKind::Group, "n" + std::to_string(kids[p][k]),
                            "n" + std::to_string(kids[p][k - 1])});
      }
    }
  }

  // Continuation fragments appended after the structural nodes.
  std::uniform_int_distribution<int> chain_count(0, 2);
  std::uniform_int_distribution<int> chain_len(1, 3);
  std::uniform_int_distribution<int> survivor_pick(0, n - 1);
  int frag = 0;
  int chains = chain_count(gen);
  for (int c = 0; c < chains; ++c) {
    std::string prev = "n" + std::to_string(survivor_pick(gen));
    // Only one chain may leave a given survivor.
    bool taken = false;
    for (const auto& r : doc.rels) {
      if (r.kind == RelationKind::Continuation && r.left == prev) taken = true;
    }
    if (taken) continue;
    int len = chain_len(gen);
    for (int f = 0; f < len; ++f) {
      std::string id = "frag" + std::to_string(frag++);
      doc.elems.push_back({id, "TEXT", "tail" + id});
      doc.rels.push_back({RelationKind::Continuation, prev, id});
      prev = id;
    }
  }
  return doc;
}

}  // namespace

TEST_CASE("random trees survive build -> linearize -> build") {
  std::mt19937 gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    RandomDoc doc = random_doc(gen);
    DocTree first = build_tree(doc.elems, doc.rels);
    std::vector<Relation> emitted = linearize(first);
    DocTree second = build_tree(doc.elems, emitted);
    CHECK(first == second);
  }
}

TEST_CASE("tree JSON round-trips") {
  auto elems = elements({"T1", "E1", "E2", "C2"});
  auto tree = build_tree(elems, parse_relations("T1 << E1\nE2 ++ E1\nE1 || C2\n"));
  DocTree loaded = tree_from_json(tree_to_json(tree));
  CHECK(loaded == tree);
}
