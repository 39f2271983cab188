#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "splitsat/graph.hpp"
#include "test_util.hpp"

using namespace splitsat;
using namespace splitsat::testutil;

namespace {

// (x1|x2) & (x1|x2): duplicate clause, so the incidence graph contains the
// 4-cycle x1 - c1 - x2 - c2 - x1.
WcnfFormula four_cycle() {
  WcnfFormula f;
  f.num_vars = 2;
  f.clauses = {{{{1, false}, {2, false}}, 1}, {{{1, false}, {2, false}}, 1}};
  return f;
}

int count_components(const SpanningForest& f) { return f.num_components(); }

}  // namespace

TEST_CASE("factor graph of the diagram formula") {
  const FactorGraph g = build_factor_graph(diagram_example());
  CHECK(g.num_literal_nodes() == 6);
  CHECK(g.num_clauses == 4);
  REQUIRE(g.edges.size() == 8);
  const std::set<std::pair<int, int>> expect = {
      {0, 6}, {2, 6}, {4, 6},  // c1 - {x1, x2, x3}
      {3, 7}, {4, 7},          // c2 - {~x2, x3}
      {1, 8}, {2, 8},          // c3 - {~x1, x2}
      {5, 9},                  // c4 - {~x3}
  };
  CHECK(std::set<std::pair<int, int>>(g.edges.begin(), g.edges.end()) == expect);
}

TEST_CASE("unit clause leaves the negation isolated") {
  const auto f = parse_dimacs("p cnf 1 1\n1 0\n");
  const FactorGraph g = build_factor_graph(f);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0] == std::pair<int, int>{0, 2});
  CHECK(g.adj[1].empty());
}

TEST_CASE("small example splits into three components") {
  const FactorGraph g = build_factor_graph(small_example());
  CHECK(g.edges.size() == 4);
  const SpanningForest forest = build_spanning_forest(g);
  CHECK(count_components(forest) == 3);
  // {x1, x2, c3}, {~x1, c1}, {~x2, c2}
  CHECK(forest.component[0] == forest.component[2]);
  CHECK(forest.component[0] == forest.component[6]);
  CHECK(forest.component[1] == forest.component[4]);
  CHECK(forest.component[3] == forest.component[5]);
}

TEST_CASE("pseudo-center roots the path at its middle") {
  const auto f = parse_dimacs("p cnf 2 1\n1 2 0\n");  // x1 - c1 - x2
  const FactorGraph g = build_factor_graph(f);
  const SpanningForest forest = build_spanning_forest(g);
  const int c1 = g.clause_node(0);
  CHECK(forest.depth[static_cast<size_t>(c1)] == 0);
  CHECK(forest.depth[0] == 1);
  CHECK(forest.depth[2] == 1);
  CHECK(forest.parent[0] == c1);
  CHECK(forest.parent[2] == c1);
}

TEST_CASE("two-node component") {
  const FactorGraph g = build_factor_graph(diagram_example());
  const SpanningForest forest = build_spanning_forest(g);
  // Component B is {~x3, c4}: one tree edge, depths 0 and 1.
  const int nx3 = 5, c4 = 9;
  CHECK(forest.component[nx3] == forest.component[c4]);
  const int root = forest.roots[static_cast<size_t>(forest.component[nx3])];
  const int other = root == nx3 ? c4 : nx3;
  CHECK(forest.depth[static_cast<size_t>(root)] == 0);
  CHECK(forest.depth[static_cast<size_t>(other)] == 1);
}

TEST_CASE("diagram graph is a forest: every edge is a tree edge") {
  const FactorGraph g = build_factor_graph(diagram_example());
  const SpanningForest forest = build_spanning_forest(g);
  const EdgeSplitGraph s = split_edges(g, forest);
  CHECK(s.directed_parent().size() == 8);
  CHECK(s.directed_child().size() == 8);
  CHECK(s.ntup.empty());
  CHECK(s.ntdown.empty());
}

TEST_CASE("four-cycle classifies one non-tree edge") {
  const FactorGraph g = build_factor_graph(four_cycle());
  const SpanningForest forest = build_spanning_forest(g);
  const EdgeSplitGraph s = split_edges(g, forest);
  CHECK(s.parent.size() + s.child.size() == 3);
  CHECK(s.ntup.size() + s.ntdown.size() == 1);
  const auto up = s.directed_ntup();
  REQUIRE(up.size() == 1);
  // The deeper endpoint emits the up direction.
  CHECK(forest.depth[static_cast<size_t>(up[0].first)] >
        forest.depth[static_cast<size_t>(up[0].second)]);
}

TEST_CASE("isolated literal nodes appear in no class") {
  const auto f = parse_dimacs("p cnf 1 1\n1 0\n");
  const FactorGraph g = build_factor_graph(f);
  const EdgeSplitGraph s = split_edges(g, build_spanning_forest(g));
  for (const auto& list : {s.parent, s.child, s.ntup, s.ntdown})
    for (const auto& [j, l] : list) CHECK(l != 1);
}

TEST_CASE("split invariants on random instances") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const WcnfFormula f = random_instance(rng, 16, 40);
    const FactorGraph g = build_factor_graph(f);
    const SpanningForest forest = build_spanning_forest(g);
    const EdgeSplitGraph s = split_edges(g, forest);

    // Partition: each undirected edge lands in exactly one matrix list.
    std::multiset<std::pair<int, int>> from_split;
    for (const auto& list : {s.parent, s.child, s.ntup, s.ntdown})
      for (const auto& [j, l] : list) from_split.insert({l, g.clause_node(j)});
    CHECK(from_split == std::multiset<std::pair<int, int>>(g.edges.begin(), g.edges.end()));

    // Reversal bijections between the directed views.
    auto reversed = [](std::vector<std::pair<int, int>> v) {
      for (auto& e : v) std::swap(e.first, e.second);
      std::sort(v.begin(), v.end());
      return v;
    };
    CHECK(s.directed_parent() == reversed(s.directed_child()));
    CHECK(s.directed_ntup() == reversed(s.directed_ntdown()));

    // Tree-edge count, and depth difference exactly one on every edge.
    CHECK(static_cast<int>(s.directed_parent().size()) ==
          g.num_nodes() - forest.num_components());
    for (const auto& [l, c] : g.edges) {
      const int diff =
          forest.depth[static_cast<size_t>(l)] - forest.depth[static_cast<size_t>(c)];
      CHECK(std::abs(diff) == 1);
    }

    // Determinism.
    const EdgeSplitGraph again = split_edges(g, build_spanning_forest(g));
    CHECK(again.parent == s.parent);
    CHECK(again.child == s.child);
    CHECK(again.ntup == s.ntup);
    CHECK(again.ntdown == s.ntdown);
  }
}

TEST_CASE("debug export lists each directed edge once") {
  const FactorGraph g = build_factor_graph(four_cycle());
  const EdgeSplitGraph s = split_edges(g, build_spanning_forest(g));
  std::ostringstream out;
  write_edge_split(s, out);
  std::istringstream in(out.str());
  std::string tag;
  int from, to, lines = 0, ntup_lines = 0;
  while (in >> tag >> from >> to) {
    ++lines;
    CHECK((tag == "P" || tag == "C" || tag == "U" || tag == "D"));
    if (tag == "U") ++ntup_lines;
  }
  CHECK(lines == 2 * static_cast<int>(g.edges.size()));
  CHECK(ntup_lines == 1);
}
