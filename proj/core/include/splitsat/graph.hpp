#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "splitsat/wcnf.hpp"

namespace splitsat {

/// Bipartite literal/clause incidence graph. Node ids: literal nodes come
/// first (0..2n-1, positive literal of variable v at 2(v-1), its negation at
/// 2(v-1)+1), clause nodes follow (2n..2n+m-1). A literal and its negation
/// are NOT connected; their coupling happens inside the model, not the graph.
struct FactorGraph {
  int num_vars = 0;
  int num_clauses = 0;
  std::vector<std::pair<int, int>> edges;  // (literal node, clause node)
  std::vector<std::vector<int>> adj;       // ascending neighbor lists per node

  int num_literal_nodes() const { return 2 * num_vars; }
  int num_nodes() const { return 2 * num_vars + num_clauses; }
  int clause_node(int clause_idx) const { return 2 * num_vars + clause_idx; }
  int clause_index(int node) const { return node - 2 * num_vars; }
  bool is_literal_node(int node) const { return node < 2 * num_vars; }
  static int literal_node(const Literal& l) { return 2 * (l.var - 1) + (l.negated ? 1 : 0); }
};

FactorGraph build_factor_graph(const WcnfFormula& formula);

/// Per-component root choice for the BFS forest.
///   PseudoCenter: double-BFS from the lowest-indexed node, root at the
///     midpoint of a longest path (approximately minimizes tree depth).
///   LowestIndex: root at the lowest-indexed node of the component.
enum class RootPolicy { PseudoCenter, LowestIndex };

struct SpanningForest {
  std::vector<int> parent;     // -1 for roots and isolated nodes
  std::vector<int> depth;      // BFS distance from the component root
  std::vector<int> component;  // component id per node
  std::vector<int> roots;      // one per component, indexed by component id

  int num_components() const { return static_cast<int>(roots.size()); }
};

/// BFS forest with deterministic traversal (neighbors visited in ascending
/// node index). Handles disconnected graphs and isolated nodes.
SpanningForest build_spanning_forest(const FactorGraph& graph,
                                     RootPolicy policy = RootPolicy::PseudoCenter);

/// The four edge classes relative to the spanning forest. Entries are
/// (clause index, literal node) pairs, i.e. the literal->clause directed
/// edges laid out as |V_C| x |V_L| sparse 0/1 matrices:
///   parent:  tree edge, literal is the shallower endpoint
///   child:   tree edge, literal is the deeper endpoint
///   ntup:    non-tree edge, literal is the deeper endpoint
///   ntdown:  non-tree edge, literal is the shallower endpoint
/// The clause->literal directions are exactly the transposes with the class
/// roles swapped (the transpose of `child` holds the clause-is-parent edges,
/// and so on), which is how the message passing consumes them.
struct EdgeSplitGraph {
  int num_vars = 0;
  int num_clauses = 0;
  std::vector<std::pair<int, int>> parent, child, ntup, ntdown;

  /// Directed edge sets over graph node ids, (shallower -> deeper) for
  /// parent/ntdown and (deeper -> shallower) for child/ntup. Each undirected
  /// edge contributes one pair to each set of its class pair.
  std::vector<std::pair<int, int>> directed_parent() const;
  std::vector<std::pair<int, int>> directed_child() const;
  std::vector<std::pair<int, int>> directed_ntup() const;
  std::vector<std::pair<int, int>> directed_ntdown() const;
};

EdgeSplitGraph split_edges(const FactorGraph& graph, const SpanningForest& forest);

/// Debug export: one directed edge per line, "P|C|U|D <from> <to>" over
/// graph node ids.
void write_edge_split(const EdgeSplitGraph& split, std::ostream& out);

}  // namespace splitsat
