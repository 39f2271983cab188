#include "splitsat/graph.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace splitsat {

FactorGraph build_factor_graph(const WcnfFormula& formula) {
  FactorGraph g;
  g.num_vars = formula.num_vars;
  g.num_clauses = static_cast<int>(formula.clauses.size());
  g.adj.resize(static_cast<size_t>(g.num_nodes()));
  for (int j = 0; j < g.num_clauses; ++j) {
    const int cnode = g.clause_node(j);
    for (const auto& lit : formula.clauses[static_cast<size_t>(j)].literals) {
      const int lnode = FactorGraph::literal_node(lit);
      g.edges.emplace_back(lnode, cnode);
      g.adj[static_cast<size_t>(lnode)].push_back(cnode);
      g.adj[static_cast<size_t>(cnode)].push_back(lnode);
    }
  }
  for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

namespace {

// BFS from `start` over nodes with the given component id; neighbors visited
// in ascending index. Fills dist (-1 elsewhere) and par for path recovery.
// Returns the farthest node (ties -> lowest index).
int bfs(const FactorGraph& g, int start, std::vector<int>& dist, std::vector<int>& par) {
  std::fill(dist.begin(), dist.end(), -1);
  std::fill(par.begin(), par.end(), -1);
  std::queue<int> q;
  dist[static_cast<size_t>(start)] = 0;
  q.push(start);
  int farthest = start;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (dist[static_cast<size_t>(u)] > dist[static_cast<size_t>(farthest)]) farthest = u;
    for (const int v : g.adj[static_cast<size_t>(u)]) {
      if (dist[static_cast<size_t>(v)] >= 0) continue;
      dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
      par[static_cast<size_t>(v)] = u;
      q.push(v);
    }
  }
  return farthest;
}

// Double-BFS pseudo-center: midpoint of a longest shortest path from the
// lowest-indexed node's farthest vertex. Ties broken by lowest node index.
int pseudo_center(const FactorGraph& g, int lowest, std::vector<int>& dist,
                  std::vector<int>& par) {
  const int u = bfs(g, lowest, dist, par);
  const int w = bfs(g, u, dist, par);
  // Recover the u -> w path via parents of the second BFS.
  std::vector<int> path;
  for (int v = w; v != -1; v = par[static_cast<size_t>(v)]) path.push_back(v);
  const size_t len = path.size() - 1;  // edges on the path
  const int a = path[len / 2];
  const int b = path[(len + 1) / 2];
  return std::min(a, b);
}

}  // namespace

SpanningForest build_spanning_forest(const FactorGraph& graph, RootPolicy policy) {
  const int nn = graph.num_nodes();
  SpanningForest f;
  f.parent.assign(static_cast<size_t>(nn), -1);
  f.depth.assign(static_cast<size_t>(nn), -1);
  f.component.assign(static_cast<size_t>(nn), -1);

  std::vector<int> dist(static_cast<size_t>(nn)), par(static_cast<size_t>(nn));
  for (int start = 0; start < nn; ++start) {
    if (f.component[static_cast<size_t>(start)] >= 0) continue;
    const int root = policy == RootPolicy::PseudoCenter
                         ? pseudo_center(graph, start, dist, par)
                         : start;
    const int comp = f.num_components();
    f.roots.push_back(root);

    f.depth[static_cast<size_t>(root)] = 0;
    f.component[static_cast<size_t>(root)] = comp;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const int v : graph.adj[static_cast<size_t>(u)]) {
        if (f.component[static_cast<size_t>(v)] >= 0) continue;
        f.component[static_cast<size_t>(v)] = comp;
        f.parent[static_cast<size_t>(v)] = u;
        f.depth[static_cast<size_t>(v)] = f.depth[static_cast<size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return f;
}

EdgeSplitGraph split_edges(const FactorGraph& graph, const SpanningForest& forest) {
  EdgeSplitGraph s;
  s.num_vars = graph.num_vars;
  s.num_clauses = graph.num_clauses;
  for (const auto& [lnode, cnode] : graph.edges) {
    const int dl = forest.depth[static_cast<size_t>(lnode)];
    const int dc = forest.depth[static_cast<size_t>(cnode)];
    const int j = graph.clause_index(cnode);
    const bool tree = forest.parent[static_cast<size_t>(lnode)] == cnode ||
                      forest.parent[static_cast<size_t>(cnode)] == lnode;
    if (tree) {
      if (dl == dc) throw std::logic_error("tree edge with equal endpoint depths");
      (dl < dc ? s.parent : s.child).emplace_back(j, lnode);
    } else {
      if (dl == dc) throw std::logic_error("equal-depth edge in a bipartite graph");
      (dl > dc ? s.ntup : s.ntdown).emplace_back(j, lnode);
    }
  }
  auto canon = [](std::vector<std::pair<int, int>>& v) { std::sort(v.begin(), v.end()); };
  canon(s.parent);
  canon(s.child);
  canon(s.ntup);
  canon(s.ntdown);
  return s;
}

namespace {

std::vector<std::pair<int, int>> oriented(const EdgeSplitGraph& s,
                                          const std::vector<std::pair<int, int>>& lit_first,
                                          const std::vector<std::pair<int, int>>& clause_first) {
  std::vector<std::pair<int, int>> out;
  out.reserve(lit_first.size() + clause_first.size());
  const int base = 2 * s.num_vars;
  for (const auto& [j, l] : lit_first) out.emplace_back(l, base + j);
  for (const auto& [j, l] : clause_first) out.emplace_back(base + j, l);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// A tree edge whose literal endpoint is deeper (a `child` entry) is, in
// directed terms, a parent edge emitted by the clause, and vice versa; the
// same reversal ties ntup to ntdown.
std::vector<std::pair<int, int>> EdgeSplitGraph::directed_parent() const {
  return oriented(*this, parent, child);
}
std::vector<std::pair<int, int>> EdgeSplitGraph::directed_child() const {
  auto rev = oriented(*this, parent, child);
  for (auto& e : rev) std::swap(e.first, e.second);
  std::sort(rev.begin(), rev.end());
  return rev;
}
std::vector<std::pair<int, int>> EdgeSplitGraph::directed_ntup() const {
  return oriented(*this, ntup, ntdown);
}
std::vector<std::pair<int, int>> EdgeSplitGraph::directed_ntdown() const {
  auto rev = oriented(*this, ntup, ntdown);
  for (auto& e : rev) std::swap(e.first, e.second);
  std::sort(rev.begin(), rev.end());
  return rev;
}

void write_edge_split(const EdgeSplitGraph& split, std::ostream& out) {
  for (const auto& [from, to] : split.directed_parent()) out << "P " << from << ' ' << to << '\n';
  for (const auto& [from, to] : split.directed_child()) out << "C " << from << ' ' << to << '\n';
  for (const auto& [from, to] : split.directed_ntup()) out << "U " << from << ' ' << to << '\n';
  for (const auto& [from, to] : split.directed_ntdown()) out << "D " << from << ' ' << to << '\n';
}

}  // namespace splitsat
