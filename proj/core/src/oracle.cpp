#include "splitsat/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace splitsat {

namespace {

struct Occurrence {
  int clause;
  std::int8_t sign;  // +1 positive, -1 negated
};

class BranchAndBound {
 public:
  BranchAndBound(const WcnfFormula& formula, OracleLimits limits)
      : formula_(formula), limits_(limits) {
    const int n = formula.num_vars;
    const auto m = static_cast<int>(formula.clauses.size());
    occ_.resize(static_cast<size_t>(n));
    pos_weight_.assign(static_cast<size_t>(n), 0);
    neg_weight_.assign(static_cast<size_t>(n), 0);
    unassigned_.resize(static_cast<size_t>(m));
    satisfied_.assign(static_cast<size_t>(m), false);
    for (int j = 0; j < m; ++j) {
      const Clause& c = formula.clauses[static_cast<size_t>(j)];
      unassigned_[static_cast<size_t>(j)] = static_cast<int>(c.literals.size());
      for (const Literal& l : c.literals) {
        occ_[static_cast<size_t>(l.var - 1)].push_back(
            {j, static_cast<std::int8_t>(l.negated ? -1 : 1)});
        (l.negated ? neg_weight_ : pos_weight_)[static_cast<size_t>(l.var - 1)] += c.weight;
      }
    }
    order_.resize(static_cast<size_t>(n));
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      const Weight wa = pos_weight_[static_cast<size_t>(a)] + neg_weight_[static_cast<size_t>(a)];
      const Weight wb = pos_weight_[static_cast<size_t>(b)] + neg_weight_[static_cast<size_t>(b)];
      return wa != wb ? wa > wb : a < b;
    });
    values_.assign(static_cast<size_t>(n), 0);
  }

  OracleResult run() {
    // Seed the incumbent with the majority-polarity assignment so pruning
    // bites from the first descent.
    Assignment greedy;
    greedy.values.resize(static_cast<size_t>(formula_.num_vars));
    for (int v = 0; v < formula_.num_vars; ++v)
      greedy.values[static_cast<size_t>(v)] =
          pos_weight_[static_cast<size_t>(v)] >= neg_weight_[static_cast<size_t>(v)] ? 1 : -1;
    best_ = greedy;
    best_cost_ = cost(formula_, greedy);

    descend(0);

    OracleResult r;
    r.optimal_cost = best_cost_;
    r.optimal_assignment = best_;
    r.proven = !truncated_;
    r.nodes_explored = nodes_;
    return r;
  }

 private:
  void descend(size_t depth) {
    if (falsified_ >= best_cost_) return;  // lower bound: already-falsified weight
    if (depth == order_.size()) {
      best_cost_ = falsified_;
      for (size_t v = 0; v < values_.size(); ++v) best_.values[v] = values_[v];
      return;
    }
    if (limits_.node_budget && nodes_ >= limits_.node_budget) {
      truncated_ = true;
      return;
    }
    const int var = order_[depth];
    const std::int8_t first =
        pos_weight_[static_cast<size_t>(var)] >= neg_weight_[static_cast<size_t>(var)] ? 1 : -1;
    for (const std::int8_t value : {first, static_cast<std::int8_t>(-first)}) {
      ++nodes_;
      const size_t trail_mark = trail_.size();
      const Weight falsified_mark = falsified_;
      assign(var, value);
      descend(depth + 1);
      undo(var, value, trail_mark, falsified_mark);
      if (truncated_) return;
    }
  }

  void assign(int var, std::int8_t value) {
    values_[static_cast<size_t>(var)] = value;
    for (const Occurrence& o : occ_[static_cast<size_t>(var)]) {
      const auto j = static_cast<size_t>(o.clause);
      if (satisfied_[j]) continue;
      if (o.sign == value) {
        satisfied_[j] = true;
        trail_.push_back(o.clause);
      } else if (--unassigned_[j] == 0) {
        falsified_ += formula_.clauses[j].weight;
      }
    }
  }

  void undo(int var, std::int8_t value, size_t trail_mark, Weight falsified_mark) {
    while (trail_.size() > trail_mark) {
      satisfied_[static_cast<size_t>(trail_.back())] = false;
      trail_.pop_back();
    }
    for (const Occurrence& o : occ_[static_cast<size_t>(var)]) {
      const auto j = static_cast<size_t>(o.clause);
      if (!satisfied_[j] && o.sign != value) ++unassigned_[j];
    }
    falsified_ = falsified_mark;
  }

  const WcnfFormula& formula_;
  OracleLimits limits_;
  std::vector<std::vector<Occurrence>> occ_;
  std::vector<Weight> pos_weight_, neg_weight_;
  std::vector<int> order_;
  std::vector<std::int8_t> values_;
  std::vector<int> unassigned_;
  std::vector<bool> satisfied_;
  std::vector<int> trail_;
  Weight falsified_ = 0;
  Weight best_cost_ = 0;
  Assignment best_;
  std::uint64_t nodes_ = 0;
  bool truncated_ = false;
};

}  // namespace

OracleResult exact_solve(const WcnfFormula& formula, OracleLimits limits) {
  if (formula.num_vars == 0) {
    OracleResult r;
    r.optimal_cost = formula.total_weight();
    r.proven = true;
    return r;
  }
  return BranchAndBound(formula, limits).run();
}

}  // namespace splitsat
