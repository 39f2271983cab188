#pragma once

#include <vector>

#include "splitsat/generators.hpp"
#include "splitsat/rng.hpp"
#include "splitsat/wcnf.hpp"

namespace splitsat::testutil {

// The three-clause example instance: (~x1, 3), (~x2, 4), (x1 | x2, 5).
inline WcnfFormula small_example() {
  WcnfFormula f;
  f.num_vars = 2;
  f.clauses = {
      {{{1, true}}, 3},
      {{{2, true}}, 4},
      {{{1, false}, {2, false}}, 5},
  };
  return f;
}

// (x1|x2|x3) & (~x2|x3) & (~x1|x2) & (~x3) with weights 100, 23, 7, 45.
inline WcnfFormula diagram_example() {
  WcnfFormula f;
  f.num_vars = 3;
  f.clauses = {
      {{{1, false}, {2, false}, {3, false}}, 100},
      {{{2, true}, {3, false}}, 23},
      {{{1, false}, {2, true}}, 7},
      {{{3, true}}, 45},
  };
  return f;
}

inline Assignment assignment(std::initializer_list<int> signs) {
  Assignment a;
  for (const int s : signs) a.values.push_back(s > 0 ? 1 : -1);
  return a;
}

// Independent per-clause evaluator kept deliberately separate from the
// library's cost path.
inline Weight naive_cost(const WcnfFormula& f, const Assignment& a) {
  Weight total = 0;
  for (const auto& clause : f.clauses) {
    bool sat = false;
    for (const auto& lit : clause.literals) {
      const bool value = a.values[static_cast<size_t>(lit.var - 1)] > 0;
      if ((lit.negated && !value) || (!lit.negated && value)) {
        sat = true;
        break;
      }
    }
    if (!sat) total += clause.weight;
  }
  return total;
}

inline WcnfFormula random_instance(Rng& rng, int max_n = 20, int max_m = 100) {
  GenSpec spec;
  spec.family = Family::UF;
  spec.k = rng.uniform_int(2, 3);
  spec.n = rng.uniform_int(spec.k, max_n);
  spec.m = rng.uniform_int(1, max_m);
  spec.weighted = true;
  spec.seed = rng.next_u64();
  return gen_uniform(spec);
}

inline Assignment random_assignment(int n, Rng& rng) {
  Assignment a;
  a.values.resize(static_cast<size_t>(n));
  for (auto& v : a.values) v = rng.coin() ? 1 : -1;
  return a;
}

}  // namespace splitsat::testutil
