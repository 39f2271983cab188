#pragma once

#include <cstdint>

#include "splitsat/wcnf.hpp"

namespace splitsat {

struct OracleLimits {
  std::uint64_t node_budget = 0;  // 0 = unlimited
};

struct OracleResult {
  Weight optimal_cost = 0;
  Assignment optimal_assignment;
  bool proven = false;
  std::uint64_t nodes_explored = 0;
};

/// Branch-and-bound over partial assignments with the falsified-weight lower
/// bound. Variables are branched in descending occurrence-weight order, the
/// heavier polarity first. Exact (proven=true) unless the node budget
/// truncates the search, in which case the best incumbent is returned.
OracleResult exact_solve(const WcnfFormula& formula, OracleLimits limits = {});

}  // namespace splitsat
