#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splitsat/wcnf.hpp"

namespace splitsat {

/// Percentage of variables agreeing with the reference assignment.
double var_acc(const Assignment& pred, const Assignment& reference);

struct RegretReport {
  std::int64_t max_regret = 0;
  /// Instances where the solver beat the supposed best known (signals that
  /// the best-known table needs updating).
  std::vector<size_t> best_known_updates;
};

/// max_i (solver_i - best_known_i) over aligned per-instance ΔObj lists.
RegretReport max_regret(std::span<const Weight> solver, std::span<const Weight> best_known);

}  // namespace splitsat
