#pragma once

#include <cstdint>
#include <vector>

#include "splitsat/matrices.hpp"
#include "splitsat/wcnf.hpp"

namespace splitsat {

/// Exact flip-gain report for one assignment: score[v] is the cost decrease
/// obtained by flipping variable v (positive = improvement).
struct ScoreReport {
  std::vector<std::uint8_t> unsat;       // U_j: clause j falsified
  std::vector<std::uint8_t> one_sat;     // O_j: exactly one true literal
  std::vector<int> true_lit_count;       // t_j
  std::vector<Weight> add;               // weights of falsified clauses touching v
  std::vector<Weight> del;               // weights of clauses v solely satisfies
  std::vector<Score> score;              // add - del
};

/// Recomputes all flip gains from scratch for the given assignment.
/// `use_scatter_path` switches Del to the segment-max/segment-add pipeline
/// (same result, kept selectable for verification).
ScoreReport compute_scores(const Assignment& alpha, const InstanceMatrices& mats,
                           bool use_scatter_path = false);

/// Sum of U_j * CW_j; equals cost(formula, alpha) for the alpha the report
/// was computed from.
Weight cost_from_report(const ScoreReport& report, const InstanceMatrices& mats);

}  // namespace splitsat
