#include "splitsat/score.hpp"

#include <stdexcept>

namespace splitsat {

ScoreReport compute_scores(const Assignment& alpha, const InstanceMatrices& mats,
                           bool use_scatter_path) {
  if (alpha.size() != mats.num_vars)
    throw std::invalid_argument("compute_scores: dimension mismatch");
  const auto m = static_cast<size_t>(mats.num_clauses);
  const auto n = static_cast<size_t>(mats.num_vars);

  ScoreReport r;
  r.unsat.assign(m, 0);
  r.one_sat.assign(m, 0);
  r.true_lit_count.assign(m, 0);
  r.add.assign(n, 0);
  r.del.assign(n, 0);
  r.score.assign(n, 0);

  const std::vector<Score> v = row_times_unit(alpha, mats);
  for (size_t j = 0; j < m; ++j) {
    // t_j = (alpha x W_unit - S) / 2: true minus false literal count, shifted.
    const int t = static_cast<int>((v[j] - mats.s[j]) / 2);
    r.true_lit_count[j] = t;
    r.unsat[j] = t == 0;
    r.one_sat[j] = t == 1;
  }

  // Add: every variable of a falsified clause gains its weight by flipping.
  for (size_t j = 0; j < m; ++j) {
    if (!r.unsat[j]) continue;
    for (int e = mats.col_ptr[j]; e < mats.col_ptr[j + 1]; ++e)
      r.add[static_cast<size_t>(mats.col_var[static_cast<size_t>(e)])] += mats.cw[j];
  }

  if (!use_scatter_path) {
    // Del: the sole satisfier of a one-sat clause loses its weight.
    for (size_t j = 0; j < m; ++j) {
      if (!r.one_sat[j]) continue;
      for (int e = mats.col_ptr[j]; e < mats.col_ptr[j + 1]; ++e) {
        const auto i = static_cast<size_t>(mats.col_var[static_cast<size_t>(e)]);
        if (alpha.values[i] * mats.col_sign[static_cast<size_t>(e)] > 0) {
          r.del[i] += mats.cw[j];
          break;
        }
      }
    }
  } else {
    // M_o = O ∘ W ∘ alpha^T streamed entrywise; the per-column maximum is
    // +CW_j exactly at the sole satisfier.
    std::vector<Score> vals;
    std::vector<int> rows, cols;
    for (size_t j = 0; j < m; ++j) {
      if (!r.one_sat[j]) continue;
      for (int e = mats.col_ptr[j]; e < mats.col_ptr[j + 1]; ++e) {
        const auto i = static_cast<size_t>(mats.col_var[static_cast<size_t>(e)]);
        vals.push_back(static_cast<Score>(mats.cw[j]) * mats.col_sign[static_cast<size_t>(e)] *
                       alpha.values[i]);
        rows.push_back(static_cast<int>(i));
        cols.push_back(static_cast<int>(j));
      }
    }
    const SegmentMax mx = segment_max(vals, rows, cols, mats.num_clauses);
    std::vector<int> pos;
    std::vector<Score> val;
    for (size_t j = 0; j < m; ++j) {
      if (!r.one_sat[j]) continue;
      pos.push_back(mx.pos[j]);
      val.push_back(mx.val[j]);
    }
    const std::vector<Score> del = segment_add(pos, val, mats.num_vars);
    for (size_t i = 0; i < n; ++i) r.del[i] = static_cast<Weight>(del[i]);
  }

  for (size_t i = 0; i < n; ++i)
    r.score[i] = static_cast<Score>(r.add[i]) - static_cast<Score>(r.del[i]);
  return r;
}

Weight cost_from_report(const ScoreReport& report, const InstanceMatrices& mats) {
  Weight total = 0;
  for (size_t j = 0; j < report.unsat.size(); ++j)
    if (report.unsat[j]) total += mats.cw[j];
  return total;
}

}  // namespace splitsat
