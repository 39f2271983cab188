#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "splitsat/wcnf.hpp"

namespace splitsat {

using Score = std::int64_t;

/// Sparse incidence matrices of an instance in both orientations. The
/// conceptual n x m matrix W has entry (i,j) = +CW_j when x_i occurs in
/// clause j and -CW_j when its negation does; W_unit is its sign and W_pos
/// its absolute value, so only the signs and the per-clause weights are
/// stored. S_j = -|C_j|.
struct InstanceMatrices {
  int num_vars = 0;
  int num_clauses = 0;
  std::vector<Weight> cw;
  std::vector<Score> s;

  // Column-major: entries of clause j at [col_ptr[j], col_ptr[j+1]).
  std::vector<int> col_ptr;
  std::vector<int> col_var;
  std::vector<std::int8_t> col_sign;

  // Row-major: entries of variable i at [row_ptr[i], row_ptr[i+1]).
  std::vector<int> row_ptr;
  std::vector<int> row_clause;
  std::vector<std::int8_t> row_sign;

  size_t nnz() const { return col_var.size(); }
};

InstanceMatrices build_matrices(const WcnfFormula& formula);

/// v_j = sum_i alpha_i * (W_unit)_ij, i.e. true-literal count minus
/// false-literal count per clause.
std::vector<Score> row_times_unit(const Assignment& alpha, const InstanceMatrices& mats);

/// v_j = sum_i alpha_i * W_ij.
std::vector<Score> row_times_weighted(const Assignment& alpha, const InstanceMatrices& mats);

/// Per-column maximum over sparse entries (value, row, column). Empty
/// columns report value 0 and position kNoPos; ties resolve to the lowest
/// row index.
struct SegmentMax {
  static constexpr int kNoPos = -1;
  std::vector<int> pos;  // row index attaining the column maximum
  std::vector<Score> val;
};
SegmentMax segment_max(std::span<const Score> values, std::span<const int> row_ids,
                       std::span<const int> column_ids, int num_columns);

/// out[p] = sum of values at position p.
std::vector<Score> segment_add(std::span<const int> positions, std::span<const Score> values,
                               int out_size);

}  // namespace splitsat
