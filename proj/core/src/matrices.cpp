#include "splitsat/matrices.hpp"

#include <stdexcept>

namespace splitsat {

InstanceMatrices build_matrices(const WcnfFormula& formula) {
  InstanceMatrices m;
  m.num_vars = formula.num_vars;
  m.num_clauses = static_cast<int>(formula.clauses.size());
  m.cw.reserve(static_cast<size_t>(m.num_clauses));
  m.s.reserve(static_cast<size_t>(m.num_clauses));

  size_t nnz = 0;
  for (const auto& c : formula.clauses) nnz += c.literals.size();

  m.col_ptr.reserve(static_cast<size_t>(m.num_clauses) + 1);
  m.col_var.reserve(nnz);
  m.col_sign.reserve(nnz);
  m.col_ptr.push_back(0);
  std::vector<int> row_count(static_cast<size_t>(m.num_vars), 0);
  for (const auto& clause : formula.clauses) {
    m.cw.push_back(clause.weight);
    m.s.push_back(-static_cast<Score>(clause.literals.size()));
    for (const auto& lit : clause.literals) {
      m.col_var.push_back(lit.var - 1);
      m.col_sign.push_back(lit.negated ? -1 : 1);
      ++row_count[static_cast<size_t>(lit.var - 1)];
    }
    m.col_ptr.push_back(static_cast<int>(m.col_var.size()));
  }

  m.row_ptr.assign(static_cast<size_t>(m.num_vars) + 1, 0);
  for (int i = 0; i < m.num_vars; ++i)
    m.row_ptr[static_cast<size_t>(i) + 1] = m.row_ptr[static_cast<size_t>(i)] + row_count[static_cast<size_t>(i)];
  m.row_clause.resize(nnz);
  m.row_sign.resize(nnz);
  std::vector<int> cursor(m.row_ptr.begin(), m.row_ptr.end() - 1);
  for (int j = 0; j < m.num_clauses; ++j) {
    for (int e = m.col_ptr[static_cast<size_t>(j)]; e < m.col_ptr[static_cast<size_t>(j) + 1]; ++e) {
      const int i = m.col_var[static_cast<size_t>(e)];
      const int at = cursor[static_cast<size_t>(i)]++;
      m.row_clause[static_cast<size_t>(at)] = j;
      m.row_sign[static_cast<size_t>(at)] = m.col_sign[static_cast<size_t>(e)];
    }
  }
  return m;
}

namespace {

std::vector<Score> row_times(const Assignment& alpha, const InstanceMatrices& m, bool weighted) {
  if (alpha.size() != m.num_vars) throw std::invalid_argument("row_times: dimension mismatch");
  std::vector<Score> v(static_cast<size_t>(m.num_clauses), 0);
  for (int j = 0; j < m.num_clauses; ++j) {
    Score acc = 0;
    for (int e = m.col_ptr[static_cast<size_t>(j)]; e < m.col_ptr[static_cast<size_t>(j) + 1]; ++e) {
      const Score a = alpha.values[static_cast<size_t>(m.col_var[static_cast<size_t>(e)])];
      const Score entry = weighted ? static_cast<Score>(m.cw[static_cast<size_t>(j)]) *
                                         m.col_sign[static_cast<size_t>(e)]
                                   : static_cast<Score>(m.col_sign[static_cast<size_t>(e)]);
      acc += a * entry;
    }
    v[static_cast<size_t>(j)] = acc;
  }
  return v;
}

}  // namespace

std::vector<Score> row_times_unit(const Assignment& alpha, const InstanceMatrices& mats) {
  return row_times(alpha, mats, false);
}

std::vector<Score> row_times_weighted(const Assignment& alpha, const InstanceMatrices& mats) {
  return row_times(alpha, mats, true);
}

SegmentMax segment_max(std::span<const Score> values, std::span<const int> row_ids,
                       std::span<const int> column_ids, int num_columns) {
  SegmentMax out;
  out.pos.assign(static_cast<size_t>(num_columns), SegmentMax::kNoPos);
  out.val.assign(static_cast<size_t>(num_columns), 0);
  for (size_t e = 0; e < values.size(); ++e) {
    const auto j = static_cast<size_t>(column_ids[e]);
    const bool better = out.pos[j] == SegmentMax::kNoPos || values[e] > out.val[j] ||
                        (values[e] == out.val[j] && row_ids[e] < out.pos[j]);
    if (better) {
      out.pos[j] = row_ids[e];
      out.val[j] = values[e];
    }
  }
  return out;
}

std::vector<Score> segment_add(std::span<const int> positions, std::span<const Score> values,
                               int out_size) {
  std::vector<Score> out(static_cast<size_t>(out_size), 0);
  for (size_t e = 0; e < positions.size(); ++e)
    out[static_cast<size_t>(positions[e])] += values[e];
  return out;
}

}  // namespace splitsat
