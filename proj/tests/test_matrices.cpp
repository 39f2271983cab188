#include <doctest.h>

#include <vector>

#include "splitsat/matrices.hpp"
#include "test_util.hpp"

using namespace splitsat;
using namespace splitsat::testutil;

namespace {

// Dense reconstruction of W for oracle comparisons.
std::vector<std::vector<Score>> dense_w(const InstanceMatrices& m, bool unit) {
  std::vector<std::vector<Score>> w(static_cast<size_t>(m.num_vars),
                                    std::vector<Score>(static_cast<size_t>(m.num_clauses), 0));
  for (int j = 0; j < m.num_clauses; ++j)
    for (int e = m.col_ptr[static_cast<size_t>(j)]; e < m.col_ptr[static_cast<size_t>(j) + 1]; ++e) {
      const Score v = unit ? m.col_sign[static_cast<size_t>(e)]
                           : m.col_sign[static_cast<size_t>(e)] *
                                 static_cast<Score>(m.cw[static_cast<size_t>(j)]);
      w[static_cast<size_t>(m.col_var[static_cast<size_t>(e)])][static_cast<size_t>(j)] = v;
    }
  return w;
}

}  // namespace

TEST_CASE("matrices of the small example") {
  const InstanceMatrices m = build_matrices(small_example());
  CHECK(dense_w(m, false) ==
        std::vector<std::vector<Score>>{{-3, 0, 5}, {0, -4, 5}});
  CHECK(m.s == std::vector<Score>{-1, -1, -2});
  CHECK(m.cw == std::vector<Weight>{3, 4, 5});
  CHECK(m.nnz() == 4);
}

TEST_CASE("unweighted instance: W equals W_unit") {
  GenSpec spec;
  spec.weighted = false;
  spec.seed = 9;
  const InstanceMatrices m = build_matrices(gen_uniform(spec));
  CHECK(dense_w(m, false) == dense_w(m, true));
}

TEST_CASE("diagram formula: last column is a single negative entry") {
  const InstanceMatrices m = build_matrices(diagram_example());
  CHECK(m.col_ptr[4] - m.col_ptr[3] == 1);
  const int e = m.col_ptr[3];
  CHECK(m.col_var[static_cast<size_t>(e)] == 2);
  CHECK(m.col_sign[static_cast<size_t>(e)] == -1);
  CHECK(m.s[3] == -1);
  CHECK(dense_w(m, false)[2][3] == -45);
}

TEST_CASE("row and column structures describe the same matrix") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const WcnfFormula f = random_instance(rng);
    const InstanceMatrices m = build_matrices(f);
    size_t expected_nnz = 0;
    for (const auto& c : f.clauses) expected_nnz += c.literals.size();
    CHECK(m.nnz() == expected_nnz);
    auto from_rows = std::vector<std::vector<Score>>(
        static_cast<size_t>(m.num_vars),
        std::vector<Score>(static_cast<size_t>(m.num_clauses), 0));
    for (int i = 0; i < m.num_vars; ++i)
      for (int e = m.row_ptr[static_cast<size_t>(i)]; e < m.row_ptr[static_cast<size_t>(i) + 1]; ++e)
        from_rows[static_cast<size_t>(i)][static_cast<size_t>(m.row_clause[static_cast<size_t>(e)])] =
            m.row_sign[static_cast<size_t>(e)];
    CHECK(from_rows == dense_w(m, true));
  }
}

TEST_CASE("row_times on the worked example") {
  const InstanceMatrices m = build_matrices(small_example());
  CHECK(row_times_unit(assignment({-1, +1}), m) == std::vector<Score>{1, -1, 0});
}

TEST_CASE("row_times matches a dense product") {
  Rng rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    GenSpec spec;
    spec.n = 12;
    spec.k = rng.uniform_int(2, 3);
    spec.m = rng.uniform_int(1, 50);
    spec.seed = rng.next_u64();
    const WcnfFormula f = gen_uniform(spec);
    const InstanceMatrices m = build_matrices(f);
    const Assignment a = random_assignment(f.num_vars, rng);
    for (const bool unit : {true, false}) {
      const auto w = dense_w(m, unit);
      std::vector<Score> expect(static_cast<size_t>(m.num_clauses), 0);
      for (int j = 0; j < m.num_clauses; ++j)
        for (int i = 0; i < m.num_vars; ++i)
          expect[static_cast<size_t>(j)] +=
              a.values[static_cast<size_t>(i)] * w[static_cast<size_t>(i)][static_cast<size_t>(j)];
      CHECK((unit ? row_times_unit(a, m) : row_times_weighted(a, m)) == expect);
    }
  }
}

TEST_CASE("row_times true-literal identity") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const WcnfFormula f = random_instance(rng);
    const InstanceMatrices m = build_matrices(f);
    const Assignment a = random_assignment(f.num_vars, rng);
    const auto v = row_times_unit(a, m);
    for (size_t j = 0; j < f.clauses.size(); ++j) {
      int true_lits = 0;
      for (const auto& lit : f.clauses[j].literals) true_lits += a.is_true(lit);
      CHECK(v[j] == 2 * true_lits - static_cast<int>(f.clauses[j].literals.size()));
    }
  }
}

TEST_CASE("segment_max worked example") {
  // M_o = [[3, 0, -5], [0, 0, 5]] streamed as entries.
  const std::vector<Score> vals = {3, -5, 5};
  const std::vector<int> rows = {0, 0, 1};
  const std::vector<int> cols = {0, 2, 2};
  const SegmentMax mx = segment_max(vals, rows, cols, 3);
  CHECK(mx.val == std::vector<Score>{3, 0, 5});
  CHECK(mx.pos == std::vector<int>{0, SegmentMax::kNoPos, 1});
}

TEST_CASE("segment_max single entry and ties") {
  const SegmentMax single = segment_max(std::vector<Score>{7}, std::vector<int>{4},
                                        std::vector<int>{0}, 1);
  CHECK(single.val == std::vector<Score>{7});
  CHECK(single.pos == std::vector<int>{4});

  const SegmentMax tie = segment_max(std::vector<Score>{5, 5}, std::vector<int>{3, 1},
                                     std::vector<int>{0, 0}, 1);
  CHECK(tie.pos == std::vector<int>{1});
}

TEST_CASE("segment_max matches a dense column scan") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 10), m = rng.uniform_int(1, 10);
    std::vector<Score> vals;
    std::vector<int> rows, cols;
    std::vector<std::vector<std::pair<Score, int>>> dense(static_cast<size_t>(m));
    for (int e = 0, count = rng.uniform_int(0, 30); e < count; ++e) {
      const Score v = rng.uniform_int(-50, 50);
      const int r = rng.uniform_int(0, n - 1), c = rng.uniform_int(0, m - 1);
      vals.push_back(v);
      rows.push_back(r);
      cols.push_back(c);
      dense[static_cast<size_t>(c)].push_back({v, r});
    }
    const SegmentMax mx = segment_max(vals, rows, cols, m);
    for (int c = 0; c < m; ++c) {
      auto& col = dense[static_cast<size_t>(c)];
      if (col.empty()) {
        CHECK(mx.pos[static_cast<size_t>(c)] == SegmentMax::kNoPos);
        CHECK(mx.val[static_cast<size_t>(c)] == 0);
        continue;
      }
      Score best = col[0].first;
      int best_row = col[0].second;
      for (const auto& [v, r] : col)
        if (v > best || (v == best && r < best_row)) {
          best = v;
          best_row = r;
        }
      CHECK(mx.val[static_cast<size_t>(c)] == best);
      CHECK(mx.pos[static_cast<size_t>(c)] == best_row);
    }
  }
}

TEST_CASE("segment_add") {
  CHECK(segment_add(std::vector<int>{0, 1}, std::vector<Score>{3, 5}, 2) ==
        std::vector<Score>{3, 5});
  CHECK(segment_add(std::vector<int>{}, std::vector<Score>{}, 3) ==
        std::vector<Score>{0, 0, 0});

  Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(1, 12);
    std::vector<int> pos;
    std::vector<Score> vals;
    std::vector<Score> expect(static_cast<size_t>(n), 0);
    for (int e = 0, count = rng.uniform_int(0, 40); e < count; ++e) {
      const int p = rng.uniform_int(0, n - 1);
      const Score v = rng.uniform_int(-100, 100);
      pos.push_back(p);
      vals.push_back(v);
      expect[static_cast<size_t>(p)] += v;
    }
    CHECK(segment_add(pos, vals, n) == expect);
  }
}
