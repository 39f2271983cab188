#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "splitsat/model.hpp"
#include "splitsat/train.hpp"
#include "test_util.hpp"

using namespace splitsat;
using namespace splitsat::testutil;

namespace {

ModelConfig tiny_cfg(int d = 8, int rounds = 2) {
  ModelConfig cfg;
  cfg.dim = d;
  cfg.rounds = rounds;
  return cfg;
}

bool params_equal(const ParamSet<Mat>& a, const ParamSet<Mat>& b) {
  bool equal = true;
  for_each_param(
      [&](const std::string&, const Mat& x, const Mat& y) {
        equal = equal && x.rows == y.rows && x.cols == y.cols && x.a == y.a;
      },
      a, b);
  return equal;
}

}  // namespace

TEST_CASE("autodiff primitives match finite differences") {
  Rng rng(1);
  auto rand_mat = [&](int r, int c) {
    Mat m(r, c);
    for (auto& v : m.a) v = rng.normal();
    return m;
  };

  // loss = sum(sigmoid(lstm(tanh(x W^T + b), h, c))) exercised entry by entry.
  const Mat x0 = rand_mat(3, 4), w0 = rand_mat(6, 4), b0 = rand_mat(1, 6);
  const Mat h0 = rand_mat(3, 5), c0 = rand_mat(3, 5);
  const Mat lw = rand_mat(20, 11), lb = rand_mat(1, 20);
  std::vector<double> y = {1, 0, 1};

  auto eval = [&](const Mat& w, bool backward, Mat* grad_out) {
    Tape t;
    const auto xi = t.input(x0);
    const auto wi = t.input(w);
    const auto bi = t.input(b0);
    const auto hi = t.input(h0);
    const auto ci = t.input(c0);
    const auto lwi = t.input(lw);
    const auto lbi = t.input(lb);
    const auto hidden = t.tanh_op(t.linear(xi, wi, bi));
    Tape::Id cell = -1;
    const auto out = lstm_cell(t, hidden, hi, ci, lwi, lbi, &cell);
    const auto probe = t.sigmoid(t.rowwise_dot(out, out));
    const auto loss = t.bce_mean(probe, y, 1e-9);
    if (backward) {
      t.backward(loss);
      *grad_out = t.grad(wi);
    }
    return t.val(loss).at(0, 0);
  };

  Mat analytic;
  eval(w0, true, &analytic);
  const double h = 1e-5;
  for (size_t i = 0; i < w0.size(); ++i) {
    Mat up = w0, dn = w0;
    up.a[i] += h;
    dn.a[i] -= h;
    const double numeric = (eval(up, false, nullptr) - eval(dn, false, nullptr)) / (2 * h);
    CHECK(std::abs(analytic.a[i] - numeric) /
              std::max({std::abs(analytic.a[i]), std::abs(numeric), 1.0}) <
          1e-6);
  }
}

TEST_CASE("parameter count is a pure function of the width") {
  const ModelParams m = ModelParams::init(tiny_cfg(16, 8), 1);
  CHECK(m.parameter_count() == parameter_count(m.cfg));
  CHECK(m.parameter_count() == 52 * 16 * 16 + 33 * 16 + 1);
}

TEST_CASE("probabilities are in the open unit interval") {
  Rng rng(21);
  const WcnfFormula f = random_instance(rng, 12, 40);
  const ModelParams m = ModelParams::init(tiny_cfg(), 7);
  const std::vector<double> p = model_forward(m, build_graph_tensors(f));
  REQUIRE(static_cast<int>(p.size()) == f.num_vars);
  for (const double v : p) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("zero rounds collapse every variable to the same probability") {
  Rng rng(23);
  const WcnfFormula f = random_instance(rng, 10, 30);
  const ModelParams m = ModelParams::init(tiny_cfg(8, 0), 3);
  const std::vector<double> p = model_forward(m, build_graph_tensors(f));
  for (const double v : p) CHECK(v == doctest::Approx(p[0]).epsilon(1e-12));
}

TEST_CASE("variable permutation equivariance") {
  Rng rng(25);
  const WcnfFormula f = random_instance(rng, 10, 30);
  const int n = f.num_vars;

  // Reversal permutation pi(v) = n + 1 - v.
  WcnfFormula g = f;
  for (auto& clause : g.clauses)
    for (auto& lit : clause.literals) lit.var = n + 1 - lit.var;

  const FactorGraph fg = build_factor_graph(f);
  const SpanningForest forest = build_spanning_forest(fg);
  const FactorGraph gg = build_factor_graph(g);

  // Carry the forest through the permutation rather than rebuilding it.
  auto map_node = [&](int node) {
    if (node >= fg.num_literal_nodes()) return node;  // clause ids unchanged
    const int var = node / 2;
    return 2 * (n - 1 - var) + node % 2;
  };
  SpanningForest mapped;
  mapped.parent.assign(forest.parent.size(), -1);
  mapped.depth.assign(forest.depth.size(), -1);
  mapped.component.assign(forest.component.size(), -1);
  mapped.roots = forest.roots;
  for (auto& r : mapped.roots) r = map_node(r);
  for (size_t node = 0; node < forest.parent.size(); ++node) {
    const auto to = static_cast<size_t>(map_node(static_cast<int>(node)));
    mapped.parent[to] =
        forest.parent[node] >= 0 ? map_node(forest.parent[node]) : -1;
    mapped.depth[to] = forest.depth[node];
    mapped.component[to] = forest.component[node];
  }

  std::vector<Weight> cw;
  for (const auto& c : f.clauses) cw.push_back(c.weight);

  const ModelParams m = ModelParams::init(tiny_cfg(8, 3), 11);
  const auto p1 = model_forward(m, build_graph_tensors(split_edges(fg, forest), cw));
  const auto p2 = model_forward(m, build_graph_tensors(split_edges(gg, mapped), cw));
  for (int v = 0; v < n; ++v)
    CHECK(p1[static_cast<size_t>(v)] ==
          doctest::Approx(p2[static_cast<size_t>(n - 1 - v)]).epsilon(1e-9));
}

TEST_CASE("non-tree pathways are inert on forest-shaped graphs") {
  // The diagram formula's factor graph is a forest, so ntup/ntdown message
  // slots receive empty matrices and their aggregators must not matter.
  const WcnfFormula f = diagram_example();
  const GraphTensors g = build_graph_tensors(f);
  CHECK(g.lit_to_clause[2].coef.empty());
  CHECK(g.lit_to_clause[3].coef.empty());

  ModelParams m = ModelParams::init(tiny_cfg(8, 3), 13);
  const std::vector<double> base = model_forward(m, g);

  Rng rng(17);
  for (const size_t cls : {2ull, 3ull}) {
    for (auto& v : m.p.agg_lit[cls].w1.a) v = rng.normal();
    for (auto& v : m.p.agg_lit[cls].b1.a) v = rng.normal();
    for (auto& v : m.p.agg_clause[cls].w2.a) v = rng.normal();
    for (auto& v : m.p.agg_clause[cls].b2.a) v = rng.normal();
  }
  const std::vector<double> perturbed = model_forward(m, g);
  CHECK(base == perturbed);  // bit identical
}

TEST_CASE("unused class aggregators receive exactly zero gradient") {
  const WcnfFormula f = diagram_example();
  const GraphTensors g = build_graph_tensors(f);
  const ModelParams m = ModelParams::init(tiny_cfg(8, 2), 19);
  ForwardPass fp(m, g);
  std::vector<double> y(static_cast<size_t>(f.num_vars), 1.0);
  fp.loss_and_backward(y);
  const ParamSet<Mat> grads = fp.gradients();
  for (const size_t cls : {2ull, 3ull}) {
    for (const double v : grads.agg_lit[cls].w1.a) CHECK(v == 0.0);
    for (const double v : grads.agg_lit[cls].w2.a) CHECK(v == 0.0);
    for (const double v : grads.agg_clause[cls].w1.a) CHECK(v == 0.0);
    for (const double v : grads.agg_clause[cls].w2.a) CHECK(v == 0.0);
  }
}

TEST_CASE("bce loss reference values") {
  const std::vector<double> half = {0.5, 0.5, 0.5};
  CHECK(bce_loss(half, std::vector<double>{1, 0, 1}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const std::vector<double> perfect = {1.0, 0.0};
  const double delta = 1e-7;
  CHECK(bce_loss(perfect, std::vector<double>{1, 0}, delta) ==
        doctest::Approx(-std::log(1.0 - delta)).epsilon(1e-6));

  // Tape op agrees with the scalar reference.
  Rng rng(31);
  Mat p(5, 1);
  std::vector<double> y(5);
  for (auto& v : p.a) v = rng.uniform_real(0.05, 0.95);
  for (auto& v : y) v = rng.coin() ? 1.0 : 0.0;
  Tape t;
  const auto pid = t.input(p);
  const auto loss = t.bce_mean(pid, y, 1e-7);
  CHECK(t.val(loss).at(0, 0) == doctest::Approx(bce_loss(p.a, y)).epsilon(1e-12));
}

TEST_CASE("model gradients match finite differences") {
  GenSpec spec;
  spec.n = 6;
  spec.k = 2;
  spec.m = 8;
  spec.seed = 99;
  const WcnfFormula f = gen_uniform(spec);
  const GraphTensors g = build_graph_tensors(f);
  const ModelParams m = ModelParams::init(tiny_cfg(8, 2), 5);
  Rng rng(7);
  std::vector<double> y(static_cast<size_t>(f.num_vars));
  for (auto& v : y) v = rng.coin() ? 1.0 : 0.0;
  CHECK(grad_check(m, g, y, 1e-4) < 1e-4);
}

TEST_CASE("init is reproducible and checkpoints round trip bit-exactly") {
  const ModelParams a = ModelParams::init(tiny_cfg(8, 2), 123);
  const ModelParams b = ModelParams::init(tiny_cfg(8, 2), 123);
  CHECK(params_equal(a.p, b.p));

  const auto path = std::filesystem::temp_directory_path() / "splitsat_ckpt_test.txt";
  Checkpoint out{a, AdamW::create(a, 1e-3, 1e-10), 17};
  out.optimizer->t = 42;
  out.optimizer->m1[0].a[0] = 0.25;
  save_checkpoint(path, out);
  const Checkpoint in = load_checkpoint(path);
  CHECK(in.model.cfg == a.cfg);
  CHECK(in.epoch == 17);
  CHECK(params_equal(in.model.p, a.p));
  REQUIRE(in.optimizer.has_value());
  CHECK(in.optimizer->t == 42);
  CHECK(in.optimizer->m1[0].a[0] == 0.25);
  std::filesystem::remove(path);
}

TEST_CASE("loading a truncated checkpoint fails loudly") {
  const auto path = std::filesystem::temp_directory_path() / "splitsat_ckpt_bad.txt";
  {
    std::ofstream out(path);
    out << "splitsat-checkpoint 1\ndim 8\nrounds 2\nswapped 1\nepoch 0\n";
  }
  CHECK_THROWS(load_checkpoint(path));
  std::filesystem::remove(path);
}
