#include "splitsat/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace splitsat {

void ModelConfig::validate() const {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("model dim must be even and at least 2");
  if (rounds < 0) throw std::invalid_argument("model rounds must be non-negative");
}

namespace {

Mat xavier(int out, int in, Rng& rng) {
  Mat m(out, in);
  const double a = std::sqrt(6.0 / (in + out));
  for (auto& v : m.a) v = rng.uniform_real(-a, a);
  return m;
}

Mat zeros(int r, int c) { return Mat(r, c); }

}  // namespace

ModelParams ModelParams::init(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int d = cfg.dim;
  Rng rng(seed);
  ModelParams m;
  m.cfg = cfg;

  m.p.lit_init = Mat(1, d);
  m.p.clause_init = Mat(1, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (auto& v : m.p.lit_init.a) v = rng.normal() * s;
  for (auto& v : m.p.clause_init.a) v = rng.normal() * s;

  auto init_mlp = [&](auto& mlp, int in, int hidden, int out) {
    mlp.w1 = xavier(hidden, in, rng);
    mlp.b1 = zeros(1, hidden);
    mlp.w2 = xavier(out, hidden, rng);
    mlp.b2 = zeros(1, out);
  };
  for (auto& mlp : m.p.agg_lit) init_mlp(mlp, d, d, d);
  init_mlp(m.p.agg_lit_merge, 4 * d, d, d);
  for (auto& mlp : m.p.agg_clause) init_mlp(mlp, d, d, d);
  init_mlp(m.p.agg_clause_merge, 4 * d, d, d);

  auto init_lstm = [&](Mat& w, Mat& b, int in) {
    w = xavier(4 * d, in + d, rng);
    b = zeros(1, 4 * d);
    for (int j = d; j < 2 * d; ++j) b.at(0, j) = 1.0;  // forget gate bias
  };
  init_lstm(m.p.upd_clause_w, m.p.upd_clause_b, d);
  init_lstm(m.p.upd_lit_w, m.p.upd_lit_b, 2 * d);

  m.p.attn_q = xavier(d, d, rng);
  m.p.attn_k = xavier(d, d, rng);
  m.p.attn_v = xavier(d, d, rng);
  m.p.attn_out_w = xavier(d, d, rng);
  m.p.attn_out_b = zeros(1, d);

  init_mlp(m.p.pred, 2 * d, d, 1);
  return m;
}

size_t parameter_count(const ModelConfig& cfg) {
  const auto d = static_cast<size_t>(cfg.dim);
  return 52 * d * d + 33 * d + 1;
}

size_t ModelParams::parameter_count() const {
  size_t total = 0;
  for_each_param([&](const std::string&, const Mat& m) { total += m.size(); }, p);
  return total;
}

GraphTensors build_graph_tensors(const EdgeSplitGraph& split, const std::vector<Weight>& cw) {
  GraphTensors g;
  g.num_vars = split.num_vars;
  g.num_clauses = split.num_clauses;
  const int nl = 2 * g.num_vars;

  const std::vector<std::pair<int, int>>* lists[4] = {&split.parent, &split.child, &split.ntup,
                                                      &split.ntdown};
  for (int cls = 0; cls < 4; ++cls) {
    SparseMat& fwd = g.lit_to_clause[static_cast<size_t>(cls)];
    SparseMat& rev = g.clause_to_lit[static_cast<size_t>(cls)];
    fwd.rows = g.num_clauses;
    fwd.cols = nl;
    rev.rows = nl;
    rev.cols = g.num_clauses;
    std::vector<int> deg_clause(static_cast<size_t>(g.num_clauses), 0);
    std::vector<int> deg_lit(static_cast<size_t>(nl), 0);
    for (const auto& [j, l] : *lists[cls]) {
      ++deg_clause[static_cast<size_t>(j)];
      ++deg_lit[static_cast<size_t>(l)];
    }
    for (const auto& [j, l] : *lists[cls]) {
      fwd.add_entry(j, l, 1.0 / deg_clause[static_cast<size_t>(j)]);
      rev.add_entry(l, j, 1.0 / deg_lit[static_cast<size_t>(l)]);
    }
  }

  Weight max_w = 1;
  for (const Weight w : cw) max_w = std::max(max_w, w);
  g.cw_scale.reserve(cw.size());
  for (const Weight w : cw)
    g.cw_scale.push_back(static_cast<double>(w) / static_cast<double>(max_w));

  g.negation_perm.resize(static_cast<size_t>(nl));
  for (int v = 0; v < g.num_vars; ++v) {
    g.negation_perm[static_cast<size_t>(2 * v)] = 2 * v + 1;
    g.negation_perm[static_cast<size_t>(2 * v + 1)] = 2 * v;
    g.pos_rows.push_back(2 * v);
    g.neg_rows.push_back(2 * v + 1);
  }
  return g;
}

GraphTensors build_graph_tensors(const WcnfFormula& formula) {
  const FactorGraph fg = build_factor_graph(formula);
  const SpanningForest forest = build_spanning_forest(fg);
  const EdgeSplitGraph split = split_edges(fg, forest);
  std::vector<Weight> cw;
  cw.reserve(formula.clauses.size());
  for (const auto& c : formula.clauses) cw.push_back(c.weight);
  return build_graph_tensors(split, cw);
}

namespace {

using Id = Tape::Id;

Id apply_mlp(Tape& t, const ParamSet<Id>::Mlp& mlp, Id x, double dropout_rate, Rng* rng) {
  Id h = t.relu(t.linear(x, mlp.w1, mlp.b1));
  if (dropout_rate > 0.0 && rng) h = t.dropout(h, dropout_rate, *rng);
  return t.linear(h, mlp.w2, mlp.b2);
}

// Two-head attention where each literal attends over {itself, its negation}:
// queries from the literal, keys/values from the pair; the pairwise softmax
// is a sigmoid of the score difference.
Id pair_attention(Tape& t, const ParamSet<Id>& ids, Id lit, Id lit_swapped, int d) {
  const Id q = t.matmul(lit, ids.attn_q);
  const Id k_own = t.matmul(lit, ids.attn_k);
  const Id k_neg = t.matmul(lit_swapped, ids.attn_k);
  const Id v_own = t.matmul(lit, ids.attn_v);
  const Id v_neg = t.matmul(lit_swapped, ids.attn_v);

  const int dh = d / 2;
  std::vector<Id> heads;
  for (int h = 0; h < 2; ++h) {
    const int b = h * dh, e = (h + 1) * dh;
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dh));
    const Id s_own = t.scale(t.rowwise_dot(t.slice_cols(q, b, e), t.slice_cols(k_own, b, e)),
                             inv_sqrt);
    const Id s_neg = t.scale(t.rowwise_dot(t.slice_cols(q, b, e), t.slice_cols(k_neg, b, e)),
                             inv_sqrt);
    const Id a_own = t.sigmoid(t.sub(s_own, s_neg));
    const Id a_neg = t.sigmoid(t.sub(s_neg, s_own));
    heads.push_back(t.add(t.mul_colvec(t.slice_cols(v_own, b, e), a_own),
                          t.mul_colvec(t.slice_cols(v_neg, b, e), a_neg)));
  }
  const Id merged = t.matmul(t.concat_cols(heads), ids.attn_out_w);
  return t.add(merged, t.broadcast_row(ids.attn_out_b, t.val(merged).rows));
}

}  // namespace

ForwardPass::ForwardPass(const ModelParams& model, const GraphTensors& graph, double dropout_rate,
                         Rng* dropout_rng) {
  model.cfg.validate();
  const int d = model.cfg.dim;
  const int nl = 2 * graph.num_vars;
  const int nc = graph.num_clauses;

  for_each_param([&](const std::string&, const Mat& v, Id& id) { id = tape_.input(v); }, model.p,
                 ids_);

  Id lit = tape_.broadcast_row(ids_.lit_init, nl);
  Id clause = tape_.broadcast_row(ids_.clause_init, nc);
  Id lit_cell = tape_.input(Mat(nl, d));
  Id clause_cell = tape_.input(Mat(nc, d));

  // Slot layout for the transposed products: pairs of (aggregator class,
  // matrix class) in the order the four features are concatenated.
  const int agg_cls_swapped[4] = {0, 1, 3, 2};
  const int mat_cls_swapped[4] = {1, 0, 2, 3};
  const int identity[4] = {0, 1, 2, 3};
  const int* agg_cls = model.cfg.swapped_transpose_pairing ? agg_cls_swapped : identity;
  const int* mat_cls = model.cfg.swapped_transpose_pairing ? mat_cls_swapped : identity;

  for (int round = 0; round < model.cfg.rounds; ++round) {
    std::vector<Id> parts;
    for (int e = 0; e < 4; ++e)
      parts.push_back(tape_.spmm(
          &graph.lit_to_clause[static_cast<size_t>(e)],
          apply_mlp(tape_, ids_.agg_lit[static_cast<size_t>(e)], lit, dropout_rate, dropout_rng)));
    const Id l2c =
        apply_mlp(tape_, ids_.agg_lit_merge, tape_.concat_cols(parts), dropout_rate, dropout_rng);
    clause = lstm_cell(tape_, tape_.scale_rows(l2c, graph.cw_scale), clause, clause_cell,
                       ids_.upd_clause_w, ids_.upd_clause_b, &clause_cell);

    parts.clear();
    for (int slot = 0; slot < 4; ++slot)
      parts.push_back(
          tape_.spmm(&graph.clause_to_lit[static_cast<size_t>(mat_cls[slot])],
                     apply_mlp(tape_, ids_.agg_clause[static_cast<size_t>(agg_cls[slot])], clause,
                               dropout_rate, dropout_rng)));
    const Id c2l = apply_mlp(tape_, ids_.agg_clause_merge, tape_.concat_cols(parts), dropout_rate,
                             dropout_rng);

    const Id lit_swapped = tape_.gather_rows(lit, graph.negation_perm);
    const Id attn = pair_attention(tape_, ids_, lit, lit_swapped, d);
    lit = lstm_cell(tape_, tape_.concat_cols({attn, c2l}), lit, lit_cell, ids_.upd_lit_w,
                    ids_.upd_lit_b, &lit_cell);
  }

  const Id pos = tape_.gather_rows(lit, graph.pos_rows);
  const Id neg = tape_.gather_rows(lit, graph.neg_rows);
  const Id logits =
      apply_mlp(tape_, ids_.pred, tape_.concat_cols({pos, neg}), 0.0, nullptr);
  prob_ = tape_.sigmoid(logits);
}

std::vector<double> ForwardPass::probabilities() const {
  const Mat& p = tape_.val(prob_);
  return p.a;
}

double ForwardPass::loss_and_backward(std::vector<double> targets, double clamp) {
  const Id loss = tape_.bce_mean(prob_, std::move(targets), clamp);
  tape_.backward(loss);
  return tape_.val(loss).at(0, 0);
}

ParamSet<Mat> ForwardPass::gradients() const {
  ParamSet<Mat> g;
  for_each_param([&](const std::string&, const Id& id, Mat& out) { out = tape_.grad(id); }, ids_,
                 g);
  return g;
}

std::vector<double> model_forward(const ModelParams& model, const GraphTensors& graph) {
  return ForwardPass(model, graph).probabilities();
}

double bce_loss(std::span<const double> p, std::span<const double> targets, double clamp) {
  if (p.size() != targets.size()) throw std::invalid_argument("bce_loss: length mismatch");
  double loss = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], clamp, 1.0 - clamp);
    loss += -(targets[i] * std::log(q) + (1.0 - targets[i]) * std::log(1.0 - q));
  }
  return loss / static_cast<double>(p.size());
}

Assignment round_probabilities(std::span<const double> p) {
  Assignment a;
  a.values.resize(p.size());
  for (size_t i = 0; i < p.size(); ++i) a.values[i] = p[i] > 0.5 ? 1 : -1;
  return a;
}

}  // namespace splitsat
