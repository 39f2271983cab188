#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "splitsat/autodiff.hpp"
#include "splitsat/graph.hpp"
#include "splitsat/rng.hpp"
#include "splitsat/wcnf.hpp"

namespace splitsat {

struct ModelConfig {
  int dim = 16;     // embedding width (even, for the two attention heads)
  int rounds = 8;   // message passing rounds
  /// Class pairing for the transposed clause->literal products. The default
  /// pairs the transpose of each matrix with the aggregator of the reversed
  /// class (the transpose of a child matrix carries parent edges); disabling
  /// it pairs same-named matrices and aggregators instead.
  bool swapped_transpose_pairing = true;

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

inline constexpr std::array<const char*, 4> kEdgeClassNames = {"parent", "child", "ntup",
                                                               "ntdown"};

/// All learnable tensors, templated over the storage (Mat for values,
/// Tape::Id once registered on a tape).
template <class T>
struct ParamSet {
  struct Mlp {
    T w1, b1, w2, b2;
  };
  T lit_init, clause_init;
  std::array<Mlp, 4> agg_lit;     // literal->clause, one per edge class
  Mlp agg_lit_merge;              // 4d -> d
  std::array<Mlp, 4> agg_clause;  // clause->literal, one per edge class
  Mlp agg_clause_merge;           // 4d -> d
  T upd_clause_w, upd_clause_b;   // LSTM over clause embeddings, input d
  T upd_lit_w, upd_lit_b;         // LSTM over literal embeddings, input 2d
  T attn_q, attn_k, attn_v;       // d x d projections, two heads by column split
  T attn_out_w, attn_out_b;
  Mlp pred;                       // 2d -> 1 decoder over (positive, negative) pairs
};

/// Visits every parameter in canonical serialization order; with several
/// sets the members are visited in lockstep, e.g.
/// for_each_param(f, values, ids) calls f(name, mat, id).
template <class F, class... S>
void for_each_param(F&& f, S&&... sets) {
  f("lit_init", sets.lit_init...);
  f("clause_init", sets.clause_init...);
  auto visit_mlp = [&](const std::string& base, auto&... mlps) {
    f(base + ".w1", mlps.w1...);
    f(base + ".b1", mlps.b1...);
    f(base + ".w2", mlps.w2...);
    f(base + ".b2", mlps.b2...);
  };
  for (size_t e = 0; e < 4; ++e)
    visit_mlp(std::string("agg_lit.") + kEdgeClassNames[e], sets.agg_lit[e]...);
  visit_mlp("agg_lit_merge", sets.agg_lit_merge...);
  for (size_t e = 0; e < 4; ++e)
    visit_mlp(std::string("agg_clause.") + kEdgeClassNames[e], sets.agg_clause[e]...);
  visit_mlp("agg_clause_merge", sets.agg_clause_merge...);
  f("upd_clause.w", sets.upd_clause_w...);
  f("upd_clause.b", sets.upd_clause_b...);
  f("upd_lit.w", sets.upd_lit_w...);
  f("upd_lit.b", sets.upd_lit_b...);
  f("attn.q", sets.attn_q...);
  f("attn.k", sets.attn_k...);
  f("attn.v", sets.attn_v...);
  f("attn.out_w", sets.attn_out_w...);
  f("attn.out_b", sets.attn_out_b...);
  visit_mlp("pred", sets.pred...);
}

struct ModelParams {
  ModelConfig cfg;
  ParamSet<Mat> p;

  static ModelParams init(const ModelConfig& cfg, std::uint64_t seed);
  size_t parameter_count() const;
};

/// Scalar parameter count as a pure function of the embedding width.
size_t parameter_count(const ModelConfig& cfg);

/// Per-instance constants consumed by the forward pass: mean-normalized
/// adjacency products for both directions of each edge class, the clause
/// weight scaling, and the literal/negation row maps.
struct GraphTensors {
  int num_vars = 0;
  int num_clauses = 0;
  std::array<SparseMat, 4> lit_to_clause;  // rows = clauses
  std::array<SparseMat, 4> clause_to_lit;  // rows = literals (transposes)
  std::vector<double> cw_scale;            // w_j / max_j w_j
  std::vector<int> negation_perm;          // swaps each literal with its negation
  std::vector<int> pos_rows, neg_rows;     // literal rows per variable
};

GraphTensors build_graph_tensors(const EdgeSplitGraph& split, const std::vector<Weight>& cw);

/// Convenience: factor graph -> forest -> split -> tensors.
GraphTensors build_graph_tensors(const WcnfFormula& formula);

/// One differentiable forward pass. Parameters are registered on an internal
/// tape; after loss_and_backward the per-parameter gradients can be read out.
class ForwardPass {
 public:
  ForwardPass(const ModelParams& model, const GraphTensors& graph, double dropout_rate = 0.0,
              Rng* dropout_rng = nullptr);

  /// Per-variable probability of being true, length n.
  std::vector<double> probabilities() const;

  /// Mean BCE against 0/1 targets; runs backward and returns the loss.
  double loss_and_backward(std::vector<double> targets, double clamp = 1e-7);

  /// Gradients in canonical order; valid after loss_and_backward.
  ParamSet<Mat> gradients() const;

 private:
  Tape tape_;
  ParamSet<Tape::Id> ids_;
  Tape::Id prob_ = -1;
};

/// Inference-only forward pass.
std::vector<double> model_forward(const ModelParams& model, const GraphTensors& graph);

/// Scalar reference BCE used for reporting (same clamping as the tape op).
double bce_loss(std::span<const double> p, std::span<const double> targets, double clamp = 1e-7);

/// Rounds probabilities at 1/2 into a +-1 assignment.
Assignment round_probabilities(std::span<const double> p);

}  // namespace splitsat
