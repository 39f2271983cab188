#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "splitsat/model.hpp"

namespace splitsat {

struct TrainInstance {
  WcnfFormula formula;
  Assignment label;  // optimal assignment, +-1 encoding
  GraphTensors tensors;

  static TrainInstance make(WcnfFormula formula, Assignment label);
};

struct TrainConfig {
  double learning_rate = 1e-3;
  double weight_decay = 1e-10;
  int batch_size = 8;
  int epochs = 200;
  double dropout_rate = 0.0;
  std::uint64_t seed = 1;
  /// Stop once training VarAcc (percent) reaches this; negative disables.
  double stop_at_var_acc = -1.0;

  void validate() const;
};

/// AdamW with decoupled weight decay. Moment matrices follow the canonical
/// parameter order.
struct AdamW {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  std::int64_t t = 0;
  std::vector<Mat> m1, m2;

  static AdamW create(const ModelParams& shape, double lr, double weight_decay);
  void step(ModelParams& model, const ParamSet<Mat>& grads);
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double var_acc = 0.0;  // percent
};

struct TrainResult {
  ModelParams model;
  AdamW optimizer;
  std::vector<EpochStats> curve;
};

/// Mini-batch BCE training against the oracle labels. Deterministic for a
/// fixed seed: the per-epoch shuffle and dropout streams are derived
/// statelessly from (seed, epoch, instance), and batch gradients are reduced
/// in ascending instance order, so resuming from a checkpoint continues the
/// exact trajectory of an uninterrupted run.
TrainResult train(ModelParams model, const std::vector<TrainInstance>& data,
                  const TrainConfig& cfg, std::optional<AdamW> resume_optimizer = {},
                  int start_epoch = 0,
                  const std::function<void(const EpochStats&)>& on_epoch = {});

/// Max relative error between tape gradients of the BCE loss and central
/// finite differences over every parameter entry. The denominator is
/// max(|analytic|, |numeric|, 1).
double grad_check(const ModelParams& model, const GraphTensors& graph,
                  const std::vector<double>& targets, double h = 1e-4);

/// One optimizer step on BCE(P, best_assignment): the solution-boosting
/// write-back that fine-tunes the predictor toward its own best solution.
ModelParams pseudo_label_update(ModelParams model, const WcnfFormula& formula,
                                const Assignment& best_assignment, double lr);

struct Checkpoint {
  ModelParams model;
  std::optional<AdamW> optimizer;
  int epoch = 0;
};

/// Versioned text container; values are hex floats, so round-trips are
/// bit-exact. Shape or version mismatches throw.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace splitsat
