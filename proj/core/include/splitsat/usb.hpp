#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "splitsat/matrices.hpp"
#include "splitsat/rng.hpp"
#include "splitsat/score.hpp"
#include "splitsat/wcnf.hpp"

namespace splitsat {

struct UsbParams {
  double time_limit_secs = 10.0;
  std::uint64_t max_steps = 0;  // 0 = no step budget, run until the time limit
  double learning_rate = 1.0;   // gamma
  int len = 100;                // budget extension after an improvement
  int k = 10;                   // greedy candidate sample size
  double tau = 0.5;
  double epsilon = 0.01;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Solver state over the real-valued relaxation x. The induced assignment is
/// sign(x) with x_i == 0 mapped to false.
struct RelaxedState {
  std::vector<double> x;
  Assignment alpha;
  std::optional<Assignment> best_assignment;
  Weight best_cost = 0;
  std::uint64_t step = 0;
  std::uint64_t budget = 0;
  std::optional<std::vector<double>> init_probs;  // kept for restarts
};

Assignment sign_assignment(std::span<const double> x);

/// Draws |x_i| ~ |Normal(0,1)|; signs come from probs (true iff p > 0.5)
/// when given, otherwise fair coin flips.
RelaxedState init_relaxed(int num_vars, const std::optional<std::vector<double>>& probs,
                          Rng& rng);

/// f_j = sum_i tau * tanh(x_i) / (score_i^2 + eps) * (W_unit)_ij.
std::vector<double> relaxation_forward(std::span<const double> x, const ScoreReport& report,
                                       const InstanceMatrices& mats, const UsbParams& params);

/// Mean over falsified clauses of (f_j * CW_j / S_j)^2. The report must have
/// at least one falsified clause.
double relaxation_loss(std::span<const double> f, const ScoreReport& report,
                       const InstanceMatrices& mats);

/// Analytic gradient of relaxation_loss w.r.t. x, with the scores treated as
/// constants of the current discrete assignment.
std::vector<double> relaxation_grad(std::span<const double> x, const ScoreReport& report,
                                    const InstanceMatrices& mats, const UsbParams& params);

struct UsbResult {
  bool found_feasible = false;
  Assignment best;
  Weight best_cost = 0;
  std::uint64_t steps = 0;
  double elapsed_secs = 0.0;
  std::uint64_t restarts = 0;
};

/// Called once per inner step with the assignment just evaluated.
using StepCallback =
    std::function<void(std::uint64_t step, const Assignment& alpha, Weight cost, bool improved)>;

/// Anytime loop: evaluate sign(x), record improvements, then either flip the
/// best-scoring candidate (when positive flip gains exist) or take one
/// gradient step on the relaxation loss. Restarts with fresh magnitudes when
/// the improvement budget runs out; returns the best feasible solution seen.
UsbResult usb_solve(const WcnfFormula& formula, const InstanceMatrices& mats, RelaxedState init,
                    const UsbParams& params, const StepCallback& callback = {});

}  // namespace splitsat
