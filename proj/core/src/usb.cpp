#include "splitsat/usb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace splitsat {

void UsbParams::validate() const {
  if (time_limit_secs <= 0) throw std::invalid_argument("time limit must be positive");
  if (learning_rate <= 0) throw std::invalid_argument("learning rate must be positive");
  if (len <= 0) throw std::invalid_argument("len must be positive");
  if (k <= 0) throw std::invalid_argument("k must be positive");
  if (tau <= 0) throw std::invalid_argument("tau must be positive");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
}

Assignment sign_assignment(std::span<const double> x) {
  Assignment a;
  a.values.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) a.values[i] = x[i] > 0 ? 1 : -1;
  return a;
}

RelaxedState init_relaxed(int num_vars, const std::optional<std::vector<double>>& probs,
                          Rng& rng) {
  if (probs && static_cast<int>(probs->size()) != num_vars)
    throw std::invalid_argument("init_relaxed: probability vector length mismatch");
  RelaxedState st;
  st.x.resize(static_cast<size_t>(num_vars));
  for (size_t i = 0; i < st.x.size(); ++i) {
    const double mag = std::abs(rng.normal());
    const bool pos = probs ? (*probs)[i] > 0.5 : rng.coin();
    st.x[i] = pos ? mag : -mag;
  }
  st.alpha = sign_assignment(st.x);
  st.init_probs = probs;
  return st;
}

std::vector<double> relaxation_forward(std::span<const double> x, const ScoreReport& report,
                                       const InstanceMatrices& mats, const UsbParams& params) {
  std::vector<double> f(static_cast<size_t>(mats.num_clauses), 0.0);
  std::vector<double> g(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double s = static_cast<double>(report.score[i]);
    g[i] = params.tau * std::tanh(x[i]) / (s * s + params.epsilon);
  }
  for (int j = 0; j < mats.num_clauses; ++j) {
    double acc = 0.0;
    for (int e = mats.col_ptr[static_cast<size_t>(j)]; e < mats.col_ptr[static_cast<size_t>(j) + 1]; ++e)
      acc += g[static_cast<size_t>(mats.col_var[static_cast<size_t>(e)])] *
             mats.col_sign[static_cast<size_t>(e)];
    f[static_cast<size_t>(j)] = acc;
  }
  return f;
}

double relaxation_loss(std::span<const double> f, const ScoreReport& report,
                       const InstanceMatrices& mats) {
  double sum = 0.0;
  size_t count = 0;
  for (size_t j = 0; j < report.unsat.size(); ++j) {
    if (!report.unsat[j]) continue;
    const double term = f[j] * static_cast<double>(mats.cw[j]) / static_cast<double>(mats.s[j]);
    sum += term * term;
    ++count;
  }
  if (count == 0) throw std::logic_error("relaxation_loss: no falsified clause");
  return sum / static_cast<double>(count);
}

std::vector<double> relaxation_grad(std::span<const double> x, const ScoreReport& report,
                                    const InstanceMatrices& mats, const UsbParams& params) {
  const std::vector<double> f = relaxation_forward(x, report, mats, params);
  size_t count = 0;
  for (size_t j = 0; j < report.unsat.size(); ++j) count += report.unsat[j];

  // dloss/df_j for falsified clauses; zero elsewhere.
  std::vector<double> df(f.size(), 0.0);
  for (size_t j = 0; j < report.unsat.size(); ++j) {
    if (!report.unsat[j]) continue;
    const double ratio = static_cast<double>(mats.cw[j]) / static_cast<double>(mats.s[j]);
    df[j] = 2.0 / static_cast<double>(count) * (f[j] * ratio) * ratio;
  }

  std::vector<double> grad(x.size(), 0.0);
  for (size_t i = 0; i < x.size(); ++i) {
    const double s = static_cast<double>(report.score[i]);
    const double th = std::tanh(x[i]);
    const double dgi = params.tau * (1.0 - th * th) / (s * s + params.epsilon);
    double acc = 0.0;
    for (int e = mats.row_ptr[i]; e < mats.row_ptr[i + 1]; ++e)
      acc += df[static_cast<size_t>(mats.row_clause[static_cast<size_t>(e)])] *
             mats.row_sign[static_cast<size_t>(e)];
    grad[i] = acc * dgi;
  }
  return grad;
}

namespace {

// BMS-style greedy move: sample at most k candidates from the positive-score
// set and flip the single best of them (ties to the lowest index).
int pick_flip(const std::vector<int>& positive, int k, const ScoreReport& report, Rng& rng) {
  if (static_cast<int>(positive.size()) <= k) {
    int best = positive[0];
    for (const int v : positive)
      if (report.score[static_cast<size_t>(v)] > report.score[static_cast<size_t>(best)]) best = v;
    return best;
  }
  int best = -1;
  for (int t = 0; t < k; ++t) {
    const int v = positive[rng.uniform_u64(positive.size())];
    if (best < 0 || report.score[static_cast<size_t>(v)] > report.score[static_cast<size_t>(best)] ||
        (report.score[static_cast<size_t>(v)] == report.score[static_cast<size_t>(best)] && v < best))
      best = v;
  }
  return best;
}

}  // namespace

UsbResult usb_solve(const WcnfFormula& formula, const InstanceMatrices& mats, RelaxedState state,
                    const UsbParams& params, const StepCallback& callback) {
  params.validate();
  if (formula.num_vars == 0) throw std::invalid_argument("usb_solve: empty formula");
  if (static_cast<int>(state.x.size()) != formula.num_vars)
    throw std::invalid_argument("usb_solve: state dimension mismatch");

  Rng rng(params.seed);
  UsbResult result;
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  auto out_of_budget = [&] {
    if (params.max_steps && state.step >= params.max_steps) return true;
    return elapsed() >= params.time_limit_secs;
  };

  std::vector<int> positive;
  for (;;) {
    state.budget = static_cast<std::uint64_t>(params.len);
    for (std::uint64_t inner = 0; inner <= state.budget; ++inner) {
      if (out_of_budget()) goto done;
      state.alpha = sign_assignment(state.x);
      const ScoreReport report = compute_scores(state.alpha, mats);
      const Weight c = cost_from_report(report, mats);

      bool improved = false;
      if (is_feasible(formula, state.alpha) &&
          (!state.best_assignment || c < state.best_cost)) {
        state.best_assignment = state.alpha;
        state.best_cost = c;
        state.budget = inner + static_cast<std::uint64_t>(params.len);
        improved = true;
      }
      if (callback) callback(state.step, state.alpha, c, improved);
      ++state.step;
      if (improved && state.best_cost == 0) goto done;

      positive.clear();
      for (int v = 0; v < formula.num_vars; ++v)
        if (report.score[static_cast<size_t>(v)] > 0) positive.push_back(v);

      if (!positive.empty()) {
        const int v = pick_flip(positive, params.k, report, rng);
        state.x[static_cast<size_t>(v)] = -state.x[static_cast<size_t>(v)];
      } else {
        const std::vector<double> grad = relaxation_grad(state.x, report, mats, params);
        for (size_t i = 0; i < state.x.size(); ++i)
          state.x[i] -= params.learning_rate * grad[i];
      }
    }

    // Budget exhausted: fresh magnitudes; each sign is kept from the best
    // known assignment with probability 1/2, otherwise redrawn from the
    // initial policy.
    ++result.restarts;
    for (size_t i = 0; i < state.x.size(); ++i) {
      const double mag = std::abs(rng.normal());
      bool pos;
      if (state.best_assignment && rng.coin()) {
        pos = state.best_assignment->values[i] > 0;
      } else if (state.init_probs) {
        pos = (*state.init_probs)[i] > 0.5;
      } else {
        pos = rng.coin();
      }
      state.x[i] = pos ? mag : -mag;
    }
  }

done:
  result.steps = state.step;
  result.elapsed_secs = elapsed();
  if (state.best_assignment) {
    result.found_feasible = true;
    result.best = *state.best_assignment;
    result.best_cost = state.best_cost;
  }
  return result;
}

}  // namespace splitsat
