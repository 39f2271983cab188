#include "splitsat/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace splitsat {

TrainInstance TrainInstance::make(WcnfFormula formula, Assignment label) {
  if (label.size() != formula.num_vars)
    throw std::invalid_argument("label length does not match formula");
  TrainInstance inst;
  inst.tensors = build_graph_tensors(formula);
  inst.formula = std::move(formula);
  inst.label = std::move(label);
  return inst;
}

void TrainConfig::validate() const {
  if (learning_rate <= 0) throw std::invalid_argument("learning rate must be positive");
  if (weight_decay < 0) throw std::invalid_argument("weight decay must be non-negative");
  if (batch_size <= 0) throw std::invalid_argument("batch size must be positive");
  if (epochs <= 0) throw std::invalid_argument("epochs must be positive");
  if (dropout_rate < 0 || dropout_rate >= 1)
    throw std::invalid_argument("dropout rate outside [0,1)");
}

AdamW AdamW::create(const ModelParams& shape, double lr, double weight_decay) {
  AdamW opt;
  opt.lr = lr;
  opt.weight_decay = weight_decay;
  for_each_param(
      [&](const std::string&, const Mat& m) {
        opt.m1.emplace_back(m.rows, m.cols);
        opt.m2.emplace_back(m.rows, m.cols);
      },
      shape.p);
  return opt;
}

void AdamW::step(ModelParams& model, const ParamSet<Mat>& grads) {
  ++t;
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  size_t idx = 0;
  for_each_param(
      [&](const std::string&, Mat& theta, const Mat& g) {
        Mat& m = m1[idx];
        Mat& v = m2[idx];
        ++idx;
        for (size_t i = 0; i < theta.size(); ++i) {
          m.a[i] = beta1 * m.a[i] + (1.0 - beta1) * g.a[i];
          v.a[i] = beta2 * v.a[i] + (1.0 - beta2) * g.a[i] * g.a[i];
          const double mhat = m.a[i] / c1;
          const double vhat = v.a[i] / c2;
          theta.a[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * theta.a[i]);
        }
      },
      model.p, grads);
}

namespace {

std::vector<double> targets01(const Assignment& label) {
  std::vector<double> y(label.values.size());
  for (size_t i = 0; i < y.size(); ++i) y[i] = label.values[i] > 0 ? 1.0 : 0.0;
  return y;
}

void accumulate(ParamSet<Mat>& acc, const ParamSet<Mat>& grads, bool first) {
  for_each_param(
      [&](const std::string&, Mat& a, const Mat& g) {
        if (first) {
          a = g;
        } else {
          for (size_t i = 0; i < a.size(); ++i) a.a[i] += g.a[i];
        }
      },
      acc, grads);
}

void scale_params(ParamSet<Mat>& acc, double s) {
  for_each_param(
      [&](const std::string&, Mat& a) {
        for (auto& v : a.a) v *= s;
      },
      acc);
}

}  // namespace

TrainResult train(ModelParams model, const std::vector<TrainInstance>& data,
                  const TrainConfig& cfg, std::optional<AdamW> resume_optimizer, int start_epoch,
                  const std::function<void(const EpochStats&)>& on_epoch) {
  cfg.validate();
  if (data.empty()) throw std::invalid_argument("train: empty dataset");

  TrainResult result{std::move(model), resume_optimizer
                                           ? std::move(*resume_optimizer)
                                           : AdamW{},
                     {}};
  if (!resume_optimizer)
    result.optimizer = AdamW::create(result.model, cfg.learning_rate, cfg.weight_decay);

  const size_t n_inst = data.size();
  for (int epoch = start_epoch; epoch < start_epoch + cfg.epochs; ++epoch) {
    // Stateless per-epoch streams keep resumed runs on the exact trajectory.
    Rng shuffle_rng(mix_seed(cfg.seed, 0x51afull + static_cast<std::uint64_t>(epoch)));
    std::vector<size_t> order(n_inst);
    for (size_t i = 0; i < n_inst; ++i) order[i] = i;
    for (size_t i = n_inst; i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.uniform_u64(i)]);

    double loss_sum = 0.0;
    size_t correct = 0, total_vars = 0;

    for (size_t begin = 0; begin < n_inst; begin += static_cast<size_t>(cfg.batch_size)) {
      const size_t end = std::min(n_inst, begin + static_cast<size_t>(cfg.batch_size));
      std::vector<size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(begin),
                                order.begin() + static_cast<std::ptrdiff_t>(end));
      std::sort(batch.begin(), batch.end());  // deterministic reduction order

      ParamSet<Mat> acc;
      bool first = true;
      for (const size_t idx : batch) {
        Rng drop_rng(mix_seed(cfg.seed ^ 0xd20900full,
                              static_cast<std::uint64_t>(epoch) * 1000003ull + idx));
        ForwardPass fp(result.model, data[idx].tensors, cfg.dropout_rate,
                       cfg.dropout_rate > 0 ? &drop_rng : nullptr);
        const std::vector<double> p = fp.probabilities();
        loss_sum += fp.loss_and_backward(targets01(data[idx].label));
        accumulate(acc, fp.gradients(), first);
        first = false;

        const Assignment rounded = round_probabilities(p);
        for (size_t i = 0; i < p.size(); ++i)
          correct += rounded.values[i] == data[idx].label.values[i];
        total_vars += p.size();
      }
      scale_params(acc, 1.0 / static_cast<double>(batch.size()));
      result.optimizer.step(result.model, acc);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.loss = loss_sum / static_cast<double>(n_inst);
    stats.var_acc = 100.0 * static_cast<double>(correct) / static_cast<double>(total_vars);
    result.curve.push_back(stats);
    if (on_epoch) on_epoch(stats);
    if (cfg.stop_at_var_acc >= 0 && stats.var_acc >= cfg.stop_at_var_acc) break;
  }
  return result;
}

double grad_check(const ModelParams& model, const GraphTensors& graph,
                  const std::vector<double>& targets, double h) {
  ForwardPass fp(model, graph);
  fp.loss_and_backward(targets);
  const ParamSet<Mat> analytic = fp.gradients();

  ModelParams probe = model;
  double max_rel = 0.0;
  // Walk matrices in lockstep; one central difference per entry.
  std::vector<Mat*> probe_mats;
  std::vector<const Mat*> grad_mats;
  for_each_param([&](const std::string&, Mat& m) { probe_mats.push_back(&m); }, probe.p);
  for_each_param([&](const std::string&, const Mat& m) { grad_mats.push_back(&m); }, analytic);

  for (size_t mi = 0; mi < probe_mats.size(); ++mi) {
    Mat& m = *probe_mats[mi];
    for (size_t i = 0; i < m.size(); ++i) {
      const double saved = m.a[i];
      m.a[i] = saved + h;
      const double up = bce_loss(ForwardPass(probe, graph).probabilities(), targets);
      m.a[i] = saved - h;
      const double down = bce_loss(ForwardPass(probe, graph).probabilities(), targets);
      m.a[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double a = grad_mats[mi]->a[i];
      const double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1.0});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

ModelParams pseudo_label_update(ModelParams model, const WcnfFormula& formula,
                                const Assignment& best_assignment, double lr) {
  const GraphTensors tensors = build_graph_tensors(formula);
  ForwardPass fp(model, tensors);
  fp.loss_and_backward(targets01(best_assignment));
  AdamW opt = AdamW::create(model, lr, 0.0);
  opt.step(model, fp.gradients());
  return model;
}

namespace {

void write_mat(std::FILE* f, const std::string& name, const Mat& m) {
  std::fprintf(f, "%s %d %d\n", name.c_str(), m.rows, m.cols);
  for (size_t i = 0; i < m.size(); ++i)
    std::fprintf(f, "%a%c", m.a[i], i + 1 == m.size() ? '\n' : ' ');
  if (m.size() == 0) std::fprintf(f, "\n");
}

class CkptReader {
 public:
  explicit CkptReader(const std::filesystem::path& path) : in_(path) {
    if (!in_) throw std::runtime_error("cannot open checkpoint " + path.string());
  }
  std::string token() {
    std::string t;
    if (!(in_ >> t)) throw std::runtime_error("truncated checkpoint");
    return t;
  }
  long integer() { return std::stol(token()); }
  double number() {
    const std::string t = token();
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str()) throw std::runtime_error("bad number in checkpoint: " + t);
    return v;
  }
  Mat mat(const std::string& expected_name) {
    const std::string name = token();
    if (name != expected_name)
      throw std::runtime_error("checkpoint parameter order mismatch: expected " + expected_name +
                               ", found " + name);
    const int rows = static_cast<int>(integer());
    const int cols = static_cast<int>(integer());
    Mat m(rows, cols);
    for (auto& v : m.a) v = number();
    return m;
  }

 private:
  std::ifstream in_;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw std::runtime_error("cannot write checkpoint " + path.string());
  std::fprintf(f, "splitsat-checkpoint 1\n");
  std::fprintf(f, "dim %d\nrounds %d\nswapped %d\nepoch %d\n", ckpt.model.cfg.dim,
               ckpt.model.cfg.rounds, ckpt.model.cfg.swapped_transpose_pairing ? 1 : 0,
               ckpt.epoch);
  for_each_param([&](const std::string& name, const Mat& m) { write_mat(f, name, m); },
                 ckpt.model.p);
  if (ckpt.optimizer) {
    const AdamW& o = *ckpt.optimizer;
    std::fprintf(f, "optimizer adamw %lld %a %a %a %a %a\n", static_cast<long long>(o.t), o.lr,
                 o.beta1, o.beta2, o.eps, o.weight_decay);
    for (const auto& m : o.m1) write_mat(f, "m1", m);
    for (const auto& m : o.m2) write_mat(f, "m2", m);
  }
  std::fprintf(f, "end\n");
  std::fclose(f);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  CkptReader r(path);
  if (r.token() != "splitsat-checkpoint") throw std::runtime_error("not a splitsat checkpoint");
  if (r.integer() != 1) throw std::runtime_error("unsupported checkpoint version");

  Checkpoint ckpt;
  ModelConfig cfg;
  if (r.token() != "dim") throw std::runtime_error("malformed checkpoint header");
  cfg.dim = static_cast<int>(r.integer());
  if (r.token() != "rounds") throw std::runtime_error("malformed checkpoint header");
  cfg.rounds = static_cast<int>(r.integer());
  if (r.token() != "swapped") throw std::runtime_error("malformed checkpoint header");
  cfg.swapped_transpose_pairing = r.integer() != 0;
  if (r.token() != "epoch") throw std::runtime_error("malformed checkpoint header");
  ckpt.epoch = static_cast<int>(r.integer());

  ckpt.model = ModelParams::init(cfg, 0);
  for_each_param([&](const std::string& name, Mat& m) {
    Mat loaded = r.mat(name);
    if (loaded.rows != m.rows || loaded.cols != m.cols)
      throw std::runtime_error("checkpoint shape mismatch for " + name);
    m = std::move(loaded);
  }, ckpt.model.p);

  std::string tok = r.token();
  if (tok == "optimizer") {
    if (r.token() != "adamw") throw std::runtime_error("unknown optimizer in checkpoint");
    AdamW opt;
    opt.t = r.integer();
    opt.lr = r.number();
    opt.beta1 = r.number();
    opt.beta2 = r.number();
    opt.eps = r.number();
    opt.weight_decay = r.number();
    size_t count = 0;
    for_each_param([&](const std::string&, const Mat&) { ++count; }, ckpt.model.p);
    for (size_t i = 0; i < count; ++i) opt.m1.push_back(r.mat("m1"));
    for (size_t i = 0; i < count; ++i) opt.m2.push_back(r.mat("m2"));
    ckpt.optimizer = std::move(opt);
    tok = r.token();
  }
  if (tok != "end") throw std::runtime_error("malformed checkpoint trailer");
  return ckpt;
}

}  // namespace splitsat
