#include "splitsat/autodiff.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace splitsat {

namespace {

// c += a * b
void gemm_acc(const Mat& a, const Mat& b, Mat& c) {
  assert(a.cols == b.rows && c.rows == a.rows && c.cols == b.cols);
  for (int i = 0; i < a.rows; ++i) {
    double* crow = &c.a[static_cast<size_t>(i) * c.cols];
    const double* arow = &a.a[static_cast<size_t>(i) * a.cols];
    for (int k = 0; k < a.cols; ++k) {
      const double aik = arow[k];
      if (aik == 0.0) continue;
      const double* brow = &b.a[static_cast<size_t>(k) * b.cols];
      for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
    }
  }
}

// c += a * b^T
void gemm_bt_acc(const Mat& a, const Mat& b, Mat& c) {
  assert(a.cols == b.cols && c.rows == a.rows && c.cols == b.rows);
  for (int i = 0; i < a.rows; ++i) {
    const double* arow = &a.a[static_cast<size_t>(i) * a.cols];
    double* crow = &c.a[static_cast<size_t>(i) * c.cols];
    for (int j = 0; j < b.rows; ++j) {
      const double* brow = &b.a[static_cast<size_t>(j) * b.cols];
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
      crow[j] += acc;
    }
  }
}

// c += a^T * b
void gemm_at_acc(const Mat& a, const Mat& b, Mat& c) {
  assert(a.rows == b.rows && c.rows == a.cols && c.cols == b.cols);
  for (int k = 0; k < a.rows; ++k) {
    const double* arow = &a.a[static_cast<size_t>(k) * a.cols];
    const double* brow = &b.a[static_cast<size_t>(k) * b.cols];
    for (int i = 0; i < a.cols; ++i) {
      const double aki = arow[i];
      if (aki == 0.0) continue;
      double* crow = &c.a[static_cast<size_t>(i) * c.cols];
      for (int j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
    }
  }
}

}  // namespace

Tape::Id Tape::push(Mat val, std::function<void()> back) {
  nodes_.push_back(Node{std::move(val), Mat{}, std::move(back)});
  return static_cast<Id>(nodes_.size()) - 1;
}

Tape::Id Tape::input(Mat v) { return push(std::move(v)); }

Tape::Id Tape::matmul(Id a, Id b) {
  const Mat& av = val(a);
  const Mat& bv = val(b);
  if (av.cols != bv.rows) throw std::invalid_argument("matmul: shape mismatch");
  Mat out(av.rows, bv.cols);
  gemm_acc(av, bv, out);
  Id id = push(std::move(out));
  nodes_.back().back = [this, a, b, id] {
    gemm_bt_acc(grad(id), val(b), grad_mut(a));
    gemm_at_acc(val(a), grad(id), grad_mut(b));
  };
  return id;
}

Tape::Id Tape::linear(Id x, Id w, Id b) {
  const Mat& xv = val(x);
  const Mat& wv = val(w);
  const Mat& bv = val(b);
  if (xv.cols != wv.cols || bv.cols != wv.rows || bv.rows != 1)
    throw std::invalid_argument("linear: shape mismatch");
  Mat out(xv.rows, wv.rows);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) = bv.at(0, j);
  gemm_bt_acc(xv, wv, out);
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, w, b, id] {
    gemm_acc(grad(id), val(w), grad_mut(x));
    gemm_at_acc(grad(id), val(x), grad_mut(w));
    Mat& db = grad_mut(b);
    const Mat& dy = grad(id);
    for (int i = 0; i < dy.rows; ++i)
      for (int j = 0; j < dy.cols; ++j) db.at(0, j) += dy.at(i, j);
  };
  return id;
}

Tape::Id Tape::spmm(const SparseMat* s, Id x) {
  const Mat& xv = val(x);
  if (s->cols != xv.rows) throw std::invalid_argument("spmm: shape mismatch");
  Mat out(s->rows, xv.cols);
  const int d = xv.cols;
  for (size_t e = 0; e < s->coef.size(); ++e) {
    const double w = s->coef[e];
    const double* src = &xv.a[static_cast<size_t>(s->c[e]) * d];
    double* dst = &out.a[static_cast<size_t>(s->r[e]) * d];
    for (int j = 0; j < d; ++j) dst[j] += w * src[j];
  }
  Id id = push(std::move(out));
  nodes_.back().back = [this, s, x, id, d] {
    const Mat& dy = grad(id);
    Mat& dx = grad_mut(x);
    for (size_t e = 0; e < s->coef.size(); ++e) {
      const double w = s->coef[e];
      const double* src = &dy.a[static_cast<size_t>(s->r[e]) * d];
      double* dst = &dx.a[static_cast<size_t>(s->c[e]) * d];
      for (int j = 0; j < d; ++j) dst[j] += w * src[j];
    }
  };
  return id;
}

Tape::Id Tape::add(Id a, Id b) {
  const Mat& av = val(a);
  const Mat& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("add: shape mismatch");
  Mat out = av;
  for (size_t i = 0; i < out.size(); ++i) out.a[i] += bv.a[i];
  Id id = push(std::move(out));
  nodes_.back().back = [this, a, b, id] {
    const Mat& dy = grad(id);
    Mat& da = grad_mut(a);
    Mat& db = grad_mut(b);
    for (size_t i = 0; i < dy.size(); ++i) {
      da.a[i] += dy.a[i];
      db.a[i] += dy.a[i];
    }
  };
  return id;
}

Tape::Id Tape::sub(Id a, Id b) {
  const Mat& av = val(a);
  const Mat& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("sub: shape mismatch");
  Mat out = av;
  for (size_t i = 0; i < out.size(); ++i) out.a[i] -= bv.a[i];
  Id id = push(std::move(out));
  nodes_.back().back = [this, a, b, id] {
    const Mat& dy = grad(id);
    Mat& da = grad_mut(a);
    Mat& db = grad_mut(b);
    for (size_t i = 0; i < dy.size(); ++i) {
      da.a[i] += dy.a[i];
      db.a[i] -= dy.a[i];
    }
  };
  return id;
}

Tape::Id Tape::hadamard(Id a, Id b) {
  const Mat& av = val(a);
  const Mat& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("hadamard: shape mismatch");
  Mat out = av;
  for (size_t i = 0; i < out.size(); ++i) out.a[i] *= bv.a[i];
  Id id = push(std::move(out));
  nodes_.back().back = [this, a, b, id] {
    const Mat& dy = grad(id);
    Mat& da = grad_mut(a);
    Mat& db = grad_mut(b);
    const Mat& av2 = val(a);
    const Mat& bv2 = val(b);
    for (size_t i = 0; i < dy.size(); ++i) {
      da.a[i] += dy.a[i] * bv2.a[i];
      db.a[i] += dy.a[i] * av2.a[i];
    }
  };
  return id;
}

Tape::Id Tape::mul_colvec(Id x, Id v) {
  const Mat& xv = val(x);
  const Mat& vv = val(v);
  if (vv.cols != 1 || vv.rows != xv.rows) throw std::invalid_argument("mul_colvec: shape mismatch");
  Mat out = xv;
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) *= vv.at(i, 0);
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, v, id] {
    const Mat& dy = grad(id);
    const Mat& xv2 = val(x);
    const Mat& vv2 = val(v);
    Mat& dx = grad_mut(x);
    Mat& dv = grad_mut(v);
    for (int i = 0; i < dy.rows; ++i) {
      double acc = 0.0;
      for (int j = 0; j < dy.cols; ++j) {
        dx.at(i, j) += dy.at(i, j) * vv2.at(i, 0);
        acc += dy.at(i, j) * xv2.at(i, j);
      }
      dv.at(i, 0) += acc;
    }
  };
  return id;
}

Tape::Id Tape::relu(Id x) {
  Mat out = val(x);
  for (auto& v : out.a) v = v > 0 ? v : 0.0;
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id] {
    const Mat& dy = grad(id);
    const Mat& xv = val(x);
    Mat& dx = grad_mut(x);
    for (size_t i = 0; i < dy.size(); ++i)
      if (xv.a[i] > 0) dx.a[i] += dy.a[i];
  };
  return id;
}

Tape::Id Tape::tanh_op(Id x) {
  Mat out = val(x);
  for (auto& v : out.a) v = std::tanh(v);
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id] {
    const Mat& dy = grad(id);
    const Mat& yv = val(id);
    Mat& dx = grad_mut(x);
    for (size_t i = 0; i < dy.size(); ++i) dx.a[i] += dy.a[i] * (1.0 - yv.a[i] * yv.a[i]);
  };
  return id;
}

Tape::Id Tape::sigmoid(Id x) {
  Mat out = val(x);
  for (auto& v : out.a) v = 1.0 / (1.0 + std::exp(-v));
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id] {
    const Mat& dy = grad(id);
    const Mat& yv = val(id);
    Mat& dx = grad_mut(x);
    for (size_t i = 0; i < dy.size(); ++i) dx.a[i] += dy.a[i] * yv.a[i] * (1.0 - yv.a[i]);
  };
  return id;
}

Tape::Id Tape::concat_cols(const std::vector<Id>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: empty");
  int total = 0;
  const int rows = val(parts[0]).rows;
  for (const Id p : parts) {
    if (val(p).rows != rows) throw std::invalid_argument("concat_cols: row mismatch");
    total += val(p).cols;
  }
  Mat out(rows, total);
  int off = 0;
  for (const Id p : parts) {
    const Mat& pv = val(p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < pv.cols; ++j) out.at(i, off + j) = pv.at(i, j);
    off += pv.cols;
  }
  Id id = push(std::move(out));
  std::vector<Id> captured = parts;
  nodes_.back().back = [this, captured, id] {
    const Mat& dy = grad(id);
    int off2 = 0;
    for (const Id p : captured) {
      Mat& dp = grad_mut(p);
      for (int i = 0; i < dp.rows; ++i)
        for (int j = 0; j < dp.cols; ++j) dp.at(i, j) += dy.at(i, off2 + j);
      off2 += dp.cols;
    }
  };
  return id;
}

Tape::Id Tape::slice_cols(Id x, int begin, int end) {
  const Mat& xv = val(x);
  if (begin < 0 || end > xv.cols || begin >= end)
    throw std::invalid_argument("slice_cols: bad range");
  Mat out(xv.rows, end - begin);
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) = xv.at(i, begin + j);
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id, begin] {
    const Mat& dy = grad(id);
    Mat& dx = grad_mut(x);
    for (int i = 0; i < dy.rows; ++i)
      for (int j = 0; j < dy.cols; ++j) dx.at(i, begin + j) += dy.at(i, j);
  };
  return id;
}

Tape::Id Tape::gather_rows(Id x, std::vector<int> index) {
  const Mat& xv = val(x);
  Mat out(static_cast<int>(index.size()), xv.cols);
  for (size_t i = 0; i < index.size(); ++i)
    for (int j = 0; j < xv.cols; ++j) out.at(static_cast<int>(i), j) = xv.at(index[i], j);
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id, index = std::move(index)] {
    const Mat& dy = grad(id);
    Mat& dx = grad_mut(x);
    for (size_t i = 0; i < index.size(); ++i)
      for (int j = 0; j < dy.cols; ++j) dx.at(index[i], j) += dy.at(static_cast<int>(i), j);
  };
  return id;
}

Tape::Id Tape::broadcast_row(Id rowvec, int rows) {
  const Mat& rv = val(rowvec);
  if (rv.rows != 1) throw std::invalid_argument("broadcast_row: expects a 1 x c vector");
  Mat out(rows, rv.cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rv.cols; ++j) out.at(i, j) = rv.at(0, j);
  Id id = push(std::move(out));
  nodes_.back().back = [this, rowvec, id] {
    const Mat& dy = grad(id);
    Mat& dr = grad_mut(rowvec);
    for (int i = 0; i < dy.rows; ++i)
      for (int j = 0; j < dy.cols; ++j) dr.at(0, j) += dy.at(i, j);
  };
  return id;
}

Tape::Id Tape::rowwise_dot(Id a, Id b) {
  const Mat& av = val(a);
  const Mat& bv = val(b);
  if (!av.same_shape(bv)) throw std::invalid_argument("rowwise_dot: shape mismatch");
  Mat out(av.rows, 1);
  for (int i = 0; i < av.rows; ++i) {
    double acc = 0.0;
    for (int j = 0; j < av.cols; ++j) acc += av.at(i, j) * bv.at(i, j);
    out.at(i, 0) = acc;
  }
  Id id = push(std::move(out));
  nodes_.back().back = [this, a, b, id] {
    const Mat& dy = grad(id);
    const Mat& av2 = val(a);
    const Mat& bv2 = val(b);
    Mat& da = grad_mut(a);
    Mat& db = grad_mut(b);
    for (int i = 0; i < av2.rows; ++i)
      for (int j = 0; j < av2.cols; ++j) {
        da.at(i, j) += dy.at(i, 0) * bv2.at(i, j);
        db.at(i, j) += dy.at(i, 0) * av2.at(i, j);
      }
  };
  return id;
}

Tape::Id Tape::scale(Id x, double s) {
  Mat out = val(x);
  for (auto& v : out.a) v *= s;
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id, s] {
    const Mat& dy = grad(id);
    Mat& dx = grad_mut(x);
    for (size_t i = 0; i < dy.size(); ++i) dx.a[i] += s * dy.a[i];
  };
  return id;
}

Tape::Id Tape::scale_rows(Id x, std::vector<double> s) {
  const Mat& xv = val(x);
  if (static_cast<int>(s.size()) != xv.rows)
    throw std::invalid_argument("scale_rows: factor count mismatch");
  Mat out = xv;
  for (int i = 0; i < out.rows; ++i)
    for (int j = 0; j < out.cols; ++j) out.at(i, j) *= s[static_cast<size_t>(i)];
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id, s = std::move(s)] {
    const Mat& dy = grad(id);
    Mat& dx = grad_mut(x);
    for (int i = 0; i < dy.rows; ++i)
      for (int j = 0; j < dy.cols; ++j) dx.at(i, j) += dy.at(i, j) * s[static_cast<size_t>(i)];
  };
  return id;
}

Tape::Id Tape::dropout(Id x, double rate, Rng& rng) {
  if (rate == 0.0) return x;
  if (rate < 0.0 || rate >= 1.0) throw std::invalid_argument("dropout: rate outside [0,1)");
  const Mat& xv = val(x);
  Mat mask(xv.rows, xv.cols);
  const double keep = 1.0 - rate;
  for (auto& v : mask.a) v = rng.uniform_real() < keep ? 1.0 / keep : 0.0;
  Mat out = xv;
  for (size_t i = 0; i < out.size(); ++i) out.a[i] *= mask.a[i];
  Id id = push(std::move(out));
  nodes_.back().back = [this, x, id, mask = std::move(mask)] {
    const Mat& dy = grad(id);
    Mat& dx = grad_mut(x);
    for (size_t i = 0; i < dy.size(); ++i) dx.a[i] += dy.a[i] * mask.a[i];
  };
  return id;
}

Tape::Id Tape::bce_mean(Id p, std::vector<double> y, double delta) {
  const Mat& pv = val(p);
  if (pv.cols != 1 || static_cast<size_t>(pv.rows) != y.size())
    throw std::invalid_argument("bce_mean: shape mismatch");
  const auto n = static_cast<double>(y.size());
  double loss = 0.0;
  for (size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(pv.a[i], delta, 1.0 - delta);
    loss += -(y[i] * std::log(q) + (1.0 - y[i]) * std::log(1.0 - q));
  }
  Mat out(1, 1);
  out.at(0, 0) = loss / n;
  Id id = push(std::move(out));
  nodes_.back().back = [this, p, id, y = std::move(y), delta, n] {
    const double dy = grad(id).at(0, 0);
    const Mat& pv2 = val(p);
    Mat& dp = grad_mut(p);
    for (size_t i = 0; i < y.size(); ++i) {
      const double raw = pv2.a[i];
      if (raw < delta || raw > 1.0 - delta) continue;  // clamped: zero slope
      dp.a[i] += dy * (-(y[i] / raw) + (1.0 - y[i]) / (1.0 - raw)) / n;
    }
  };
  return id;
}

void Tape::backward(Id root) {
  for (auto& node : nodes_) {
    node.grad = Mat(node.val.rows, node.val.cols);
  }
  Mat& seed = grad_mut(root);
  for (auto& v : seed.a) v = 1.0;
  for (size_t i = nodes_.size(); i-- > 0;) {
    if (nodes_[i].back) nodes_[i].back();
  }
}

Tape::Id lstm_cell(Tape& t, Tape::Id x, Tape::Id h_prev, Tape::Id c_prev, Tape::Id w, Tape::Id b,
                   Tape::Id* cell_out) {
  const int d = t.val(h_prev).cols;
  const Tape::Id gates = t.linear(t.concat_cols({x, h_prev}), w, b);
  const Tape::Id gi = t.sigmoid(t.slice_cols(gates, 0, d));
  const Tape::Id gf = t.sigmoid(t.slice_cols(gates, d, 2 * d));
  const Tape::Id gg = t.tanh_op(t.slice_cols(gates, 2 * d, 3 * d));
  const Tape::Id go = t.sigmoid(t.slice_cols(gates, 3 * d, 4 * d));
  const Tape::Id c_new = t.add(t.hadamard(gf, c_prev), t.hadamard(gi, gg));
  if (cell_out) *cell_out = c_new;
  return t.hadamard(go, t.tanh_op(c_new));
}

}  // namespace splitsat
