#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "splitsat/rng.hpp"

namespace splitsat {

/// Dense row-major matrix of doubles.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return a.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

/// Fixed-coefficient sparse matrix in entry-list form. Coefficients are
/// constants of the graph (e.g. 1/degree mean normalization), never
/// parameters, so spmm only differentiates through the dense operand.
struct SparseMat {
  int rows = 0;
  int cols = 0;
  std::vector<int> r, c;
  std::vector<double> coef;

  void add_entry(int row, int col, double v) {
    r.push_back(row);
    c.push_back(col);
    coef.push_back(v);
  }
};

/// Reverse-mode tape over dense matrix ops. Build the graph by value, call
/// backward(loss) once, read gradients off input nodes. Node ids index into
/// the tape; creation order is a topological order.
class Tape {
 public:
  using Id = int;

  Id input(Mat v);
  const Mat& val(Id id) const { return nodes_[static_cast<size_t>(id)].val; }
  const Mat& grad(Id id) const { return nodes_[static_cast<size_t>(id)].grad; }

  Id matmul(Id a, Id b);
  /// y = x * w^T + broadcast(b); w is (out x in), b is (1 x out).
  Id linear(Id x, Id w, Id b);
  /// y = s * x for a constant sparse s (s.cols must equal rows of x).
  Id spmm(const SparseMat* s, Id x);
  Id add(Id a, Id b);
  Id sub(Id a, Id b);
  Id hadamard(Id a, Id b);
  /// x (r x c) scaled per row by v (r x 1).
  Id mul_colvec(Id x, Id v);
  Id relu(Id x);
  Id tanh_op(Id x);
  Id sigmoid(Id x);
  Id concat_cols(const std::vector<Id>& parts);
  Id slice_cols(Id x, int begin, int end);
  /// y[i] = x[index[i]]; backward scatter-adds.
  Id gather_rows(Id x, std::vector<int> index);
  /// Repeats a (1 x c) row vector r times.
  Id broadcast_row(Id rowvec, int rows);
  /// y[r] = dot(a[r,:], b[r,:]) as an (r x 1) column.
  Id rowwise_dot(Id a, Id b);
  Id scale(Id x, double s);
  /// y[r,:] = s[r] * x[r,:] for constant per-row factors.
  Id scale_rows(Id x, std::vector<double> s);
  /// Inverted dropout; identity when rate == 0.
  Id dropout(Id x, double rate, Rng& rng);
  /// Mean binary cross-entropy of probabilities p (n x 1) against targets y
  /// in {0,1}; p is clamped to [delta, 1-delta]. Returns a 1 x 1 scalar.
  Id bce_mean(Id p, std::vector<double> y, double delta);

  void backward(Id root);
  size_t num_nodes() const { return nodes_.size(); }

 private:
  struct Node {
    Mat val;
    Mat grad;
    std::function<void()> back;
  };

  Id push(Mat val, std::function<void()> back = {});
  Mat& grad_mut(Id id) { return nodes_[static_cast<size_t>(id)].grad; }

  std::vector<Node> nodes_;
};

/// LSTM cell with combined gate weights: w is (4d x in_dim+d), b is (1 x 4d),
/// gate order [input, forget, cell, output]. Returns the new hidden state and
/// writes the new cell state to *cell_out.
Tape::Id lstm_cell(Tape& t, Tape::Id x, Tape::Id h_prev, Tape::Id c_prev, Tape::Id w, Tape::Id b,
                   Tape::Id* cell_out);

}  // namespace splitsat
