// Copyright (c) 2026 The HyGEN-cpp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal reverse-mode automatic differentiation over dense double matrices.
//
// A Value is a handle to a node in a dynamically built tape. Every operation
// allocates a new node holding its result, a same-shape gradient accumulator,
// references to its inputs and a closure that pushes the node's gradient into
// those inputs. Value::backward() on a 1x1 root visits every reachable node
// once, in reverse topological order.
//
// One-dimensional quantities are 1 x n row matrices unless an operation says
// otherwise. Channeled signals are channels x length matrices.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hygen/errors.hpp"

namespace hygen::ad {

using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct Node {
  Matrix data;
  Matrix grad;
  std::string op;
  std::vector<std::shared_ptr<Node>> parents;
  std::function<void(Node&)> backward_fn;
  bool requires_grad = false;
};

namespace detail {

inline std::string shape_str(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

inline void accumulate(const std::shared_ptr<Node>& target, const Matrix& delta) {
  if (target->requires_grad) target->grad += delta;
}

}  // namespace detail

class Value {
 public:
  Value() = default;

  static Value constant(Matrix data) { return leaf(std::move(data), false, "constant"); }
  static Value parameter(Matrix data) { return leaf(std::move(data), true, "parameter"); }
  static Value scalar(double v) { return constant(Matrix::Constant(1, 1, v)); }

  bool valid() const noexcept { return node_ != nullptr; }
  const Matrix& data() const { return node_->data; }
  const Matrix& grad() const { return node_->grad; }
  Matrix& mutable_data() { return node_->data; }
  Matrix& mutable_grad() { return node_->grad; }
  const std::string& op() const { return node_->op; }
  bool requires_grad() const { return node_->requires_grad; }
  Eigen::Index rows() const { return node_->data.rows(); }
  Eigen::Index cols() const { return node_->data.cols(); }
  std::size_t num_parents() const { return node_->parents.size(); }

  double item() const {
    if (rows() != 1 || cols() != 1) {
      throw ShapeError("item() on non-scalar value of shape " + detail::shape_str(data()));
    }
    return node_->data(0, 0);
  }

  void zero_grad() { node_->grad.setZero(); }

  /// Same data, cut from the tape.
  Value detach() const { return constant(node_->data); }

  /// Backpropagates from this scalar. Gradients accumulate; parameters must be
  /// zeroed between independent passes.
  void backward() const {
    if (rows() != 1 || cols() != 1) {
      throw ShapeError("backward() requires a 1x1 root, got " + detail::shape_str(data()));
    }
    std::vector<Node*> order;
    std::unordered_set<Node*> visited;
    std::vector<std::pair<Node*, std::size_t>> stack;
    stack.emplace_back(node_.get(), 0);
    visited.insert(node_.get());
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < node->parents.size()) {
        Node* parent = node->parents[next++].get();
        if (parent->requires_grad && visited.insert(parent).second) {
          stack.emplace_back(parent, 0);
        }
      } else {
        order.push_back(node);
        stack.pop_back();
      }
    }
    node_->grad(0, 0) += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if ((*it)->backward_fn) (*it)->backward_fn(**it);
    }
  }

  /// Calls fn once for every node reachable from this one, this one included.
  void for_each_node(const std::function<void(const Node&)>& fn) const {
    std::unordered_set<const Node*> visited{node_.get()};
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
      const Node* node = stack.back();
      stack.pop_back();
      fn(*node);
      for (const auto& parent : node->parents) {
        if (visited.insert(parent.get()).second) stack.push_back(parent.get());
      }
    }
  }

  /// Builds an interior node. Used by the operation implementations below.
  static Value make(Matrix data, std::string op, std::vector<Value> inputs,
                    std::function<void(Node&)> backward_fn) {
    auto node = std::make_shared<Node>();
    node->grad = Matrix::Zero(data.rows(), data.cols());
    node->data = std::move(data);
    node->op = std::move(op);
    for (const auto& in : inputs) node->requires_grad = node->requires_grad || in.requires_grad();
    if (node->requires_grad) {
      node->parents.reserve(inputs.size());
      for (auto& in : inputs) node->parents.push_back(std::move(in.node_));
      node->backward_fn = std::move(backward_fn);
    }
    return Value(std::move(node));
  }

 private:
  explicit Value(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Value leaf(Matrix data, bool requires_grad, const char* op) {
    auto node = std::make_shared<Node>();
    node->grad = Matrix::Zero(data.rows(), data.cols());
    node->data = std::move(data);
    node->op = op;
    node->requires_grad = requires_grad;
    return Value(std::move(node));
  }

  std::shared_ptr<Node> node_;
};

// ---------------------------------------------------------------------------
// Elementwise and linear algebra
// ---------------------------------------------------------------------------

inline Value matmul(const Value& a, const Value& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions disagree (" + detail::shape_str(a.data()) +
                     " x " + detail::shape_str(b.data()) + ")");
  }
  return Value::make(a.data() * b.data(), "matmul", {a, b}, [](Node& self) {
    const auto& pa = self.parents[0];
    const auto& pb = self.parents[1];
    if (pa->requires_grad) pa->grad.noalias() += self.grad * pb->data.transpose();
    if (pb->requires_grad) pb->grad.noalias() += pa->data.transpose() * self.grad;
  });
}

inline void require_same_shape(const Value& a, const Value& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shapes differ (" + detail::shape_str(a.data()) +
                     " vs " + detail::shape_str(b.data()) + ")");
  }
}

inline Value add(const Value& a, const Value& b) {
  require_same_shape(a, b, "add");
  return Value::make(a.data() + b.data(), "add", {a, b}, [](Node& self) {
    detail::accumulate(self.parents[0], self.grad);
    detail::accumulate(self.parents[1], self.grad);
  });
}

inline Value sub(const Value& a, const Value& b) {
  require_same_shape(a, b, "sub");
  return Value::make(a.data() - b.data(), "sub", {a, b}, [](Node& self) {
    detail::accumulate(self.parents[0], self.grad);
    detail::accumulate(self.parents[1], -self.grad);
  });
}

inline Value hadamard(const Value& a, const Value& b) {
  require_same_shape(a, b, "hadamard");
  return Value::make(a.data().cwiseProduct(b.data()), "hadamard", {a, b}, [](Node& self) {
    const auto& pa = self.parents[0];
    const auto& pb = self.parents[1];
    detail::accumulate(pa, self.grad.cwiseProduct(pb->data));
    detail::accumulate(pb, self.grad.cwiseProduct(pa->data));
  });
}

inline Value scale(const Value& a, double factor) {
  return Value::make(a.data() * factor, "scale", {a}, [factor](Node& self) {
    detail::accumulate(self.parents[0], self.grad * factor);
  });
}

/// x (m x n) plus a 1 x n row broadcast down every row.
inline Value add_row_bias(const Value& x, const Value& bias) {
  if (bias.rows() != 1 || bias.cols() != x.cols()) {
    throw ShapeError("add_row_bias: bias " + detail::shape_str(bias.data()) + " for input " +
                     detail::shape_str(x.data()));
  }
  Matrix out = x.data().rowwise() + bias.data().row(0);
  return Value::make(std::move(out), "add_row_bias", {x, bias}, [](Node& self) {
    detail::accumulate(self.parents[0], self.grad);
    detail::accumulate(self.parents[1], self.grad.colwise().sum());
  });
}

/// x (m x n) plus an m x 1 column broadcast across every column.
inline Value add_col_bias(const Value& x, const Value& bias) {
  if (bias.cols() != 1 || bias.rows() != x.rows()) {
    throw ShapeError("add_col_bias: bias " + detail::shape_str(bias.data()) + " for input " +
                     detail::shape_str(x.data()));
  }
  Matrix out = x.data().colwise() + bias.data().col(0);
  return Value::make(std::move(out), "add_col_bias", {x, bias}, [](Node& self) {
    detail::accumulate(self.parents[0], self.grad);
    detail::accumulate(self.parents[1], self.grad.rowwise().sum());
  });
}

inline Value sum(const Value& x) {
  return Value::make(Matrix::Constant(1, 1, x.data().sum()), "sum", {x}, [](Node& self) {
    const auto& p = self.parents[0];
    detail::accumulate(p, Matrix::Constant(p->data.rows(), p->data.cols(), self.grad(0, 0)));
  });
}

inline Value mean(const Value& x) {
  const double n = static_cast<double>(x.data().size());
  if (n == 0) throw ShapeError("mean of an empty value");
  return Value::make(Matrix::Constant(1, 1, x.data().sum() / n), "mean", {x}, [n](Node& self) {
    const auto& p = self.parents[0];
    detail::accumulate(p, Matrix::Constant(p->data.rows(), p->data.cols(), self.grad(0, 0) / n));
  });
}

inline Value transpose(const Value& x) {
  return Value::make(x.data().transpose(), "transpose", {x}, [](Node& self) {
    detail::accumulate(self.parents[0], self.grad.transpose());
  });
}

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

/// x where x > 0, slope * x otherwise. The derivative at 0 is the slope.
inline Value leaky_relu(const Value& x, double slope = 0.01) {
  Matrix out = x.data().unaryExpr([slope](double v) { return v > 0.0 ? v : slope * v; });
  return Value::make(std::move(out), "leaky_relu", {x}, [slope](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    p->grad += self.grad.binaryExpr(p->data,
                                    [slope](double g, double v) { return v > 0.0 ? g : slope * g; });
  });
}

inline double stable_sigmoid(double v) {
  if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
  const double e = std::exp(v);
  return e / (1.0 + e);
}

inline Value sigmoid(const Value& x) {
  Matrix out = x.data().unaryExpr(&stable_sigmoid);
  return Value::make(std::move(out), "sigmoid", {x}, [](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    p->grad += self.grad.binaryExpr(self.data, [](double g, double s) { return g * s * (1.0 - s); });
  });
}

inline Value softplus(const Value& x) {
  Matrix out = x.data().unaryExpr([](double v) {
    return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
  });
  return Value::make(std::move(out), "softplus", {x}, [](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    p->grad += self.grad.binaryExpr(p->data, [](double g, double v) { return g * stable_sigmoid(v); });
  });
}

/// Elementwise clamp to [lo, hi]; values pinned at a bound receive no gradient.
inline Value clamp(const Value& x, double lo, double hi) {
  Matrix out = x.data().cwiseMax(lo).cwiseMin(hi);
  return Value::make(std::move(out), "clamp", {x}, [lo, hi](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    p->grad += self.grad.binaryExpr(p->data, [lo, hi](double g, double v) {
      return (v >= lo && v <= hi) ? g : 0.0;
    });
  });
}

/// Forward value `forward`, backward the identity onto x.
inline Value straight_through(const Value& x, Matrix forward) {
  if (forward.rows() != x.rows() || forward.cols() != x.cols()) {
    throw ShapeError("straight_through: " + detail::shape_str(forward) + " vs " + detail::shape_str(x.data()));
  }
  return Value::make(std::move(forward), "straight_through", {x}, [](Node& self) {
    const auto& p = self.parents[0];
    if (p->requires_grad) p->grad += self.grad;
  });
}

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

inline Value gather_rows(const Value& x, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= static_cast<std::size_t>(x.rows())) {
      throw ShapeError("gather_rows: index " + std::to_string(rows[r]) + " out of range for " +
                       detail::shape_str(x.data()));
    }
    out.row(static_cast<Eigen::Index>(r)) = x.data().row(static_cast<Eigen::Index>(rows[r]));
  }
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return Value::make(std::move(out), "gather_rows", {x}, [idx = std::move(idx)](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    for (std::size_t r = 0; r < idx.size(); ++r) {
      p->grad.row(static_cast<Eigen::Index>(idx[r])) += self.grad.row(static_cast<Eigen::Index>(r));
    }
  });
}

inline Value gather_cols(const Value& x, std::span<const std::size_t> cols) {
  Matrix out(x.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] >= static_cast<std::size_t>(x.cols())) {
      throw ShapeError("gather_cols: index " + std::to_string(cols[c]) + " out of range for " +
                       detail::shape_str(x.data()));
    }
    out.col(static_cast<Eigen::Index>(c)) = x.data().col(static_cast<Eigen::Index>(cols[c]));
  }
  std::vector<std::size_t> idx(cols.begin(), cols.end());
  return Value::make(std::move(out), "gather_cols", {x}, [idx = std::move(idx)](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    for (std::size_t c = 0; c < idx.size(); ++c) {
      p->grad.col(static_cast<Eigen::Index>(idx[c])) += self.grad.col(static_cast<Eigen::Index>(c));
    }
  });
}

inline Value slice_cols(const Value& x, Eigen::Index start, Eigen::Index count) {
  if (start < 0 || count < 0 || start + count > x.cols()) {
    throw ShapeError("slice_cols: range out of bounds for " + detail::shape_str(x.data()));
  }
  Matrix out = x.data().middleCols(start, count);
  return Value::make(std::move(out), "slice_cols", {x}, [start, count](Node& self) {
    const auto& p = self.parents[0];
    if (p->requires_grad) p->grad.middleCols(start, count) += self.grad;
  });
}

inline Value concat_rows(std::span<const Value> parts) {
  if (parts.empty()) throw ShapeError("concat_rows: no inputs");
  Eigen::Index total = 0;
  const Eigen::Index cols = parts.front().cols();
  for (const auto& p : parts) {
    if (p.cols() != cols) throw ShapeError("concat_rows: column counts differ");
    total += p.rows();
  }
  Matrix out(total, cols);
  std::vector<Eigen::Index> offsets;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    offsets.push_back(at);
    out.middleRows(at, p.rows()) = p.data();
    at += p.rows();
  }
  std::vector<Value> inputs(parts.begin(), parts.end());
  return Value::make(std::move(out), "concat_rows", std::move(inputs),
                     [offsets = std::move(offsets)](Node& self) {
                       for (std::size_t i = 0; i < self.parents.size(); ++i) {
                         const auto& p = self.parents[i];
                         if (p->requires_grad) p->grad += self.grad.middleRows(offsets[i], p->data.rows());
                       }
                     });
}

inline Value concat_cols(const Value& a, const Value& b) {
  if (a.rows() != b.rows()) throw ShapeError("concat_cols: row counts differ");
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a.data(), b.data();
  const Eigen::Index split = a.cols();
  return Value::make(std::move(out), "concat_cols", {a, b}, [split](Node& self) {
    detail::accumulate(self.parents[0], self.grad.leftCols(split));
    detail::accumulate(self.parents[1], self.grad.rightCols(self.grad.cols() - split));
  });
}

/// Reinterprets x as rows x cols, reading and writing elements in row-major order.
inline Value reshape(const Value& x, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != x.data().size()) {
    throw ShapeError("reshape: cannot view " + detail::shape_str(x.data()) + " as " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  RowMajor src = x.data();
  Matrix out = Eigen::Map<const RowMajor>(src.data(), rows, cols);
  return Value::make(std::move(out), "reshape", {x}, [](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    RowMajor g = self.grad;
    p->grad += Eigen::Map<const RowMajor>(g.data(), p->data.rows(), p->data.cols());
  });
}

/// Multiplies row i of x (m x d) by weights[i]; weights is 1 x m.
inline Value scale_rows(const Value& x, const Value& weights) {
  if (weights.rows() != 1 || weights.cols() != x.rows()) {
    throw ShapeError("scale_rows: weights " + detail::shape_str(weights.data()) + " for input " +
                     detail::shape_str(x.data()));
  }
  Matrix out = weights.data().row(0).transpose().asDiagonal() * x.data();
  return Value::make(std::move(out), "scale_rows", {x, weights}, [](Node& self) {
    const auto& px = self.parents[0];
    const auto& pw = self.parents[1];
    if (px->requires_grad) px->grad += pw->data.row(0).transpose().asDiagonal() * self.grad;
    if (pw->requires_grad) {
      pw->grad.row(0) += self.grad.cwiseProduct(px->data).rowwise().sum().transpose();
    }
  });
}

/// Column-wise max minus column-wise min over the rows of x (m x d), giving
/// 1 x d. The gradient goes to the first row attaining each extremum.
inline Value maxmin_rows(const Value& x) {
  if (x.rows() == 0) throw DomainError("maxmin_rows: no rows to pool");
  const Eigen::Index d = x.cols();
  std::vector<Eigen::Index> arg_max(static_cast<std::size_t>(d));
  std::vector<Eigen::Index> arg_min(static_cast<std::size_t>(d));
  Matrix out(1, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index imax = 0;
    Eigen::Index imin = 0;
    for (Eigen::Index i = 1; i < x.rows(); ++i) {
      if (x.data()(i, j) > x.data()(imax, j)) imax = i;
      if (x.data()(i, j) < x.data()(imin, j)) imin = i;
    }
    arg_max[static_cast<std::size_t>(j)] = imax;
    arg_min[static_cast<std::size_t>(j)] = imin;
    out(0, j) = x.data()(imax, j) - x.data()(imin, j);
  }
  return Value::make(std::move(out), "maxmin_rows", {x},
                     [arg_max = std::move(arg_max), arg_min = std::move(arg_min)](Node& self) {
                       const auto& p = self.parents[0];
                       if (!p->requires_grad) return;
                       for (std::size_t j = 0; j < arg_max.size(); ++j) {
                         const auto jj = static_cast<Eigen::Index>(j);
                         p->grad(arg_max[j], jj) += self.grad(0, jj);
                         p->grad(arg_min[j], jj) -= self.grad(0, jj);
                       }
                     });
}

/// Sparse constant times dense value.
inline Value spmm(std::shared_ptr<const SparseMatrix> s, const Value& x) {
  if (s->cols() != x.rows()) {
    throw ShapeError("spmm: sparse " + std::to_string(s->rows()) + "x" + std::to_string(s->cols()) +
                     " times " + detail::shape_str(x.data()));
  }
  Matrix out = (*s) * x.data();
  return Value::make(std::move(out), "spmm", {x}, [s = std::move(s)](Node& self) {
    const auto& p = self.parents[0];
    if (p->requires_grad) p->grad.noalias() += s->transpose() * self.grad;
  });
}

// ---------------------------------------------------------------------------
// Signal operations (channels x length)
// ---------------------------------------------------------------------------

/// Width-3 cross-correlation with stride 1 and zero padding 1. `kernels` is
/// c_out x (c_in * 3) with column ci * 3 + t holding tap t of input channel ci;
/// `bias` is c_out x 1.
inline Value conv1d(const Value& x, const Value& kernels, const Value& bias) {
  const Eigen::Index c_in = x.rows();
  const Eigen::Index length = x.cols();
  if (length < 1) throw ShapeError("conv1d: signal length must be at least 1");
  if (kernels.cols() != c_in * 3) {
    throw ShapeError("conv1d: kernels " + detail::shape_str(kernels.data()) + " for input " +
                     detail::shape_str(x.data()));
  }
  if (bias.rows() != kernels.rows() || bias.cols() != 1) {
    throw ShapeError("conv1d: bias " + detail::shape_str(bias.data()) + " for kernels " +
                     detail::shape_str(kernels.data()));
  }
  Matrix cols = Matrix::Zero(c_in * 3, length);
  for (Eigen::Index ci = 0; ci < c_in; ++ci) {
    cols.row(ci * 3 + 1) = x.data().row(ci);
    if (length > 1) {
      cols.block(ci * 3, 1, 1, length - 1) = x.data().block(ci, 0, 1, length - 1);
      cols.block(ci * 3 + 2, 0, 1, length - 1) = x.data().block(ci, 1, 1, length - 1);
    }
  }
  Matrix out = kernels.data() * cols;
  out.colwise() += bias.data().col(0);
  return Value::make(std::move(out), "conv1d", {x, kernels, bias},
                     [cols = std::move(cols), c_in, length](Node& self) {
                       const auto& px = self.parents[0];
                       const auto& pk = self.parents[1];
                       const auto& pb = self.parents[2];
                       if (pk->requires_grad) pk->grad.noalias() += self.grad * cols.transpose();
                       if (pb->requires_grad) pb->grad += self.grad.rowwise().sum();
                       if (!px->requires_grad) return;
                       Matrix dcols = pk->data.transpose() * self.grad;
                       for (Eigen::Index ci = 0; ci < c_in; ++ci) {
                         px->grad.row(ci) += dcols.row(ci * 3 + 1);
                         if (length > 1) {
                           px->grad.block(ci, 0, 1, length - 1) += dcols.block(ci * 3, 1, 1, length - 1);
                           px->grad.block(ci, 1, 1, length - 1) += dcols.block(ci * 3 + 2, 0, 1, length - 1);
                         }
                       }
                     });
}

/// Non-overlapping mean pooling along the length axis. A trailing partial
/// window is averaged over the elements it actually covers.
inline Value avgpool1d(const Value& x, int window) {
  if (window <= 0) throw ParameterError("avgpool1d: window must be positive");
  const Eigen::Index length = x.cols();
  const Eigen::Index w = window;
  const Eigen::Index out_len = (length + w - 1) / w;
  Matrix out(x.rows(), out_len);
  for (Eigen::Index o = 0; o < out_len; ++o) {
    const Eigen::Index begin = o * w;
    const Eigen::Index span = std::min(w, length - begin);
    out.col(o) = x.data().middleCols(begin, span).rowwise().mean();
  }
  return Value::make(std::move(out), "avgpool1d", {x}, [w, length, out_len](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    for (Eigen::Index o = 0; o < out_len; ++o) {
      const Eigen::Index begin = o * w;
      const Eigen::Index span = std::min(w, length - begin);
      for (Eigen::Index j = begin; j < begin + span; ++j) {
        p->grad.col(j) += self.grad.col(o) / static_cast<double>(span);
      }
    }
  });
}

/// Repeats every column `factor` times.
inline Value upsample_nearest(const Value& x, int factor) {
  if (factor <= 0) throw ParameterError("upsample_nearest: factor must be positive");
  const Eigen::Index f = factor;
  Matrix out(x.rows(), x.cols() * f);
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) = x.data().col(j / f);
  return Value::make(std::move(out), "upsample_nearest", {x}, [f](Node& self) {
    const auto& p = self.parents[0];
    if (!p->requires_grad) return;
    for (Eigen::Index j = 0; j < self.grad.cols(); ++j) p->grad.col(j / f) += self.grad.col(j);
  });
}

/// Adaptive instance normalization: each channel (row) of x is normalized over
/// its length with the biased variance, then scaled and shifted by the c x 1
/// style vectors.
inline Value adain(const Value& x, const Value& style_scale, const Value& style_shift, double eps = 1e-5) {
  if (eps <= 0.0) throw ParameterError("adain: eps must be positive");
  const Eigen::Index c = x.rows();
  if (style_scale.rows() != c || style_scale.cols() != 1 || style_shift.rows() != c ||
      style_shift.cols() != 1) {
    throw ShapeError("adain: style vectors must be " + std::to_string(c) + "x1");
  }
  const Eigen::Index length = x.cols();
  Eigen::VectorXd inv_std(c);
  Matrix normalized(c, length);
  for (Eigen::Index i = 0; i < c; ++i) {
    const double mu = x.data().row(i).mean();
    const double var = (x.data().row(i).array() - mu).square().mean();
    inv_std(i) = 1.0 / std::sqrt(var + eps);
    normalized.row(i) = (x.data().row(i).array() - mu) * inv_std(i);
  }
  Matrix out = style_scale.data().col(0).asDiagonal() * normalized;
  out.colwise() += style_shift.data().col(0);
  return Value::make(std::move(out), "adain", {x, style_scale, style_shift},
                     [normalized = std::move(normalized), inv_std = std::move(inv_std)](Node& self) {
                       const auto& px = self.parents[0];
                       const auto& ps = self.parents[1];
                       const auto& pt = self.parents[2];
                       if (ps->requires_grad) ps->grad.col(0) += self.grad.cwiseProduct(normalized).rowwise().sum();
                       if (pt->requires_grad) pt->grad.col(0) += self.grad.rowwise().sum();
                       if (!px->requires_grad) return;
                       for (Eigen::Index i = 0; i < normalized.rows(); ++i) {
                         Eigen::RowVectorXd dnorm = self.grad.row(i) * ps->data(i, 0);
                         const double mean_d = dnorm.mean();
                         const double mean_dn = dnorm.cwiseProduct(normalized.row(i)).mean();
                         px->grad.row(i).array() +=
                             inv_std(i) * (dnorm.array() - mean_d - normalized.row(i).array() * mean_dn);
                       }
                     });
}

// ---------------------------------------------------------------------------
// Similarity
// ---------------------------------------------------------------------------

/// Row-wise cosine similarity of two B x d matrices, a.b / (max(|a|, eps) *
/// max(|b|, eps)), as a B x 1 column.
inline Value row_cosine(const Value& a, const Value& b, double eps = 1e-8) {
  require_same_shape(a, b, "row_cosine");
  if (eps <= 0.0) throw ParameterError("row_cosine: eps must be positive");
  const Eigen::Index n = a.rows();
  Eigen::VectorXd dots = a.data().cwiseProduct(b.data()).rowwise().sum();
  Eigen::VectorXd norm_a = a.data().rowwise().norm();
  Eigen::VectorXd norm_b = b.data().rowwise().norm();
  Matrix out(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i, 0) = dots(i) / (std::max(norm_a(i), eps) * std::max(norm_b(i), eps));
  }
  return Value::make(std::move(out), "row_cosine", {a, b},
                     [dots, norm_a, norm_b, eps](Node& self) {
                       const auto& pa = self.parents[0];
                       const auto& pb = self.parents[1];
                       for (Eigen::Index i = 0; i < self.grad.rows(); ++i) {
                         const double g = self.grad(i, 0);
                         const double na = std::max(norm_a(i), eps);
                         const double nb = std::max(norm_b(i), eps);
                         const double theta = dots(i) / (na * nb);
                         if (pa->requires_grad) {
                           Eigen::RowVectorXd da = pb->data.row(i) / (na * nb);
                           if (norm_a(i) > eps) da -= theta * pa->data.row(i) / (norm_a(i) * norm_a(i));
                           pa->grad.row(i) += g * da;
                         }
                         if (pb->requires_grad) {
                           Eigen::RowVectorXd db = pa->data.row(i) / (na * nb);
                           if (norm_b(i) > eps) db -= theta * pb->data.row(i) / (norm_b(i) * norm_b(i));
                           pb->grad.row(i) += g * db;
                         }
                       }
                     });
}

/// Cosine similarity of two 1 x d vectors as a 1 x 1 value.
inline Value cosine_similarity(const Value& a, const Value& b, double eps = 1e-8) {
  if (a.rows() != 1 || b.rows() != 1) throw ShapeError("cosine_similarity: expects 1 x d rows");
  return row_cosine(a, b, eps);
}

/// Elementwise (|theta - k| / (theta (1 - theta)))^p for theta in (0, 1).
inline Value similarity_penalty(const Value& theta, double k, double p) {
  auto ratio = [k](double t) { return std::abs(t - k) / (t * (1.0 - t)); };
  Matrix out = theta.data().unaryExpr([&](double t) { return std::pow(ratio(t), p); });
  return Value::make(std::move(out), "similarity_penalty", {theta}, [k, p, ratio](Node& self) {
    const auto& pt = self.parents[0];
    if (!pt->requires_grad) return;
    pt->grad += self.grad.binaryExpr(pt->data, [&](double g, double t) {
      const double denom = t * (1.0 - t);
      const double sign = t > k ? 1.0 : (t < k ? -1.0 : 0.0);
      const double dratio = (sign * denom - std::abs(t - k) * (1.0 - 2.0 * t)) / (denom * denom);
      const double r = ratio(t);
      const double dpow = p == 1.0 ? 1.0 : p * std::pow(r, p - 1.0);
      return g * dpow * dratio;
    });
  });
}

}  // namespace hygen::ad
