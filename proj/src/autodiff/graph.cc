// Copyright 2026 The Unlearnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "unlearnlab/autodiff/graph.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace unlearnlab::autodiff {

std::string Shape::ToString() const {
  std::ostringstream os;
  os << "[" << rows << "x" << cols << "]";
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(shape), data_(std::move(data)) {
  if (data_.size() != shape_.size()) {
    throw InvalidArgument("tensor data size " + std::to_string(data_.size()) +
                          " does not match shape " + shape_.ToString());
  }
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string_view OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kAdd: return "add";
    case OpKind::kMul: return "mul";
    case OpKind::kMatMul: return "matmul";
    case OpKind::kTranspose: return "transpose";
    case OpKind::kEmbeddingGather: return "embedding-gather";
    case OpKind::kGelu: return "gelu";
    case OpKind::kLayerNorm: return "layer-norm";
    case OpKind::kSoftmax: return "softmax";
    case OpKind::kLog: return "log";
    case OpKind::kNegate: return "negate";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kScale: return "scale";
    case OpKind::kCrossEntropy: return "cross-entropy";
  }
  return "unknown";
}

ShapeError::ShapeError(NodeId node, OpKind op, const std::string& detail)
    : Error("shape error at node " + std::to_string(node.index) + " (" +
            std::string(OpKindName(op)) + "): " + detail),
      node_(node),
      op_(op) {}

namespace {

constexpr double kGeluC = 0.044715;
const double kGeluS = std::sqrt(2.0 / std::numbers::pi);
const double kLogFloor = std::log(kProbabilityFloor);

}  // namespace

NodeId Graph::Push(Node node) {
  node.value = Tensor(node.shape);
  node.grad = Tensor(node.shape);
  nodes_.push_back(std::move(node));
  evaluated_ = false;
  return NodeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Graph::Node& Graph::at(NodeId id) const {
  if (id.index >= nodes_.size()) {
    throw InvalidArgument("unknown node id " + std::to_string(id.index));
  }
  return nodes_[id.index];
}

Graph::Node& Graph::at(NodeId id) {
  if (id.index >= nodes_.size()) {
    throw InvalidArgument("unknown node id " + std::to_string(id.index));
  }
  return nodes_[id.index];
}

NodeId Graph::Input(Shape shape) {
  Node n{.op = OpKind::kInput, .shape = shape};
  return Push(std::move(n));
}

NodeId Graph::Input(Tensor value) {
  Node n{.op = OpKind::kInput, .shape = value.shape()};
  NodeId id = Push(std::move(n));
  nodes_[id.index].value = std::move(value);
  nodes_[id.index].bound = true;
  return id;
}

void Graph::SetInput(NodeId id, Tensor value) {
  Node& n = at(id);
  if (n.op != OpKind::kInput) {
    throw InvalidArgument("node " + std::to_string(id.index) +
                          " is not an input");
  }
  if (!(value.shape() == n.shape)) {
    throw ShapeError(id, OpKind::kInput,
                     "bound value " + value.shape().ToString() +
                         " does not match declared " + n.shape.ToString());
  }
  n.value = std::move(value);
  n.bound = true;
  evaluated_ = false;
}

NodeId Graph::Add(NodeId a, NodeId b) {
  const Shape sa = at(a).shape, sb = at(b).shape;
  NodeId next{static_cast<std::uint32_t>(nodes_.size())};
  if (!(sa == sb) && !(sb.rows == 1 && sb.cols == sa.cols)) {
    throw ShapeError(next, OpKind::kAdd,
                     sa.ToString() + " + " + sb.ToString());
  }
  return Push({.op = OpKind::kAdd, .a = a, .b = b, .shape = sa});
}

NodeId Graph::Mul(NodeId a, NodeId b) {
  const Shape sa = at(a).shape, sb = at(b).shape;
  NodeId next{static_cast<std::uint32_t>(nodes_.size())};
  const bool ok = sa == sb || (sb.rows == 1 && sb.cols == sa.cols) ||
                  (sb.cols == 1 && sb.rows == sa.rows);
  if (!ok) {
    throw ShapeError(next, OpKind::kMul,
                     sa.ToString() + " * " + sb.ToString());
  }
  return Push({.op = OpKind::kMul, .a = a, .b = b, .shape = sa});
}

NodeId Graph::MatMul(NodeId a, NodeId b) {
  const Shape sa = at(a).shape, sb = at(b).shape;
  NodeId next{static_cast<std::uint32_t>(nodes_.size())};
  if (sa.cols != sb.rows) {
    throw ShapeError(next, OpKind::kMatMul,
                     sa.ToString() + " @ " + sb.ToString());
  }
  return Push(
      {.op = OpKind::kMatMul, .a = a, .b = b, .shape = {sa.rows, sb.cols}});
}

NodeId Graph::Transpose(NodeId a) {
  const Shape sa = at(a).shape;
  return Push({.op = OpKind::kTranspose, .a = a, .shape = {sa.cols, sa.rows}});
}

NodeId Graph::EmbeddingGather(NodeId table, std::vector<int> indices) {
  const Shape st = at(table).shape;
  NodeId next{static_cast<std::uint32_t>(nodes_.size())};
  if (indices.empty()) {
    throw ShapeError(next, OpKind::kEmbeddingGather, "empty index list");
  }
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= st.rows) {
      throw ShapeError(next, OpKind::kEmbeddingGather,
                       "index " + std::to_string(i) + " outside table " +
                           st.ToString());
    }
  }
  return Push({.op = OpKind::kEmbeddingGather,
               .a = table,
               .shape = {indices.size(), st.cols},
               .indices = std::move(indices)});
}

NodeId Graph::Gelu(NodeId a) {
  return Push({.op = OpKind::kGelu, .a = a, .shape = at(a).shape});
}

NodeId Graph::LayerNorm(NodeId a, double eps) {
  return Push(
      {.op = OpKind::kLayerNorm, .a = a, .shape = at(a).shape, .scalar = eps});
}

NodeId Graph::Softmax(NodeId a) {
  return Push({.op = OpKind::kSoftmax, .a = a, .shape = at(a).shape});
}

NodeId Graph::Log(NodeId a) {
  return Push({.op = OpKind::kLog, .a = a, .shape = at(a).shape});
}

NodeId Graph::Negate(NodeId a) {
  return Push({.op = OpKind::kNegate, .a = a, .shape = at(a).shape});
}

NodeId Graph::Sum(NodeId a) {
  at(a);
  return Push({.op = OpKind::kSum, .a = a, .shape = {1, 1}});
}

NodeId Graph::Mean(NodeId a) {
  at(a);
  return Push({.op = OpKind::kMean, .a = a, .shape = {1, 1}});
}

NodeId Graph::Scale(NodeId a, double c) {
  return Push(
      {.op = OpKind::kScale, .a = a, .shape = at(a).shape, .scalar = c});
}

NodeId Graph::CrossEntropy(NodeId logits, NodeId target) {
  const Shape sl = at(logits).shape, st = at(target).shape;
  NodeId next{static_cast<std::uint32_t>(nodes_.size())};
  if (!(sl == st)) {
    throw ShapeError(next, OpKind::kCrossEntropy,
                     "logits " + sl.ToString() + " vs target " +
                         st.ToString());
  }
  return Push({.op = OpKind::kCrossEntropy,
               .a = logits,
               .b = target,
               .shape = {sl.rows, 1}});
}

const Tensor& Graph::value(NodeId id) const { return at(id).value; }
const Tensor& Graph::grad(NodeId id) const { return at(id).grad; }
const Shape& Graph::shape(NodeId id) const { return at(id).shape; }
OpKind Graph::op(NodeId id) const { return at(id).op; }

void Graph::Forward() {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Node& n = nodes_[i];
    if (n.op == OpKind::kInput && !n.bound) {
      throw InvalidArgument("input node " + std::to_string(i) +
                            " has no bound value");
    }
    EvaluateNode(n);
  }
  evaluated_ = true;
}

void Graph::EvaluateNode(Node& n) {
  Tensor& y = n.value;
  switch (n.op) {
    case OpKind::kInput:
      return;
    case OpKind::kAdd: {
      const Tensor& a = nodes_[n.a.index].value;
      const Tensor& b = nodes_[n.b.index].value;
      if (a.shape() == b.shape()) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = a[i] + b[i];
      } else {
        for (std::size_t r = 0; r < y.rows(); ++r)
          for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) = a(r, c) + b[c];
      }
      return;
    }
    case OpKind::kMul: {
      const Tensor& a = nodes_[n.a.index].value;
      const Tensor& b = nodes_[n.b.index].value;
      if (a.shape() == b.shape()) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = a[i] * b[i];
      } else if (b.rows() == 1) {
        for (std::size_t r = 0; r < y.rows(); ++r)
          for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) = a(r, c) * b[c];
      } else {
        for (std::size_t r = 0; r < y.rows(); ++r)
          for (std::size_t c = 0; c < y.cols(); ++c) y(r, c) = a(r, c) * b[r];
      }
      return;
    }
    case OpKind::kMatMul: {
      const Tensor& a = nodes_[n.a.index].value;
      const Tensor& b = nodes_[n.b.index].value;
      y.Fill(0.0);
      const std::size_t inner = a.cols(), m = b.cols();
      for (std::size_t i = 0; i < a.rows(); ++i) {
        double* yr = &y(i, 0);
        for (std::size_t k = 0; k < inner; ++k) {
          const double aik = a(i, k);
          const double* br = b.row(k).data();
          for (std::size_t j = 0; j < m; ++j) yr[j] += aik * br[j];
        }
      }
      return;
    }
    case OpKind::kTranspose: {
      const Tensor& a = nodes_[n.a.index].value;
      for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) y(c, r) = a(r, c);
      return;
    }
    case OpKind::kEmbeddingGather: {
      const Tensor& table = nodes_[n.a.index].value;
      for (std::size_t r = 0; r < n.indices.size(); ++r) {
        auto src = table.row(static_cast<std::size_t>(n.indices[r]));
        std::copy(src.begin(), src.end(), y.row(r).begin());
      }
      return;
    }
    case OpKind::kGelu: {
      const Tensor& a = nodes_[n.a.index].value;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const double x = a[i];
        y[i] = 0.5 * x * (1.0 + std::tanh(kGeluS * (x + kGeluC * x * x * x)));
      }
      return;
    }
    case OpKind::kLayerNorm: {
      const Tensor& a = nodes_[n.a.index].value;
      const std::size_t cols = a.cols();
      n.aux.assign(a.rows(), 0.0);  // reciprocal std per row
      for (std::size_t r = 0; r < a.rows(); ++r) {
        auto x = a.row(r);
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(cols);
        double var = 0.0;
        for (double v : x) var += (v - mean) * (v - mean);
        var /= static_cast<double>(cols);
        const double rstd = 1.0 / std::sqrt(var + n.scalar);
        n.aux[r] = rstd;
        auto out = y.row(r);
        for (std::size_t c = 0; c < cols; ++c) out[c] = (x[c] - mean) * rstd;
      }
      return;
    }
    case OpKind::kSoftmax: {
      const Tensor& a = nodes_[n.a.index].value;
      for (std::size_t r = 0; r < a.rows(); ++r) {
        auto x = a.row(r);
        auto out = y.row(r);
        const double mx = *std::max_element(x.begin(), x.end());
        double total = 0.0;
        for (std::size_t c = 0; c < x.size(); ++c) {
          out[c] = std::exp(x[c] - mx);
          total += out[c];
        }
        for (double& v : out) v /= total;
      }
      return;
    }
    case OpKind::kLog: {
      const Tensor& a = nodes_[n.a.index].value;
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = std::log(std::max(a[i], kProbabilityFloor));
      return;
    }
    case OpKind::kNegate: {
      const Tensor& a = nodes_[n.a.index].value;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = -a[i];
      return;
    }
    case OpKind::kSum:
    case OpKind::kMean: {
      const Tensor& a = nodes_[n.a.index].value;
      double total = 0.0;
      for (double v : a.data()) total += v;
      y[0] = n.op == OpKind::kSum ? total
                                  : total / static_cast<double>(a.size());
      return;
    }
    case OpKind::kScale: {
      const Tensor& a = nodes_[n.a.index].value;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = n.scalar * a[i];
      return;
    }
    case OpKind::kCrossEntropy: {
      const Tensor& z = nodes_[n.a.index].value;
      const Tensor& t = nodes_[n.b.index].value;
      const std::size_t cols = z.cols();
      // aux holds the clamped log-probabilities, row-major like z.
      n.aux.resize(z.size());
      for (std::size_t r = 0; r < z.rows(); ++r) {
        auto x = z.row(r);
        const double mx = *std::max_element(x.begin(), x.end());
        double total = 0.0;
        for (double v : x) total += std::exp(v - mx);
        const double lse = mx + std::log(total);
        double loss = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
          const double lp = std::max(x[c] - lse, kLogFloor);
          n.aux[r * cols + c] = lp;
          loss -= t(r, c) * lp;
        }
        y[r] = loss;
      }
      return;
    }
  }
}

void Graph::Backward(NodeId root) {
  const Node& r = at(root);
  if (!r.shape.is_scalar()) {
    throw ShapeError(root, r.op,
                     "backward root must be scalar, got " + r.shape.ToString());
  }
  if (!evaluated_) {
    throw InvalidArgument("Backward() called before Forward()");
  }
  std::vector<char> live(nodes_.size(), 0);
  live[root.index] = 1;
  for (std::size_t i = root.index + 1; i-- > 0;) {
    if (!live[i]) continue;
    const Node& n = nodes_[i];
    switch (n.op) {
      case OpKind::kInput:
        break;
      case OpKind::kAdd:
      case OpKind::kMul:
      case OpKind::kMatMul:
      case OpKind::kCrossEntropy:
        live[n.a.index] = 1;
        live[n.b.index] = 1;
        break;
      default:
        live[n.a.index] = 1;
    }
  }
  for (Node& n : nodes_) n.grad.Fill(0.0);
  nodes_[root.index].grad[0] = 1.0;
  for (std::size_t i = root.index + 1; i-- > 0;) {
    if (live[i]) BackpropNode(nodes_[i]);
  }
}

void Graph::BackpropNode(const Node& n) {
  const Tensor& gy = n.grad;
  switch (n.op) {
    case OpKind::kInput:
      return;
    case OpKind::kAdd: {
      Tensor& ga = nodes_[n.a.index].grad;
      Tensor& gb = nodes_[n.b.index].grad;
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += gy[i];
      if (gb.shape() == gy.shape()) {
        for (std::size_t i = 0; i < gy.size(); ++i) gb[i] += gy[i];
      } else {
        for (std::size_t r = 0; r < gy.rows(); ++r)
          for (std::size_t c = 0; c < gy.cols(); ++c) gb[c] += gy(r, c);
      }
      return;
    }
    case OpKind::kMul: {
      const Tensor& a = nodes_[n.a.index].value;
      const Tensor& b = nodes_[n.b.index].value;
      Tensor& ga = nodes_[n.a.index].grad;
      Tensor& gb = nodes_[n.b.index].grad;
      if (a.shape() == b.shape()) {
        for (std::size_t i = 0; i < gy.size(); ++i) {
          ga[i] += gy[i] * b[i];
          gb[i] += gy[i] * a[i];
        }
      } else if (b.rows() == 1) {
        for (std::size_t r = 0; r < gy.rows(); ++r)
          for (std::size_t c = 0; c < gy.cols(); ++c) {
            ga(r, c) += gy(r, c) * b[c];
            gb[c] += gy(r, c) * a(r, c);
          }
      } else {
        for (std::size_t r = 0; r < gy.rows(); ++r)
          for (std::size_t c = 0; c < gy.cols(); ++c) {
            ga(r, c) += gy(r, c) * b[r];
            gb[r] += gy(r, c) * a(r, c);
          }
      }
      return;
    }
    case OpKind::kMatMul: {
      const Tensor& a = nodes_[n.a.index].value;
      const Tensor& b = nodes_[n.b.index].value;
      Tensor& ga = nodes_[n.a.index].grad;
      Tensor& gb = nodes_[n.b.index].grad;
      const std::size_t rows = a.rows(), inner = a.cols(), m = b.cols();
      // ga += gy * b^T
      for (std::size_t i = 0; i < rows; ++i) {
        const double* gyr = gy.row(i).data();
        for (std::size_t k = 0; k < inner; ++k) {
          const double* br = b.row(k).data();
          double acc = 0.0;
          for (std::size_t j = 0; j < m; ++j) acc += gyr[j] * br[j];
          ga(i, k) += acc;
        }
      }
      // gb += a^T * gy
      for (std::size_t i = 0; i < rows; ++i) {
        const double* gyr = gy.row(i).data();
        for (std::size_t k = 0; k < inner; ++k) {
          const double aik = a(i, k);
          if (aik == 0.0) continue;
          double* gbr = &gb(k, 0);
          for (std::size_t j = 0; j < m; ++j) gbr[j] += aik * gyr[j];
        }
      }
      return;
    }
    case OpKind::kTranspose: {
      Tensor& ga = nodes_[n.a.index].grad;
      for (std::size_t r = 0; r < ga.rows(); ++r)
        for (std::size_t c = 0; c < ga.cols(); ++c) ga(r, c) += gy(c, r);
      return;
    }
    case OpKind::kEmbeddingGather: {
      Tensor& gt = nodes_[n.a.index].grad;
      for (std::size_t r = 0; r < n.indices.size(); ++r) {
        auto dst = gt.row(static_cast<std::size_t>(n.indices[r]));
        auto src = gy.row(r);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
      }
      return;
    }
    case OpKind::kGelu: {
      const Tensor& a = nodes_[n.a.index].value;
      Tensor& ga = nodes_[n.a.index].grad;
      for (std::size_t i = 0; i < gy.size(); ++i) {
        const double x = a[i];
        const double th = std::tanh(kGeluS * (x + kGeluC * x * x * x));
        const double d = 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) *
                                                 kGeluS *
                                                 (1.0 + 3.0 * kGeluC * x * x);
        ga[i] += gy[i] * d;
      }
      return;
    }
    case OpKind::kLayerNorm: {
      Tensor& ga = nodes_[n.a.index].grad;
      const Tensor& y = n.value;
      const double cols = static_cast<double>(y.cols());
      for (std::size_t r = 0; r < y.rows(); ++r) {
        auto yr = y.row(r);
        auto gr = gy.row(r);
        double mean_g = 0.0, mean_gy = 0.0;
        for (std::size_t c = 0; c < yr.size(); ++c) {
          mean_g += gr[c];
          mean_gy += gr[c] * yr[c];
        }
        mean_g /= cols;
        mean_gy /= cols;
        const double rstd = n.aux[r];
        for (std::size_t c = 0; c < yr.size(); ++c)
          ga(r, c) += rstd * (gr[c] - mean_g - yr[c] * mean_gy);
      }
      return;
    }
    case OpKind::kSoftmax: {
      Tensor& ga = nodes_[n.a.index].grad;
      const Tensor& y = n.value;
      for (std::size_t r = 0; r < y.rows(); ++r) {
        auto yr = y.row(r);
        auto gr = gy.row(r);
        double dot = 0.0;
        for (std::size_t c = 0; c < yr.size(); ++c) dot += gr[c] * yr[c];
        for (std::size_t c = 0; c < yr.size(); ++c)
          ga(r, c) += yr[c] * (gr[c] - dot);
      }
      return;
    }
    case OpKind::kLog: {
      const Tensor& a = nodes_[n.a.index].value;
      Tensor& ga = nodes_[n.a.index].grad;
      for (std::size_t i = 0; i < gy.size(); ++i)
        if (a[i] > kProbabilityFloor) ga[i] += gy[i] / a[i];
      return;
    }
    case OpKind::kNegate: {
      Tensor& ga = nodes_[n.a.index].grad;
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] -= gy[i];
      return;
    }
    case OpKind::kSum:
    case OpKind::kMean: {
      Tensor& ga = nodes_[n.a.index].grad;
      const double g = n.op == OpKind::kSum
                           ? gy[0]
                           : gy[0] / static_cast<double>(ga.size());
      for (double& v : ga.data()) v += g;
      return;
    }
    case OpKind::kScale: {
      Tensor& ga = nodes_[n.a.index].grad;
      for (std::size_t i = 0; i < gy.size(); ++i) ga[i] += n.scalar * gy[i];
      return;
    }
    case OpKind::kCrossEntropy: {
      const Tensor& t = nodes_[n.b.index].value;
      Tensor& gz = nodes_[n.a.index].grad;
      Tensor& gt = nodes_[n.b.index].grad;
      const std::size_t cols = t.cols();
      for (std::size_t r = 0; r < t.rows(); ++r) {
        const double g = gy[r];
        if (g == 0.0) continue;
        const double* lp = &n.aux[r * cols];
        // Clamped entries contribute a constant, so only unclamped targets
        // pull on the logits.
        double active_mass = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
          if (lp[c] > kLogFloor) active_mass += t(r, c);
        for (std::size_t c = 0; c < cols; ++c) {
          const double p = std::exp(lp[c]);
          const double own = lp[c] > kLogFloor ? t(r, c) : 0.0;
          gz(r, c) += g * (p * active_mass - own);
          gt(r, c) -= g * lp[c];
        }
      }
      return;
    }
  }
}

}  // namespace unlearnlab::autodiff
