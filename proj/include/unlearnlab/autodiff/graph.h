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

#ifndef UNLEARNLAB_AUTODIFF_GRAPH_H_
#define UNLEARNLAB_AUTODIFF_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unlearnlab/autodiff/tensor.h"
#include "unlearnlab/error.h"

namespace unlearnlab::autodiff {

struct NodeId {
  std::uint32_t index = 0;
  bool operator==(const NodeId&) const = default;
};

enum class OpKind {
  kInput,
  kAdd,
  kMul,
  kMatMul,
  kTranspose,
  kEmbeddingGather,
  kGelu,
  kLayerNorm,
  kSoftmax,
  kLog,
  kNegate,
  kSum,
  kMean,
  kScale,
  kCrossEntropy,
};

std::string_view OpKindName(OpKind kind);

// Raised when operand shapes are incompatible. Names the offending node.
class ShapeError : public Error {
 public:
  ShapeError(NodeId node, OpKind op, const std::string& detail);
  NodeId node() const { return node_; }
  OpKind op() const { return op_; }

 private:
  NodeId node_;
  OpKind op_;
};

// Probabilities below this are clamped before taking logarithms.
inline constexpr double kProbabilityFloor = 1e-12;

// Append-only, define-by-run computation graph with reverse-mode
// differentiation. Node ids are assigned in creation order, so every node's
// inputs precede it.
//
// Builders record the op and infer the output shape; nothing is evaluated
// until Forward(). Inputs may be rebound with SetInput() and the graph
// re-evaluated.
class Graph {
 public:
  Graph() = default;

  // Leaf nodes. An unbound input must be bound with SetInput() before
  // Forward().
  NodeId Input(Shape shape);
  NodeId Input(Tensor value);
  void SetInput(NodeId id, Tensor value);

  // a + b. b may equal a's shape or be a 1xC row broadcast over a's rows.
  NodeId Add(NodeId a, NodeId b);
  // Elementwise a * b. b may equal a's shape, be a 1xC row broadcast, or be
  // an Rx1 column broadcast.
  NodeId Mul(NodeId a, NodeId b);
  NodeId MatMul(NodeId a, NodeId b);
  NodeId Transpose(NodeId a);
  // Rows of `table` selected by `indices`; gradient scatters back.
  NodeId EmbeddingGather(NodeId table, std::vector<int> indices);
  // tanh-approximated GELU.
  NodeId Gelu(NodeId a);
  // Row-wise standardization (no affine part).
  NodeId LayerNorm(NodeId a, double eps = 1e-5);
  // Row-wise softmax with max subtraction.
  NodeId Softmax(NodeId a);
  NodeId Log(NodeId a);
  NodeId Negate(NodeId a);
  NodeId Sum(NodeId a);
  NodeId Mean(NodeId a);
  NodeId Scale(NodeId a, double c);
  // Row-wise -sum_j target_j * log softmax(logits)_j, with log-probabilities
  // clamped at log(kProbabilityFloor). Output is Rx1. `target` may be any
  // non-negative row distribution (one-hot, uniform, a teacher's output).
  NodeId CrossEntropy(NodeId logits, NodeId target);

  // Evaluates every node in id order. Deterministic for fixed inputs.
  void Forward();
  // Fills gradient buffers with d(root)/d(node). Nodes that are not
  // ancestors of root end with all-zero gradients. Requires Forward().
  void Backward(NodeId root);

  const Tensor& value(NodeId id) const;
  const Tensor& grad(NodeId id) const;
  const Shape& shape(NodeId id) const;
  OpKind op(NodeId id) const;
  std::size_t size() const { return nodes_.size(); }
  bool evaluated() const { return evaluated_; }

 private:
  struct Node {
    OpKind op;
    NodeId a{};
    NodeId b{};
    Shape shape;
    Tensor value;
    Tensor grad;
    bool bound = false;           // inputs only
    double scalar = 0.0;          // Scale factor, LayerNorm eps
    std::vector<int> indices;     // EmbeddingGather
    std::vector<double> aux;      // per-op forward cache
  };

  NodeId Push(Node node);
  const Node& at(NodeId id) const;
  Node& at(NodeId id);
  void EvaluateNode(Node& n);
  void BackpropNode(const Node& n);

  std::vector<Node> nodes_;
  bool evaluated_ = false;
};

}  // namespace unlearnlab::autodiff

#endif  // UNLEARNLAB_AUTODIFF_GRAPH_H_
