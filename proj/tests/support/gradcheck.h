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

#ifndef UNLEARNLAB_TESTS_SUPPORT_GRADCHECK_H_
#define UNLEARNLAB_TESTS_SUPPORT_GRADCHECK_H_

// Random computation graphs and a central-difference gradient check, shared
// by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "unlearnlab/autodiff/graph.h"

namespace unlearnlab::testing {

using autodiff::Graph;
using autodiff::NodeId;
using autodiff::OpKind;
using autodiff::Shape;
using autodiff::Tensor;

struct RandomGraph {
  Graph graph;
  NodeId root;
  std::vector<NodeId> leaves;
  std::set<OpKind> ops;
};

inline Tensor RandomTensor(Shape s, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Tensor t(s);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = n(rng);
  return t;
}

// A row-stochastic leaf, strictly positive so CE stays away from clamping.
inline Tensor RandomRows(Shape s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Tensor t(s);
  for (std::size_t r = 0; r < s.rows; ++r) {
    double z = 0.0;
    for (std::size_t c = 0; c < s.cols; ++c) z += t(r, c) = u(rng);
    for (std::size_t c = 0; c < s.cols; ++c) t(r, c) /= z;
  }
  return t;
}

// Builds 3..8 random ops over a random leaf, weights the result by a random
// leaf, then reduces to a scalar with Sum, Mean or CrossEntropy followed by
// one of them.
inline RandomGraph BuildRandomGraph(std::mt19937_64& rng) {
  RandomGraph g;
  std::uniform_int_distribution<int> dim(2, 4);
  auto leaf = [&](Shape s) {
    NodeId id = g.graph.Input(RandomTensor(s, rng));
    g.leaves.push_back(id);
    return id;
  };
  auto use = [&](OpKind k) { g.ops.insert(k); };
  g.ops.insert(OpKind::kInput);

  NodeId x = leaf({static_cast<std::size_t>(dim(rng)),
                   static_cast<std::size_t>(dim(rng))});
  const int steps = std::uniform_int_distribution<int>(3, 8)(rng);
  for (int i = 0; i < steps; ++i) {
    const Shape s = g.graph.shape(x);
    switch (std::uniform_int_distribution<int>(0, 11)(rng)) {
      case 0: {
        const bool row = rng() % 2;
        x = g.graph.Add(x, leaf(row ? Shape{1, s.cols} : s));
        use(OpKind::kAdd);
        break;
      }
      case 1: {
        const int form = rng() % 3;
        const Shape b = form == 0 ? s : form == 1 ? Shape{1, s.cols}
                                                  : Shape{s.rows, 1};
        x = g.graph.Mul(x, leaf(b));
        use(OpKind::kMul);
        break;
      }
      case 2:
        x = g.graph.MatMul(x, leaf({s.cols, static_cast<std::size_t>(dim(rng))}));
        use(OpKind::kMatMul);
        break;
      case 3:
        x = g.graph.Transpose(x);
        use(OpKind::kTranspose);
        break;
      case 4: {
        const int v = dim(rng) + 1;
        std::vector<int> idx(s.rows);
        for (auto& k : idx) k = static_cast<int>(rng() % v);
        const NodeId e = g.graph.EmbeddingGather(
            leaf({static_cast<std::size_t>(v), s.cols}), idx);
        x = g.graph.Add(x, e);
        use(OpKind::kEmbeddingGather);
        use(OpKind::kAdd);
        break;
      }
      case 5:
        x = g.graph.Gelu(x);
        use(OpKind::kGelu);
        break;
      case 6:
        x = g.graph.LayerNorm(x);
        use(OpKind::kLayerNorm);
        break;
      case 7:
        x = g.graph.Softmax(x);
        use(OpKind::kSoftmax);
        break;
      case 8:
        x = g.graph.Log(g.graph.Softmax(x));
        use(OpKind::kSoftmax);
        use(OpKind::kLog);
        break;
      case 9:
        x = g.graph.Negate(x);
        use(OpKind::kNegate);
        break;
      case 10:
        x = g.graph.Scale(x, 0.5 + (rng() % 100) / 50.0);
        use(OpKind::kScale);
        break;
      default: {
        // Multiply by a fresh leaf so later reductions see a non-trivial
        // gradient even right after a Softmax.
        x = g.graph.Mul(x, leaf(s));
        use(OpKind::kMul);
        break;
      }
    }
  }
  // Row softmax and layer norm make plain sums constant; a random weighting
  // keeps the root sensitive to every input.
  x = g.graph.Mul(x, leaf(g.graph.shape(x)));
  use(OpKind::kMul);
  const Shape s = g.graph.shape(x);
  const int tail = rng() % 4;
  if (tail >= 2) {
    const NodeId t = g.graph.Input(RandomRows(s, rng));
    g.leaves.push_back(t);
    x = g.graph.CrossEntropy(x, t);
    use(OpKind::kCrossEntropy);
  }
  if (tail % 2 == 0) {
    g.root = g.graph.Sum(x);
    use(OpKind::kSum);
  } else {
    g.root = g.graph.Mean(x);
    use(OpKind::kMean);
  }
  return g;
}

// Pinned relative-error definition: |a - b| / max(|a|, |b|, kGradFloor).
inline constexpr double kGradFloor = 1e-6;
// Five-point stencil: truncation O(h^4), roundoff about eps * |f| / h, both
// far below kGradFloor * 1e-4 at this step.
inline constexpr double kFdStep = 1e-4;

inline double RelativeError(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), kGradFloor});
}

// Max relative error between backward and finite differences over every
// element of every leaf.
inline double MaxGradientError(RandomGraph& g) {
  g.graph.Forward();
  g.graph.Backward(g.root);
  double worst = 0.0;
  for (NodeId leaf : g.leaves) {
    const Tensor analytic = g.graph.grad(leaf);
    Tensor v = g.graph.value(leaf);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double x0 = v[i];
      auto at = [&](double dx) {
        v[i] = x0 + dx;
        g.graph.SetInput(leaf, v);
        g.graph.Forward();
        return g.graph.value(g.root)[0];
      };
      const double h = kFdStep;
      const double fd = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) /
                        (12 * h);
      v[i] = x0;
      g.graph.SetInput(leaf, v);
      worst = std::max(worst, RelativeError(analytic[i], fd));
    }
  }
  g.graph.Forward();
  return worst;
}

}  // namespace unlearnlab::testing

#endif  // UNLEARNLAB_TESTS_SUPPORT_GRADCHECK_H_
