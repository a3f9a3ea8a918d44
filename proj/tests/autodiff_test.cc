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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/gradcheck.h"
#include "unlearnlab/autodiff/graph.h"

namespace unlearnlab::autodiff {
namespace {

using testing::BuildRandomGraph;
using testing::MaxGradientError;
using testing::RandomTensor;

TEST(GraphTest, RandomGraphsMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::set<OpKind> covered;
  for (int i = 0; i < 60; ++i) {
    testing::RandomGraph g = BuildRandomGraph(rng);
    covered.insert(g.ops.begin(), g.ops.end());
    EXPECT_LT(MaxGradientError(g), 1e-4) << "graph " << i;
  }
  for (int k = 0; k <= static_cast<int>(OpKind::kCrossEntropy); ++k) {
    EXPECT_TRUE(covered.count(static_cast<OpKind>(k)))
        << OpKindName(static_cast<OpKind>(k));
  }
}

TEST(GraphTest, GradientIsLinearInTheRoot) {
  // d(2f + 3h) = 2 df + 3 dh for two roots sharing a leaf.
  std::mt19937_64 rng(3);
  Graph g;
  const NodeId x = g.Input(RandomTensor({3, 4}, rng));
  const NodeId w = g.Input(RandomTensor({4, 2}, rng));
  const NodeId f = g.Sum(g.Gelu(g.MatMul(x, w)));
  const NodeId h = g.Mean(g.Softmax(g.LayerNorm(x)));
  const NodeId both = g.Add(g.Scale(f, 2.0), g.Scale(h, 3.0));
  g.Forward();
  g.Backward(f);
  const Tensor gf = g.grad(x);
  g.Backward(h);
  const Tensor gh = g.grad(x);
  g.Backward(both);
  for (std::size_t i = 0; i < gf.size(); ++i) {
    EXPECT_NEAR(g.grad(x)[i], 2 * gf[i] + 3 * gh[i], 1e-12);
  }
}

TEST(GraphTest, NonAncestorsGetZeroGradient) {
  std::mt19937_64 rng(5);
  Graph g;
  const NodeId a = g.Input(RandomTensor({2, 3}, rng));
  const NodeId b = g.Input(RandomTensor({2, 3}, rng));
  const NodeId side = g.Sum(g.Mul(b, b));
  const NodeId root = g.Sum(g.Negate(a));
  g.Forward();
  g.Backward(side);
  g.Backward(root);
  for (double v : g.grad(b).data()) EXPECT_EQ(v, 0.0);
  for (double v : g.grad(side).data()) EXPECT_EQ(v, 0.0);
  for (double v : g.grad(a).data()) EXPECT_EQ(v, -1.0);
}

TEST(GraphTest, ForwardIsRepeatable) {
  std::mt19937_64 rng(11);
  testing::RandomGraph g = BuildRandomGraph(rng);
  g.graph.Forward();
  const double first = g.graph.value(g.root)[0];
  g.graph.Forward();
  EXPECT_EQ(g.graph.value(g.root)[0], first);
}

TEST(GraphTest, CrossEntropyMatchesHandValue) {
  // logits (0, log 2, log 3)/1 -> p = (1, 2, 3) / 6; one-hot on index 2.
  Graph g;
  const NodeId z =
      g.Input(Tensor({1, 3}, {0.0, std::log(2.0), std::log(3.0)}));
  const NodeId t = g.Input(Tensor({1, 3}, {0.0, 0.0, 1.0}));
  const NodeId ce = g.CrossEntropy(z, t);
  g.Forward();
  EXPECT_NEAR(g.value(ce)[0], std::log(2.0), 1e-12);
  g.Backward(ce);
  const double p[] = {1.0 / 6, 2.0 / 6, 3.0 / 6 - 1.0};
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(g.grad(z)[c], p[c], 1e-12);
}

TEST(GraphTest, ShapeErrorsNameTheNode) {
  Graph g;
  const NodeId a = g.Input(Shape{2, 3});
  const NodeId b = g.Input(Shape{2, 3});
  try {
    g.MatMul(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_EQ(e.op(), OpKind::kMatMul);
    EXPECT_EQ(e.node().index, 2u);
  }
  EXPECT_THROW(g.Add(a, g.Input(Shape{3, 3})), ShapeError);
  EXPECT_THROW(g.EmbeddingGather(a, {}), ShapeError);
}

TEST(GraphTest, UnboundInputFailsForward) {
  Graph g;
  const NodeId a = g.Input(Shape{1, 2});
  g.Sum(a);
  EXPECT_THROW(g.Forward(), Error);
}

TEST(GraphTest, BackwardRequiresForward) {
  Graph g;
  const NodeId a = g.Input(Tensor({1, 2}, {1.0, 2.0}));
  const NodeId s = g.Sum(a);
  EXPECT_THROW(g.Backward(s), Error);
}

}  // namespace
}  // namespace unlearnlab::autodiff
