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

#include "unlearnlab/lm/objective.h"

#include <cmath>

#include "unlearnlab/error.h"

namespace unlearnlab::lm {

using autodiff::NodeId;

SequenceSpan FullSpan(std::span<const int> tokens) {
  if (tokens.size() < 2) {
    throw InvalidArgument("sequence needs at least two tokens");
  }
  return {tokens, 0, tokens.size() - 1};
}

Tensor OneHotTargets(const SequenceSpan& span, int vocab_size) {
  Tensor t({span.size(), static_cast<std::size_t>(vocab_size)}, 0.0);
  for (std::size_t r = 0; r < span.size(); ++r) {
    const int tok = span.tokens[span.begin + r + 1];
    if (tok < 0 || tok >= vocab_size) {
      throw InvalidArgument("token id " + std::to_string(tok) +
                            " outside vocabulary");
    }
    t(r, static_cast<std::size_t>(tok)) = 1.0;
  }
  return t;
}

Objective::Objective(const ModelParams& model)
    : model_(model), params_(BindParams(graph_, model)) {}

void Objective::AddTerm(const SequenceSpan& span, const Tensor& targets,
                        double weight) {
  if (span.begin >= span.end || span.end >= span.tokens.size()) {
    throw InvalidArgument("invalid sequence span [" +
                          std::to_string(span.begin) + ", " +
                          std::to_string(span.end) + ") over " +
                          std::to_string(span.tokens.size()) + " tokens");
  }
  const auto v = static_cast<std::size_t>(model_.vocab_size);
  if (targets.rows() != span.size() || targets.cols() != v) {
    throw InvalidArgument("target matrix " + targets.shape().ToString() +
                          " does not match span rows " +
                          std::to_string(span.size()));
  }
  CheckTokens(model_, span.tokens.first(span.end + 1));
  const NodeId logits =
      BuildLogits(graph_, model_, params_, span.tokens.first(span.end));
  // Rows before `begin` get an all-zero target and so contribute nothing.
  Tensor padded({span.end, v}, 0.0);
  for (std::size_t r = 0; r < span.size(); ++r)
    for (std::size_t c = 0; c < v; ++c)
      padded(span.begin + r, c) = targets(r, c);
  const NodeId target = graph_.Input(std::move(padded));
  const NodeId ce = graph_.Sum(graph_.CrossEntropy(logits, target));
  terms_.push_back(graph_.Scale(ce, weight));
}

namespace {

NodeId Total(autodiff::Graph& g, const std::vector<NodeId>& terms) {
  if (terms.empty()) throw InvalidArgument("objective has no terms");
  NodeId acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = g.Add(acc, terms[i]);
  return acc;
}

}  // namespace

double Objective::Value() {
  const NodeId total = Total(graph_, terms_);
  graph_.Forward();
  return graph_.value(total)[0];
}

Objective::Result Objective::ValueAndGradient() {
  const NodeId total = Total(graph_, terms_);
  graph_.Forward();
  graph_.Backward(total);
  Result r;
  r.value = graph_.value(total)[0];
  r.gradient.reserve(params_.ids.size());
  for (NodeId id : params_.ids) r.gradient.push_back(graph_.grad(id));
  return r;
}

Gradient ZeroGradient(const ModelParams& model) {
  Gradient g;
  g.reserve(model.params.size());
  for (const auto& p : model.params) g.emplace_back(p.value.shape(), 0.0);
  return g;
}

double GradientNorm(const Gradient& g) {
  double sq = 0.0;
  for (const auto& t : g)
    for (double v : t.data()) sq += v * v;
  return std::sqrt(sq);
}

double ClipGradient(Gradient& g, double max_norm) {
  const double norm = GradientNorm(g);
  if (std::isfinite(norm) && norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (auto& t : g)
      for (double& v : t.data()) v *= s;
  }
  return norm;
}

void AddScaled(Gradient& dst, const Gradient& src, double scale) {
  if (dst.size() != src.size()) {
    throw InvalidArgument("gradient arity mismatch");
  }
  for (std::size_t i = 0; i < dst.size(); ++i) {
    auto& d = dst[i].data();
    const auto& s = src[i].data();
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += scale * s[j];
  }
}

bool AllFinite(const Gradient& g) {
  for (const auto& t : g)
    for (double v : t.data())
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace unlearnlab::lm
