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

#ifndef UNLEARNLAB_LM_OBJECTIVE_H_
#define UNLEARNLAB_LM_OBJECTIVE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "unlearnlab/autodiff/graph.h"
#include "unlearnlab/lm/model.h"

namespace unlearnlab::lm {

// Predicted rows [begin, end) of a token sequence; row r scores
// tokens[r + 1] given tokens[0..r].
struct SequenceSpan {
  std::span<const int> tokens;
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
};

// Every predicted row of `tokens`.
SequenceSpan FullSpan(std::span<const int> tokens);

// One-hot rows at the true next tokens of `span`.
Tensor OneHotTargets(const SequenceSpan& span, int vocab_size);

using Gradient = std::vector<Tensor>;

// A weighted sum of cross-entropy terms against arbitrary per-row target
// distributions, differentiated with respect to every model parameter.
class Objective {
 public:
  explicit Objective(const ModelParams& model);

  // Adds weight * sum over span rows of CE(logits_row, targets_row).
  // `targets` is [span.size() x V].
  void AddTerm(const SequenceSpan& span, const Tensor& targets, double weight);

  bool empty() const { return terms_.empty(); }

  // Forward only.
  double Value();

  struct Result {
    double value = 0.0;
    Gradient gradient;  // ModelParams::params order
  };
  Result ValueAndGradient();

 private:
  const ModelParams& model_;
  autodiff::Graph graph_;
  ParamNodes params_;
  std::vector<autodiff::NodeId> terms_;
};

Gradient ZeroGradient(const ModelParams& model);
double GradientNorm(const Gradient& g);
// Rescales g to norm max_norm when larger; returns the pre-clip norm.
double ClipGradient(Gradient& g, double max_norm);
// dst += scale * src
void AddScaled(Gradient& dst, const Gradient& src, double scale);
bool AllFinite(const Gradient& g);

}  // namespace unlearnlab::lm

#endif  // UNLEARNLAB_LM_OBJECTIVE_H_
