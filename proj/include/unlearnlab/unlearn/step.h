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

#ifndef UNLEARNLAB_UNLEARN_STEP_H_
#define UNLEARNLAB_UNLEARN_STEP_H_

#include <optional>
#include <span>
#include <vector>

#include "unlearnlab/lm/objective.h"
#include "unlearnlab/lm/train.h"
#include "unlearnlab/unlearn/method.h"

namespace unlearnlab::unlearn {

using lm::TokenSequence;

// Predicted positions drawn from one or more sequences. The spans point into
// caller-owned token storage.
using Batch = std::vector<lm::SequenceSpan>;

Batch WholeSequences(std::span<const TokenSequence> seqs);

// Splits the predicted positions of `seqs`, in order, into `count`
// contiguous batches whose sizes differ by at most one position.
// Throws InvalidArgument when count < 1 or exceeds the number of positions.
std::vector<Batch> MakeBatches(std::span<const TokenSequence> seqs, int count);

std::size_t PositionCount(const Batch& batch);

// Per-row targets for the forget term: one row per predicted position.
// Adversarial rows are computed from `model` as it is now.
lm::Tensor ReferenceTargets(ReferenceKind kind, const lm::ModelParams& model,
                            const lm::SequenceSpan& span);

struct LossAndGradient {
  // Coefficients and sign applied. The KL term is a true KL: the teacher's
  // entropy, constant in the model, is subtracted.
  double value = 0.0;
  lm::Gradient gradient;
};

// Loss and gradient of the method's objective. Each term is a mean over its
// batch's positions. `vanilla` is required for the KL retain term.
// Throws InvalidArgument unless the forget batch is non-empty and the retain
// batch is non-empty exactly when the method has a retain term.
LossAndGradient UnlearningGradient(const lm::ModelParams& model,
                                   const Batch& forget, const Batch& retain,
                                   const MethodSpec& spec,
                                   const lm::ModelParams* vanilla = nullptr);

struct StepStats {
  double loss = 0.0;
  double grad_norm = 0.0;  // before clipping
  bool clipped = false;
};

// One optimizer step along UnlearningGradient. Throws NumericalError naming
// the step when the gradient or the updated parameters are non-finite.
StepStats UnifiedStep(lm::ModelParams& model, const Batch& forget,
                      const Batch& retain, const MethodSpec& spec, double lr,
                      lm::Optimizer& optimizer,
                      std::optional<double> max_grad_norm = std::nullopt,
                      const lm::ModelParams* vanilla = nullptr);

// Mean over retain positions of KL(P_vanilla || P_model).
double KlRetainTerm(const lm::ModelParams& model,
                    const lm::ModelParams& vanilla, const Batch& retain);

// sum_i p_i log(p_i / q_i), with q floored at the probability floor.
double KlDivergence(std::span<const double> p, std::span<const double> q);

}  // namespace unlearnlab::unlearn

#endif  // UNLEARNLAB_UNLEARN_STEP_H_
