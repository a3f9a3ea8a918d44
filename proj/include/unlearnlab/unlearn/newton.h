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

#ifndef UNLEARNLAB_UNLEARN_NEWTON_H_
#define UNLEARNLAB_UNLEARN_NEWTON_H_

#include <optional>
#include <span>

#include "unlearnlab/lm/bigram.h"

namespace unlearnlab::unlearn {

struct NewtonResult {
  lm::ModelParams model;
  double step_norm = 0.0;  // Frobenius norm of the logit update
  double damping = 0.0;    // value actually used
};

// Gradient max-abs entry of the bigram's total NLL on D above which the
// vanilla model does not count as D-stationary.
inline constexpr double kStationarityTolerance = 1e-6;

// One damped Newton step on the bigram's total NLL over D \ U, using the
// analytic per-context Hessian n_a (diag p - p p^T) + damping I. The
// all-ones direction of each row is a gauge freedom and is held fixed.
// Default damping is 1e-6 times the mean Hessian diagonal.
//
// Throws InvalidArgument if the model is not a bigram, U is not contained in
// D as bigram counts, or the model is not D-stationary; NumericalError
// naming the context token if a block stays singular.
NewtonResult NewtonUnlearnBigram(const lm::ModelParams& vanilla,
                                 std::span<const lm::TokenSequence> train,
                                 std::span<const lm::TokenSequence> forget,
                                 std::optional<double> damping = std::nullopt);

}  // namespace unlearnlab::unlearn

#endif  // UNLEARNLAB_UNLEARN_NEWTON_H_
