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

#ifndef UNLEARNLAB_UNLEARN_CONSTRAINT_H_
#define UNLEARNLAB_UNLEARN_CONSTRAINT_H_

#include <span>
#include <vector>

#include "unlearnlab/eval/metrics.h"
#include "unlearnlab/unlearn/run.h"

namespace unlearnlab::unlearn {

struct ConstraintTrace {
  double initial_violation = 0.0;
  std::vector<double> violation;  // after each step
  std::vector<StepRecord> steps;  // forget_ppl is unused (0)
  bool satisfied = false;
};

struct ConstraintResult {
  lm::ModelParams model;
  ConstraintTrace trace;
};

// Unlearning aimed at a type-II constraint: the forget batch holds exactly
// the forbidden positions (each prefix followed by its token), and the run
// stops once the sup-probability violation is at most `xi` or after
// run.steps updates. The run's stop rule and batch count are ignored.
ConstraintResult RunConstraintUnlearning(
    const lm::ModelParams& vanilla, std::span<const eval::ForbiddenPair> pairs,
    const UnlearnData& data, const UnlearnRun& run, double xi);

}  // namespace unlearnlab::unlearn

#endif  // UNLEARNLAB_UNLEARN_CONSTRAINT_H_
