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

#include "unlearnlab/unlearn/constraint.h"

#include <cmath>

#include "unlearnlab/error.h"

namespace unlearnlab::unlearn {

ConstraintResult RunConstraintUnlearning(
    const lm::ModelParams& vanilla, std::span<const eval::ForbiddenPair> pairs,
    const UnlearnData& data, const UnlearnRun& run, double xi) {
  run.Validate();
  if (pairs.empty()) throw InvalidArgument("forbidden set is empty");
  if (!(xi > 0.0 && xi < 1.0)) throw InvalidArgument("xi must lie in (0, 1)");

  std::vector<TokenSequence> seqs;
  for (const auto& p : pairs) {
    if (p.prefix.empty()) throw InvalidArgument("forbidden prefix is empty");
    TokenSequence s = p.prefix;
    s.push_back(p.token);
    seqs.push_back(std::move(s));
  }
  Batch forget;
  for (const auto& s : seqs) forget.push_back({s, s.size() - 2, s.size() - 1});

  ConstraintResult result{.model = vanilla, .trace = {}};
  result.model.role = lm::ModelRole::kUnlearned;
  ConstraintTrace& trace = result.trace;
  trace.initial_violation = eval::Type2Violation(vanilla, pairs);
  trace.satisfied = trace.initial_violation <= xi;
  if (trace.satisfied) return result;

  const std::vector<TokenSequence> retain_data = RetainBatchData(data, run);
  const Batch retain = WholeSequences(retain_data);
  lm::Optimizer optimizer(run.optimizer, result.model);
  for (int k = 0; k < run.steps; ++k) {
    const StepStats st =
        UnifiedStep(result.model, forget, retain, run.method,
                    run.learning_rate, optimizer, run.max_grad_norm, &vanilla);
    const double v = eval::Type2Violation(result.model, pairs);
    trace.violation.push_back(v);
    trace.steps.push_back(
        {.step = k + 1,
         .forget_ppl = 0.0,
         .retain_ppl = std::exp(lm::MeanTokenNll(result.model,
                                                 data.retain_sample)),
         .grad_norm = st.grad_norm,
         .clipped = st.clipped});
    if (v <= xi) {
      trace.satisfied = true;
      break;
    }
  }
  return result;
}

}  // namespace unlearnlab::unlearn
