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

#ifndef UNLEARNLAB_UNLEARN_RUN_H_
#define UNLEARNLAB_UNLEARN_RUN_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "unlearnlab/corpus/splits.h"
#include "unlearnlab/lm/train.h"
#include "unlearnlab/lm/vocabulary.h"
#include "unlearnlab/unlearn/step.h"

namespace unlearnlab::unlearn {

// Token-level view of the splits an unlearning run touches.
struct UnlearnData {
  std::vector<TokenSequence> forget;         // U
  std::vector<TokenSequence> retain;         // D \ U
  std::vector<TokenSequence> retain_sample;  // R
  std::vector<TokenSequence> general;        // G
};

UnlearnData EncodeSplits(const corpus::CorpusSplits& splits,
                         const lm::Vocabulary& vocab);

enum class StopKind { kFixedSteps, kReachTarget };

struct StopRule {
  StopKind kind = StopKind::kFixedSteps;
  double target_ppl = 0.0;
  // Target counts as reached at forget ppl >= target * (1 - tolerance).
  double tolerance = 0.02;
};

struct UnlearnRun {
  MethodSpec method;
  double learning_rate = 1e-2;
  // Fixed steps: exactly this many updates. Reach-target: the step budget.
  int steps = 4;
  // Number of contiguous batches U is cut into; step k uses batch k mod n.
  // 0 means `steps` for fixed-step runs and 1 for reach-target runs.
  int batches = 0;
  StopRule stop;
  lm::OptimizerConfig optimizer;
  std::optional<double> max_grad_norm = 1.0;
  // Picks the general retain sample (|R| sequences of G).
  std::uint64_t seed = 0;

  int batch_count() const;
  void Validate() const;
};

struct StepRecord {
  int step = 0;              // 1-based
  double forget_ppl = 0.0;   // on U, after the update
  double retain_ppl = 0.0;   // on R, after the update
  double grad_norm = 0.0;    // before clipping
  bool clipped = false;
};

struct UnlearnTrace {
  double initial_forget_ppl = 0.0;
  double initial_retain_ppl = 0.0;
  std::vector<StepRecord> steps;
  bool target_reached = false;  // always false for fixed-step runs

  // Steps whose gradient was clipped.
  int instability_count() const;
};

struct UnlearnResult {
  lm::ModelParams model;
  UnlearnTrace trace;
};

// Applies `run` to a copy of `vanilla`; `vanilla` itself is never touched.
// Reach-target runs check the target before every step, so a target already
// met takes no step; an unmet target leaves target_reached false and returns
// the model after the full budget.
UnlearnResult RunUnlearning(const lm::ModelParams& vanilla,
                            const UnlearnData& data, const UnlearnRun& run);

// Retain sequences the run uses for its retain term (empty when none).
std::vector<TokenSequence> RetainBatchData(const UnlearnData& data,
                                           const UnlearnRun& run);

// Trains `fresh_init` on D \ U only. The result has role kRetrained.
lm::ModelParams RetrainOracle(const lm::ModelParams& fresh_init,
                              std::span<const TokenSequence> retain,
                              const lm::TrainConfig& config);

}  // namespace unlearnlab::unlearn

#endif  // UNLEARNLAB_UNLEARN_RUN_H_
