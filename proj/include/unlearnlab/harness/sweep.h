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

#ifndef UNLEARNLAB_HARNESS_SWEEP_H_
#define UNLEARNLAB_HARNESS_SWEEP_H_

#include <string>
#include <vector>

#include "unlearnlab/harness/experiment.h"

namespace unlearnlab::harness {

enum class SweepAxis { kLearningRate, kSteps };

std::string_view SweepAxisName(SweepAxis a);
SweepAxis ParseSweepAxis(std::string_view s);

struct SweepSpec {
  SweepAxis axis = SweepAxis::kLearningRate;
  std::vector<double> grid;
  // The other axis: steps for an lr sweep, lr for a steps sweep.
  double fixed = 4;
  std::vector<std::string> methods;

  // Throws InvalidArgument unless the grid is non-empty, strictly increasing
  // and positive, step values are integers, and every method is known.
  void Validate() const;
};

struct SweepRow {
  std::string method;
  double point = 0.0;
  std::uint64_t seed = 0;
  double forget_ppl = 0.0;
  double retain_ppl = 0.0;
  double general_ppl = 0.0;
  double best_auc = 0.0;
  int instability = 0;  // clipped steps
  int steps_run = 0;
};

// One fixed-step run per (point, method, seed) with `steps` batches, i.e.
// one pass over U. Rows are ordered by method, point, seed.
std::vector<SweepRow> Sweep(const ExperimentConfig& cfg, const SweepSpec& spec,
                            const std::vector<PreparedSeed>& seeds);

std::string SweepCsv(const std::vector<SweepRow>& rows);

}  // namespace unlearnlab::harness

#endif  // UNLEARNLAB_HARNESS_SWEEP_H_
