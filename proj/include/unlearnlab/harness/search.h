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

#ifndef UNLEARNLAB_HARNESS_SEARCH_H_
#define UNLEARNLAB_HARNESS_SEARCH_H_

#include <functional>
#include <vector>

#include "unlearnlab/harness/experiment.h"

namespace unlearnlab::harness {

// Forget-set perplexity reached with a given learning rate.
using LrResponse = std::function<double(double lr)>;

struct LrPoint {
  double lr = 0.0;
  double ppl = 0.0;
};

struct LrSearchResult {
  double lr = 0.0;
  double ppl = 0.0;
  std::vector<LrPoint> coarse;
  std::vector<LrPoint> fine;
};

// Number of fine-grid points placed strictly inside the bracketing interval.
inline constexpr int kFineGridPoints = 10;

// Two-phase search: evaluate the strictly increasing coarse grid, take the
// first adjacent pair whose ppls bracket `target`, then evaluate
// kFineGridPoints log-spaced lrs strictly inside it and return the
// evaluated lr minimizing |ppl - target| (earliest on ties).
//
// A single-point grid is accepted when its ppl is within
// `tolerance * target` of the target. Otherwise, and whenever no pair
// brackets the target, throws InvalidArgument listing the endpoint ppls.
LrSearchResult LrGuidelineSearch(const LrResponse& response,
                                 const std::vector<double>& coarse_grid,
                                 double target, double tolerance = 0.02);

// Steps are fixed per the guideline.
inline constexpr int kGuidelineSteps = 4;

// The response of `method` on a prepared seed: a fixed 4-step run over U
// in 4 batches.
LrResponse MethodResponse(const ExperimentConfig& cfg, const PreparedSeed& p,
                          const unlearn::MethodSpec& method);

// {1e-3, ..., 1e-1}, `points` log-spaced values.
std::vector<double> DefaultLrGrid(int points = 5);

}  // namespace unlearnlab::harness

#endif  // UNLEARNLAB_HARNESS_SEARCH_H_
