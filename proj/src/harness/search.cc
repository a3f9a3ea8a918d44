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

#include "unlearnlab/harness/search.h"

#include <cmath>
#include <cstdio>

#include "unlearnlab/error.h"

namespace unlearnlab::harness {

namespace {

std::string Fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

LrSearchResult LrGuidelineSearch(const LrResponse& response,
                                 const std::vector<double>& grid,
                                 double target, double tolerance) {
  if (grid.empty()) throw InvalidArgument("learning-rate grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw InvalidArgument(
          "learning-rate grid must be positive and strictly increasing");
    }
  }
  LrSearchResult r;
  for (double lr : grid) r.coarse.push_back({lr, response(lr)});

  if (grid.size() == 1) {
    const LrPoint& only = r.coarse.front();
    if (std::abs(only.ppl - target) <= tolerance * target) {
      r.lr = only.lr;
      r.ppl = only.ppl;
      return r;
    }
  }
  std::size_t lo = r.coarse.size();
  for (std::size_t i = 0; i + 1 < r.coarse.size(); ++i) {
    const double a = r.coarse[i].ppl, b = r.coarse[i + 1].ppl;
    if ((a <= target && target <= b) || (b <= target && target <= a)) {
      lo = i;
      break;
    }
  }
  if (lo == r.coarse.size()) {
    throw InvalidArgument(
        "target ppl " + Fmt(target) + " is not bracketed by the grid: ppl " +
        Fmt(r.coarse.front().ppl) + " at lr " + Fmt(r.coarse.front().lr) +
        ", ppl " + Fmt(r.coarse.back().ppl) + " at lr " +
        Fmt(r.coarse.back().lr));
  }
  const double a = r.coarse[lo].lr, b = r.coarse[lo + 1].lr;
  const double ratio = std::log(b / a);
  for (int j = 1; j <= kFineGridPoints; ++j) {
    const double lr = a * std::exp(ratio * j / (kFineGridPoints + 1));
    r.fine.push_back({lr, response(lr)});
  }
  const LrPoint* best = &r.coarse[lo];
  auto consider = [&](const LrPoint& p) {
    if (std::abs(p.ppl - target) < std::abs(best->ppl - target)) best = &p;
  };
  for (const auto& p : r.fine) consider(p);
  consider(r.coarse[lo + 1]);
  r.lr = best->lr;
  r.ppl = best->ppl;
  return r;
}

LrResponse MethodResponse(const ExperimentConfig& cfg, const PreparedSeed& p,
                          const unlearn::MethodSpec& method) {
  return [&cfg, &p, method](double lr) {
    unlearn::UnlearnRun run = MakeRun(cfg.unlearn, method, p.seed);
    run.learning_rate = lr;
    run.steps = kGuidelineSteps;
    run.batches = kGuidelineSteps;
    run.stop.kind = unlearn::StopKind::kFixedSteps;
    const unlearn::UnlearnResult r =
        unlearn::RunUnlearning(p.vanilla_model(), p.data, run);
    return std::exp(lm::MeanTokenNll(r.model, p.data.forget));
  };
}

std::vector<double> DefaultLrGrid(int points) {
  if (points < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(std::pow(10.0, -3.0 + 2.0 * i / (points - 1)));
  return g;
}

}  // namespace unlearnlab::harness
