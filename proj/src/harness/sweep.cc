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

#include "unlearnlab/harness/sweep.h"

#include <cmath>
#include <cstdio>

#include "unlearnlab/error.h"

namespace unlearnlab::harness {

std::string_view SweepAxisName(SweepAxis a) {
  return a == SweepAxis::kLearningRate ? "lr" : "steps";
}

SweepAxis ParseSweepAxis(std::string_view s) {
  if (s == "lr") return SweepAxis::kLearningRate;
  if (s == "steps") return SweepAxis::kSteps;
  throw InvalidArgument("unknown sweep axis '" + std::string(s) + "'");
}

void SweepSpec::Validate() const {
  if (grid.empty()) throw InvalidArgument("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw InvalidArgument("sweep grid must be positive, strictly increasing");
    }
  }
  const auto is_int = [](double x) { return x == std::floor(x) && x >= 1; };
  if (axis == SweepAxis::kSteps) {
    for (double g : grid)
      if (!is_int(g)) throw InvalidArgument("step counts must be integers");
    if (!(fixed > 0.0)) throw InvalidArgument("fixed lr must be positive");
  } else if (!is_int(fixed)) {
    throw InvalidArgument("fixed step count must be a positive integer");
  }
  if (methods.empty()) throw InvalidArgument("sweep has no methods");
  for (const auto& m : methods) unlearn::MethodByName(m);
}

std::vector<SweepRow> Sweep(const ExperimentConfig& cfg, const SweepSpec& spec,
                            const std::vector<PreparedSeed>& seeds) {
  spec.Validate();
  std::vector<SweepRow> rows;
  for (const auto& name : spec.methods) {
    const unlearn::MethodSpec method = unlearn::MethodByName(name);
    for (double point : spec.grid) {
      for (const auto& p : seeds) {
        unlearn::UnlearnRun run = MakeRun(cfg.unlearn, method, p.seed);
        const bool lr_axis = spec.axis == SweepAxis::kLearningRate;
        run.learning_rate = lr_axis ? point : spec.fixed;
        run.steps = static_cast<int>(lr_axis ? spec.fixed : point);
        run.batches = run.steps;
        run.stop.kind = unlearn::StopKind::kFixedSteps;
        const unlearn::UnlearnResult r =
            unlearn::RunUnlearning(p.vanilla_model(), p.data, run);
        rows.push_back(
            {.method = name,
             .point = point,
             .seed = p.seed,
             .forget_ppl = eval::Perplexity(r.model, p.data.forget),
             .retain_ppl = eval::Perplexity(r.model, p.data.retain),
             .general_ppl = eval::Perplexity(r.model, p.data.general),
             .best_auc = eval::MiaAucSweep(r.model, p.data.forget,
                                           p.approximate, cfg.mia)
                             .best_auc,
             .instability = r.trace.instability_count(),
             .steps_run = static_cast<int>(r.trace.steps.size())});
      }
    }
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out =
      "method,point,seed,forget_ppl,retain_ppl,general_ppl,best_auc,"
      "instability,steps\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%llu,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
                  r.method.c_str(), r.point,
                  static_cast<unsigned long long>(r.seed), r.forget_ppl,
                  r.retain_ppl, r.general_ppl, r.best_auc, r.instability,
                  r.steps_run);
    out += buf;
  }
  return out;
}

}  // namespace unlearnlab::harness
