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

#ifndef UNLEARNLAB_HARNESS_EXPERIMENT_H_
#define UNLEARNLAB_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unlearnlab/eval/report.h"
#include "unlearnlab/harness/config.h"
#include "unlearnlab/lm/vocabulary.h"
#include "unlearnlab/unlearn/constraint.h"

namespace unlearnlab::harness {

using lm::TokenSequence;

// Everything one experiment seed needs before unlearning starts.
struct PreparedSeed {
  std::uint64_t seed = 0;
  corpus::CorpusSpec corpus_spec;
  corpus::CorpusSplits splits;
  lm::Vocabulary vocab;
  unlearn::UnlearnData data;
  std::vector<TokenSequence> train;        // D
  std::vector<TokenSequence> approximate;  // A
  lm::ModelParams init;  // shared starting point of vanilla and retrained
  std::optional<lm::ModelParams> vanilla;
  std::optional<lm::ModelParams> retrained;
  eval::SplitMetrics target;  // vanilla on A; set with the vanilla model
  std::vector<eval::ForbiddenPair> forbidden;  // type-II pairs, when enabled

  const lm::ModelParams& vanilla_model() const;
};

corpus::CorpusSpec BuildCorpusSpec(const ExperimentConfig& cfg,
                                   std::uint64_t seed);

// Corpus, splits, tokens and the initial weights; no training.
PreparedSeed PrepareData(const ExperimentConfig& cfg, std::uint64_t seed);
// Trains the vanilla model on D and fills target and forbidden pairs.
void TrainVanilla(const ExperimentConfig& cfg, PreparedSeed& p);
// Installs an existing vanilla model (e.g. a loaded checkpoint) and derives
// the same target and forbidden pairs TrainVanilla would.
void SetVanilla(const ExperimentConfig& cfg, PreparedSeed& p,
                lm::ModelParams vanilla);
void TrainRetrained(const ExperimentConfig& cfg, PreparedSeed& p);
PreparedSeed PrepareSeed(const ExperimentConfig& cfg, std::uint64_t seed,
                         bool with_retrained = true);

// Forbidden (prefix, token) pairs taken from positions of U whose vanilla
// probability exceeds xi, rarest generator transitions first (ties by
// sequence, then position). Returns fewer than `count` pairs only when U
// has fewer such positions.
std::vector<eval::ForbiddenPair> SelectForbiddenPairs(
    const lm::ModelParams& vanilla, std::span<const TokenSequence> forget,
    const corpus::MarkovChain& chain, int count, double xi);

// Reach-target runs aim at the approximate-retraining ppl.
unlearn::UnlearnRun RunFor(const ExperimentConfig& cfg, const PreparedSeed& p,
                           const unlearn::MethodSpec& method);
unlearn::UnlearnResult RunMethod(const ExperimentConfig& cfg,
                                 const PreparedSeed& p,
                                 const unlearn::MethodSpec& method);
unlearn::ConstraintResult RunType2(const ExperimentConfig& cfg,
                                   const PreparedSeed& p);

// Splits forget, retain, retain_sample, general and approximate; MIA on U
// against A; type-I against the retrained model when present; type-II when
// forbidden pairs exist.
eval::MetricsReport EvaluateModel(const ExperimentConfig& cfg,
                                  const PreparedSeed& p,
                                  const lm::ModelParams& model,
                                  const std::string& method);

std::string TraceCsv(const unlearn::UnlearnTrace& trace);

struct ExperimentOutcome {
  std::vector<eval::MetricsReport> reports;
  nlohmann::json manifest;
  bool ok() const;
};

// Runs every seed: vanilla, retrained, one unlearned model per method and
// the type-II run, writing
//   <out>/manifest.json, config.snapshot.json, summary.csv
//   <out>/seed-<s>/{corpus/, checkpoints/, metrics.json, mia-*.csv,
//                   trace-*.csv}
// A failing stage is recorded in the manifest and the rest still run.
ExperimentOutcome RunExperiment(const ExperimentConfig& cfg);

// Hash of the canonical JSON of every report, in run order.
std::string ReportsHash(const std::vector<eval::MetricsReport>& reports);

}  // namespace unlearnlab::harness

#endif  // UNLEARNLAB_HARNESS_EXPERIMENT_H_
