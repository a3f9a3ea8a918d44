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

#include "unlearnlab/unlearn/run.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "unlearnlab/error.h"

namespace unlearnlab::unlearn {

namespace {

std::vector<TokenSequence> EncodeAll(const std::vector<std::string>& seqs,
                                     const lm::Vocabulary& vocab) {
  std::vector<TokenSequence> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(vocab.Encode(s));
  return out;
}

double Ppl(const lm::ModelParams& m, std::span<const TokenSequence> data) {
  return std::exp(lm::MeanTokenNll(m, data));
}

}  // namespace

UnlearnData EncodeSplits(const corpus::CorpusSplits& s,
                         const lm::Vocabulary& vocab) {
  return {.forget = EncodeAll(s.Select(s.forget), vocab),
          .retain = EncodeAll(s.Select(s.retain), vocab),
          .retain_sample = EncodeAll(s.Select(s.retain_sample), vocab),
          .general = EncodeAll(s.Select(s.general), vocab)};
}

int UnlearnRun::batch_count() const {
  if (batches > 0) return batches;
  return stop.kind == StopKind::kFixedSteps ? std::max(steps, 1) : 1;
}

void UnlearnRun::Validate() const {
  method.Validate();
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("unlearning learning rate must be positive");
  }
  if (steps < 0) throw InvalidArgument("step budget must be non-negative");
  if (batches < 0) throw InvalidArgument("batch count must be non-negative");
  if (stop.kind == StopKind::kReachTarget &&
      (!(stop.target_ppl >= 1.0) || !(stop.tolerance >= 0.0) ||
       stop.tolerance >= 1.0)) {
    throw InvalidArgument(
        "reach-target stop rule needs target ppl >= 1 and tolerance in [0, 1)");
  }
  if (max_grad_norm && !(*max_grad_norm > 0.0)) {
    throw InvalidArgument("max grad norm must be positive");
  }
}

int UnlearnTrace::instability_count() const {
  return static_cast<int>(std::count_if(
      steps.begin(), steps.end(), [](const StepRecord& r) { return r.clipped; }));
}

std::vector<TokenSequence> RetainBatchData(const UnlearnData& data,
                                           const UnlearnRun& run) {
  if (!run.method.has_retain()) return {};
  if (run.method.retain_data == RetainData::kInDistribution) {
    return data.retain_sample;
  }
  // |R| sequences of G, without replacement, fixed for the whole run.
  const std::size_t n = std::min(data.retain_sample.size(), data.general.size());
  std::vector<std::size_t> idx(data.general.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::mt19937_64 rng(run.seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<TokenSequence> out;
  for (std::size_t i : idx) out.push_back(data.general[i]);
  return out;
}

UnlearnResult RunUnlearning(const lm::ModelParams& vanilla,
                            const UnlearnData& data, const UnlearnRun& run) {
  run.Validate();
  if (data.forget.empty()) throw InvalidArgument("forget set is empty");
  if (data.retain_sample.empty()) {
    throw InvalidArgument("retain sample is empty");
  }
  UnlearnResult result{.model = vanilla, .trace = {}};
  result.model.role = lm::ModelRole::kUnlearned;
  UnlearnTrace& trace = result.trace;
  trace.initial_forget_ppl = Ppl(vanilla, data.forget);
  trace.initial_retain_ppl = Ppl(vanilla, data.retain_sample);

  const bool reach = run.stop.kind == StopKind::kReachTarget;
  const double threshold = run.stop.target_ppl * (1.0 - run.stop.tolerance);
  if (reach && trace.initial_forget_ppl >= threshold) {
    trace.target_reached = true;
    return result;
  }
  if (run.steps == 0) return result;

  const std::vector<Batch> batches =
      MakeBatches(data.forget, run.batch_count());
  const std::vector<TokenSequence> retain_data = RetainBatchData(data, run);
  const Batch retain = WholeSequences(retain_data);
  lm::Optimizer optimizer(run.optimizer, result.model);
  for (int k = 0; k < run.steps; ++k) {
    const Batch& forget = batches[static_cast<std::size_t>(k) % batches.size()];
    const StepStats st =
        UnifiedStep(result.model, forget, retain, run.method,
                    run.learning_rate, optimizer, run.max_grad_norm, &vanilla);
    StepRecord rec{.step = k + 1,
                   .forget_ppl = Ppl(result.model, data.forget),
                   .retain_ppl = Ppl(result.model, data.retain_sample),
                   .grad_norm = st.grad_norm,
                   .clipped = st.clipped};
    trace.steps.push_back(rec);
    if (reach && rec.forget_ppl >= threshold) {
      trace.target_reached = true;
      break;
    }
  }
  return result;
}

lm::ModelParams RetrainOracle(const lm::ModelParams& fresh_init,
                              std::span<const TokenSequence> retain,
                              const lm::TrainConfig& config) {
  lm::ModelParams m = lm::Train(fresh_init, retain, config);
  m.role = lm::ModelRole::kRetrained;
  return m;
}

}  // namespace unlearnlab::unlearn
