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

#ifndef UNLEARNLAB_LM_TRAIN_H_
#define UNLEARNLAB_LM_TRAIN_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "unlearnlab/lm/model.h"
#include "unlearnlab/lm/objective.h"

namespace unlearnlab::lm {

enum class OptimizerKind { kSgd, kAdam };

std::string_view OptimizerName(OptimizerKind kind);
OptimizerKind ParseOptimizer(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Plain SGD or bias-corrected Adam. Moment buffers live here, so two
// optimizers built from the same config and model start from equal state.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& config, const ModelParams& model);

  // model -= lr * update(grad)
  void Step(ModelParams& model, const Gradient& grad, double lr);

  const OptimizerConfig& config() const { return config_; }
  long steps() const { return steps_; }

 private:
  OptimizerConfig config_;
  Gradient first_moment_;
  Gradient second_moment_;
  long steps_ = 0;
};

struct TrainConfig {
  double learning_rate = 3e-3;
  int batch_size = 8;
  int epochs = 30;
  OptimizerConfig optimizer;
  std::uint64_t seed = 0;
  std::optional<double> max_grad_norm;

  // Throws InvalidArgument unless learning_rate > 0, epochs >= 1 and
  // batch_size >= 1.
  void Validate() const;
};

struct TrainStats {
  std::vector<double> epoch_mean_nll;  // running mean over each epoch
  long steps = 0;
};

// Minimizes mean per-token NLL over `data` with shuffled mini-batches.
// Deterministic for a fixed seed. Throws NumericalError naming the step if
// the loss or gradient becomes non-finite.
ModelParams Train(const ModelParams& init, std::span<const TokenSequence> data,
                  const TrainConfig& config, TrainStats* stats = nullptr);

// One optimizer step on the mean NLL of `batch`. Returns the batch loss.
double TrainStep(ModelParams& model, std::span<const TokenSequence> batch,
                 Optimizer& optimizer, double lr,
                 std::optional<double> max_grad_norm = std::nullopt);

// Mean NLL of the whole dataset per predicted token.
double MeanTokenNll(const ModelParams& model,
                    std::span<const TokenSequence> data);

}  // namespace unlearnlab::lm

#endif  // UNLEARNLAB_LM_TRAIN_H_
