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

#include "unlearnlab/lm/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "unlearnlab/error.h"

namespace unlearnlab::lm {

std::string_view OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

OptimizerKind ParseOptimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  throw InvalidArgument("unknown optimizer '" + std::string(name) + "'");
}

Optimizer::Optimizer(const OptimizerConfig& config, const ModelParams& model)
    : config_(config) {
  if (config_.kind == OptimizerKind::kAdam) {
    first_moment_ = ZeroGradient(model);
    second_moment_ = ZeroGradient(model);
  }
}

void Optimizer::Step(ModelParams& model, const Gradient& grad, double lr) {
  if (grad.size() != model.params.size()) {
    throw InvalidArgument("gradient does not match model parameters");
  }
  ++steps_;
  if (config_.kind == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < grad.size(); ++i) {
      auto& w = model.params[i].value.data();
      const auto& g = grad[i].data();
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= lr * g[j];
    }
    return;
  }
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t i = 0; i < grad.size(); ++i) {
    auto& w = model.params[i].value.data();
    auto& m = first_moment_[i].data();
    auto& v = second_moment_[i].data();
    const auto& g = grad[i].data();
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      w[j] -= lr * m_hat / (std::sqrt(v_hat) + config_.eps);
    }
  }
}

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
  if (batch_size < 1) throw InvalidArgument("batch size must be at least 1");
  if (max_grad_norm && !(*max_grad_norm > 0.0)) {
    throw InvalidArgument("max grad norm must be positive");
  }
}

namespace {

std::size_t PredictedTokens(std::span<const TokenSequence> data) {
  std::size_t n = 0;
  for (const auto& s : data) n += s.size() - 1;
  return n;
}

void CheckData(std::span<const TokenSequence> data) {
  if (data.empty()) throw InvalidArgument("training data is empty");
  for (const auto& s : data) {
    if (s.size() < 2) {
      throw InvalidArgument("training sequences need at least two tokens");
    }
  }
}

}  // namespace

double TrainStep(ModelParams& model, std::span<const TokenSequence> batch,
                 Optimizer& optimizer, double lr,
                 std::optional<double> max_grad_norm) {
  CheckData(batch);
  const double weight = 1.0 / static_cast<double>(PredictedTokens(batch));
  Objective objective(model);
  for (const auto& seq : batch) {
    const SequenceSpan span = FullSpan(seq);
    objective.AddTerm(span, OneHotTargets(span, model.vocab_size), weight);
  }
  Objective::Result r = objective.ValueAndGradient();
  if (!std::isfinite(r.value) || !AllFinite(r.gradient)) {
    throw NumericalError("non-finite loss or gradient at optimizer step " +
                         std::to_string(optimizer.steps() + 1));
  }
  if (max_grad_norm) ClipGradient(r.gradient, *max_grad_norm);
  optimizer.Step(model, r.gradient, lr);
  return r.value;
}

ModelParams Train(const ModelParams& init, std::span<const TokenSequence> data,
                  const TrainConfig& config, TrainStats* stats) {
  config.Validate();
  CheckData(data);
  ModelParams model = init;
  Optimizer optimizer(config.optimizer, model);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::vector<TokenSequence> chunk;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double weighted = 0.0;
    std::size_t tokens = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      chunk.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + batch);
           ++i) {
        chunk.push_back(data[order[i]]);
      }
      const double loss = TrainStep(model, chunk, optimizer,
                                    config.learning_rate,
                                    config.max_grad_norm);
      const std::size_t n = PredictedTokens(chunk);
      weighted += loss * static_cast<double>(n);
      tokens += n;
    }
    if (!model.AllFinite()) {
      throw NumericalError("non-finite parameters after optimizer step " +
                           std::to_string(optimizer.steps()));
    }
    if (stats) {
      stats->epoch_mean_nll.push_back(weighted / static_cast<double>(tokens));
    }
  }
  if (stats) stats->steps = optimizer.steps();
  return model;
}

double MeanTokenNll(const ModelParams& model,
                    std::span<const TokenSequence> data) {
  CheckData(data);
  double total = 0.0;
  for (const auto& s : data) total += SequenceNll(model, s);
  return total / static_cast<double>(PredictedTokens(data));
}

}  // namespace unlearnlab::lm
