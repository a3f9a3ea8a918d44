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

#ifndef UNLEARNLAB_EVAL_METRICS_H_
#define UNLEARNLAB_EVAL_METRICS_H_

#include <functional>
#include <span>
#include <vector>

#include "unlearnlab/lm/model.h"

namespace unlearnlab::eval {

using lm::TokenSequence;

struct SplitMetrics {
  double perplexity = 0.0;
  double accuracy = 0.0;
  bool operator==(const SplitMetrics&) const = default;
};

// exp(total NLL / total predicted tokens). Throws InvalidArgument when the
// data has no predicted position.
double Perplexity(const lm::ModelParams& model,
                  std::span<const TokenSequence> data);

// Fraction of predicted positions whose argmax (lowest id on ties) is the
// true token. Sequences shorter than two tokens contribute nothing.
double NextTokenAccuracy(const lm::ModelParams& model,
                         std::span<const TokenSequence> data);

SplitMetrics Evaluate(const lm::ModelParams& model,
                      std::span<const TokenSequence> data);

// Vanilla metrics on the approximate set, standing in for the retrained
// model's metrics on U.
SplitMetrics ApproxRetrainTarget(const lm::ModelParams& vanilla,
                                 std::span<const TokenSequence> approximate);

// Mean of the ceil(k% * T) lowest entries. k in (0, 100].
double MinKScore(std::span<const double> token_log_probs, double k_percent);
double MinKScore(const lm::ModelParams& model, std::span<const int> seq,
                 double k_percent);

// P(member > non-member) + P(tie) / 2 via midranks.
double Auc(std::span<const double> members, std::span<const double> non_members);

struct MiaConfig {
  std::vector<double> k_percent = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  void Validate() const;
};

struct MiaResult {
  std::vector<double> k_percent;
  std::vector<double> auc;  // parallel to k_percent
  double best_k = 0.0;      // first k attaining the maximum
  double best_auc = 0.0;
};

// Members are U, non-members A; one sequence is one scoring unit.
MiaResult MiaAucSweep(const lm::ModelParams& model,
                      std::span<const TokenSequence> members,
                      std::span<const TokenSequence> non_members,
                      const MiaConfig& config = {});

// (1 / (alpha - 1)) log sum p^alpha q^(1 - alpha), q floored at 1e-12.
// Throws InvalidArgument for alpha <= 0 and for alpha == 1 (use KL).
double RenyiDivergence(std::span<const double> p, std::span<const double> q,
                       double alpha);

// Max over every predicted position of every prompt of the larger of the
// two directed divergences between the models' next-token distributions.
double Type1Measure(const lm::ModelParams& a, const lm::ModelParams& b,
                    std::span<const TokenSequence> prompts, double alpha);

struct ForbiddenPair {
  TokenSequence prefix;
  int token = 0;
};

using NextTokenFn = std::function<std::vector<double>(std::span<const int>)>;

// max over pairs of P(token | prefix).
double Type2Violation(const lm::ModelParams& model,
                      std::span<const ForbiddenPair> pairs);
double Type2Violation(const NextTokenFn& next_token,
                      std::span<const ForbiddenPair> pairs);

enum class ConstraintMode { kType1, kType2 };

struct BehavioralConstraint {
  ConstraintMode mode = ConstraintMode::kType2;
  std::vector<TokenSequence> prompts;    // type-I
  double alpha = 2.0;                    // type-I
  std::vector<ForbiddenPair> forbidden;  // type-II
  double xi = 1e-2;
  // Throws InvalidArgument on an empty prompt/forbidden set, xi < 0, a type-I
  // alpha that is not positive or equals 1, or a type-II xi outside (0, 1).
  void Validate() const;
};

}  // namespace unlearnlab::eval

#endif  // UNLEARNLAB_EVAL_METRICS_H_
