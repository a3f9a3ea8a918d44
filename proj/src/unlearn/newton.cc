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

#include "unlearnlab/unlearn/newton.h"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "unlearnlab/error.h"

namespace unlearnlab::unlearn {

namespace {

Eigen::VectorXd RowSoftmax(const lm::Tensor& w, std::size_t a) {
  const auto row = w.row(a);
  Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(row.data(),
                                                        static_cast<Eigen::Index>(row.size()));
  Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

}  // namespace

NewtonResult NewtonUnlearnBigram(const lm::ModelParams& vanilla,
                                 std::span<const lm::TokenSequence> train,
                                 std::span<const lm::TokenSequence> forget,
                                 std::optional<double> damping) {
  if (vanilla.arch != lm::Arch::kBigram) {
    throw InvalidArgument("Newton unlearning requires the bigram model");
  }
  if (damping && !(*damping >= 0.0)) {
    throw InvalidArgument("damping must be non-negative");
  }
  const int v = vanilla.vocab_size;
  const lm::BigramCounts full = lm::CountBigrams(train, v);
  const lm::BigramCounts removed = lm::CountBigrams(forget, v);
  lm::BigramCounts kept = full;
  for (std::size_t i = 0; i < kept.counts.size(); ++i) {
    kept.counts[i] -= removed.counts[i];
    if (kept.counts[i] < 0.0) {
      throw InvalidArgument("forget set is not contained in the training set");
    }
  }
  const lm::Tensor g_full = lm::BigramNllGradient(vanilla, full);
  double gmax = 0.0;
  for (double x : g_full.data()) gmax = std::max(gmax, std::abs(x));
  if (!(gmax < kStationarityTolerance)) {
    throw InvalidArgument("bigram is not D-stationary (max |grad| " +
                          std::to_string(gmax) + ")");
  }

  const auto uv = static_cast<std::size_t>(v);
  const lm::Tensor& w = vanilla.Get("logits");
  std::vector<Eigen::VectorXd> probs(uv);
  double diag_sum = 0.0;
  for (std::size_t a = 0; a < uv; ++a) {
    probs[a] = RowSoftmax(w, a);
    const double n_a = kept.RowTotal(static_cast<int>(a));
    diag_sum += n_a * (probs[a].array() * (1.0 - probs[a].array())).sum();
  }
  const double lambda =
      damping ? *damping : 1e-6 * diag_sum / static_cast<double>(uv * uv);

  NewtonResult result{.model = vanilla, .step_norm = 0.0, .damping = lambda};
  result.model.role = lm::ModelRole::kUnlearned;
  lm::Tensor& out = result.model.Get("logits");
  const lm::Tensor g = lm::BigramNllGradient(vanilla, kept);
  double sq = 0.0;
  for (std::size_t a = 0; a < uv; ++a) {
    const Eigen::VectorXd& p = probs[a];
    const double n_a = kept.RowTotal(static_cast<int>(a));
    Eigen::MatrixXd h = n_a * (Eigen::MatrixXd(p.asDiagonal()) - p * p.transpose());
    // H annihilates the all-ones vector and every row gradient sums to zero,
    // so adding n_a * 11^T / V fixes the gauge without changing the step.
    h.array() += n_a / static_cast<double>(v);
    h.diagonal().array() += lambda;
    Eigen::VectorXd grad(v);
    for (int b = 0; b < v; ++b) grad[b] = g(a, static_cast<std::size_t>(b));
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("singular Hessian block for context token " +
                           std::to_string(a) + " (damping " +
                           std::to_string(lambda) + ")");
    }
    const Eigen::VectorXd step = llt.solve(grad);
    for (int b = 0; b < v; ++b) out(a, static_cast<std::size_t>(b)) -= step[b];
    sq += step.squaredNorm();
  }
  result.step_norm = std::sqrt(sq);
  return result;
}

}  // namespace unlearnlab::unlearn
