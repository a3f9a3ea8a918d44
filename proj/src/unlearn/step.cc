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

#include "unlearnlab/unlearn/step.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "unlearnlab/error.h"

namespace unlearnlab::unlearn {

using lm::SequenceSpan;
using lm::Tensor;

Batch WholeSequences(std::span<const TokenSequence> seqs) {
  Batch b;
  for (const auto& s : seqs) {
    if (s.size() < 2) continue;
    b.push_back(lm::FullSpan(s));
  }
  return b;
}

std::size_t PositionCount(const Batch& batch) {
  std::size_t n = 0;
  for (const auto& s : batch) n += s.size();
  return n;
}

std::vector<Batch> MakeBatches(std::span<const TokenSequence> seqs, int count) {
  const Batch all = WholeSequences(seqs);
  const std::size_t total = PositionCount(all);
  if (count < 1 || static_cast<std::size_t>(count) > total) {
    throw InvalidArgument("cannot cut " + std::to_string(total) +
                          " positions into " + std::to_string(count) +
                          " batches");
  }
  const auto n = static_cast<std::size_t>(count);
  std::vector<Batch> out(n);
  // Global position g falls in batch b iff bound(b) <= g < bound(b + 1).
  auto bound = [&](std::size_t b) { return b * total / n; };
  std::size_t offset = 0;  // global index of the span's first row
  for (const auto& span : all) {
    const std::size_t lo = offset, hi = offset + span.size();
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t from = std::max(lo, bound(b));
      const std::size_t to = std::min(hi, bound(b + 1));
      if (from >= to) continue;
      out[b].push_back({span.tokens, span.begin + (from - lo),
                        span.begin + (to - lo)});
    }
    offset = hi;
  }
  return out;
}

Tensor ReferenceTargets(ReferenceKind kind, const lm::ModelParams& model,
                        const SequenceSpan& span) {
  const auto v = static_cast<std::size_t>(model.vocab_size);
  switch (kind) {
    case ReferenceKind::kDeltaTrue:
      return lm::OneHotTargets(span, model.vocab_size);
    case ReferenceKind::kUniform:
      return Tensor({span.size(), v}, 1.0 / static_cast<double>(v));
    case ReferenceKind::kDeltaAdversarial: {
      const Tensor probs =
          lm::PositionDistributions(model, span.tokens.first(span.end + 1));
      Tensor t({span.size(), v}, 0.0);
      for (std::size_t r = 0; r < span.size(); ++r) {
        const std::size_t row = span.begin + r;
        const int a = AdversarialToken(probs.row(row), span.tokens[row + 1]);
        t(r, static_cast<std::size_t>(a)) = 1.0;
      }
      return t;
    }
  }
  throw InvalidArgument("unknown reference kind");
}

namespace {

// Teacher rows of P_vanilla over the span.
Tensor TeacherRows(const lm::ModelParams& vanilla, const SequenceSpan& span) {
  const Tensor probs =
      lm::PositionDistributions(vanilla, span.tokens.first(span.end + 1));
  const std::size_t v = probs.cols();
  Tensor t({span.size(), v});
  for (std::size_t r = 0; r < span.size(); ++r)
    for (std::size_t c = 0; c < v; ++c) t(r, c) = probs(span.begin + r, c);
  return t;
}

// sum_i p_i log p_i over every row, with zero-probability entries skipped.
double NegEntropySum(const Tensor& rows) {
  double s = 0.0;
  for (double p : rows.data())
    if (p > 0.0) s += p * std::log(p);
  return s;
}

}  // namespace

LossAndGradient UnlearningGradient(const lm::ModelParams& model,
                                   const Batch& forget, const Batch& retain,
                                   const MethodSpec& spec,
                                   const lm::ModelParams* vanilla) {
  spec.Validate();
  const std::size_t nf = PositionCount(forget);
  const std::size_t nr = PositionCount(retain);
  if (nf == 0) throw InvalidArgument("forget batch is empty");
  if (spec.has_retain() != (nr > 0)) {
    throw InvalidArgument(spec.has_retain()
                              ? "method '" + spec.name + "' needs a retain batch"
                              : "method '" + spec.name +
                                    "' takes no retain batch");
  }
  if (spec.retain_term == RetainTerm::kKlToVanilla && vanilla == nullptr) {
    throw InvalidArgument("KL retain term needs the vanilla model");
  }

  lm::Objective objective(model);
  const double sign = spec.forget_sign == ForgetSign::kAscent ? -1.0 : 1.0;
  const double wf = sign * (spec.forget_coef / static_cast<double>(nf));
  for (const auto& span : forget) {
    objective.AddTerm(span, ReferenceTargets(spec.reference, model, span), wf);
  }
  double constant = 0.0;
  if (spec.has_retain()) {
    const double wr = spec.retain_coef / static_cast<double>(nr);
    for (const auto& span : retain) {
      if (spec.retain_term == RetainTerm::kDescent) {
        objective.AddTerm(span, lm::OneHotTargets(span, model.vocab_size), wr);
      } else {
        // KL(p || q) = CE(q; p) + sum p log p.
        Tensor teacher = TeacherRows(*vanilla, span);
        constant += wr * NegEntropySum(teacher);
        objective.AddTerm(span, teacher, wr);
      }
    }
  }
  lm::Objective::Result r = objective.ValueAndGradient();
  return {.value = r.value + constant, .gradient = std::move(r.gradient)};
}

StepStats UnifiedStep(lm::ModelParams& model, const Batch& forget,
                      const Batch& retain, const MethodSpec& spec, double lr,
                      lm::Optimizer& optimizer,
                      std::optional<double> max_grad_norm,
                      const lm::ModelParams* vanilla) {
  LossAndGradient lg =
      UnlearningGradient(model, forget, retain, spec, vanilla);
  const long step = optimizer.steps() + 1;
  if (!std::isfinite(lg.value) || !lm::AllFinite(lg.gradient)) {
    throw NumericalError("method '" + spec.name +
                         "': non-finite loss or gradient at unlearning step " +
                         std::to_string(step));
  }
  StepStats stats{.loss = lg.value, .grad_norm = lm::GradientNorm(lg.gradient)};
  if (max_grad_norm) {
    lm::ClipGradient(lg.gradient, *max_grad_norm);
    stats.clipped = stats.grad_norm > *max_grad_norm;
  }
  optimizer.Step(model, lg.gradient, lr);
  if (!model.AllFinite()) {
    throw NumericalError("method '" + spec.name +
                         "': non-finite parameters after unlearning step " +
                         std::to_string(step));
  }
  return stats;
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InvalidArgument("KL divergence of distributions of different size");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    s += p[i] * (std::log(p[i]) -
                 std::log(std::max(q[i], autodiff::kProbabilityFloor)));
  }
  return s;
}

double KlRetainTerm(const lm::ModelParams& model,
                    const lm::ModelParams& vanilla, const Batch& retain) {
  const std::size_t n = PositionCount(retain);
  if (n == 0) throw InvalidArgument("retain batch is empty");
  double total = 0.0;
  for (const auto& span : retain) {
    const auto prefix = span.tokens.first(span.end + 1);
    const Tensor p = lm::PositionDistributions(vanilla, prefix);
    const Tensor q = lm::PositionDistributions(model, prefix);
    for (std::size_t r = span.begin; r < span.end; ++r)
      total += KlDivergence(p.row(r), q.row(r));
  }
  return total / static_cast<double>(n);
}

}  // namespace unlearnlab::unlearn
