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

#ifndef UNLEARNLAB_UNLEARN_METHOD_H_
#define UNLEARNLAB_UNLEARN_METHOD_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unlearnlab/lm/model.h"

namespace unlearnlab::unlearn {

// Target distribution placed at each forget position.
enum class ReferenceKind { kDeltaTrue, kUniform, kDeltaAdversarial };
// kAscent maximizes the forget cross-entropy; kNone minimizes it.
enum class ForgetSign { kAscent, kNone };
enum class RetainTerm { kNone, kDescent, kKlToVanilla };
// Where retain batches come from: R (forget domain) or a sample of G.
enum class RetainData { kInDistribution, kGeneral };

std::string_view ReferenceName(ReferenceKind k);
ReferenceKind ParseReference(std::string_view s);
std::string_view ForgetSignName(ForgetSign s);
ForgetSign ParseForgetSign(std::string_view s);
std::string_view RetainTermName(RetainTerm t);
RetainTerm ParseRetainTerm(std::string_view s);
std::string_view RetainDataName(RetainData d);
RetainData ParseRetainData(std::string_view s);

// One instance of the two-term objective
//   forget_coef * sign * CE(forget, Q) + retain_coef * retain term.
struct MethodSpec {
  std::string name;
  ReferenceKind reference = ReferenceKind::kDeltaTrue;
  ForgetSign forget_sign = ForgetSign::kAscent;
  RetainTerm retain_term = RetainTerm::kNone;
  RetainData retain_data = RetainData::kInDistribution;
  double forget_coef = 1.0;
  double retain_coef = 1.0;

  bool has_retain() const { return retain_term != RetainTerm::kNone; }
  // Throws InvalidArgument on negative coefficients or an empty name.
  void Validate() const;
  bool operator==(const MethodSpec&) const = default;
};

MethodSpec GradientAscent();
MethodSpec RandomLabels();
MethodSpec Adversarial();
MethodSpec GaDescent(RetainData data);
MethodSpec GaKl(RetainData data);

// The seven presets: ga, random-labels, adversarial, ga+descent-in,
// ga+descent-general, ga+kl-in, ga+kl-general.
std::vector<MethodSpec> AllMethods();
MethodSpec MethodByName(std::string_view name);

// argmax over a != true_token of P(a | prefix), lowest id on ties.
// Throws InvalidArgument when V = 1.
int AdversarialToken(std::span<const double> next_token_probs, int true_token);
int AdversarialToken(const lm::ModelParams& model, std::span<const int> prefix,
                     int true_token);

std::vector<double> ReferenceDistribution(ReferenceKind kind,
                                          const lm::ModelParams& model,
                                          std::span<const int> prefix,
                                          int true_token);

}  // namespace unlearnlab::unlearn

#endif  // UNLEARNLAB_UNLEARN_METHOD_H_
