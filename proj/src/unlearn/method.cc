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

#include "unlearnlab/unlearn/method.h"

#include <string>

#include "unlearnlab/error.h"

namespace unlearnlab::unlearn {

std::string_view ReferenceName(ReferenceKind k) {
  switch (k) {
    case ReferenceKind::kDeltaTrue: return "delta-true-token";
    case ReferenceKind::kUniform: return "uniform";
    case ReferenceKind::kDeltaAdversarial: return "delta-adversarial";
  }
  return "delta-true-token";
}

ReferenceKind ParseReference(std::string_view s) {
  if (s == "delta-true-token") return ReferenceKind::kDeltaTrue;
  if (s == "uniform") return ReferenceKind::kUniform;
  if (s == "delta-adversarial") return ReferenceKind::kDeltaAdversarial;
  throw InvalidArgument("unknown reference distribution '" + std::string(s) +
                        "'");
}

std::string_view ForgetSignName(ForgetSign s) {
  return s == ForgetSign::kAscent ? "ascent" : "none";
}

ForgetSign ParseForgetSign(std::string_view s) {
  if (s == "ascent") return ForgetSign::kAscent;
  if (s == "none") return ForgetSign::kNone;
  throw InvalidArgument("unknown forget-term sign '" + std::string(s) + "'");
}

std::string_view RetainTermName(RetainTerm t) {
  switch (t) {
    case RetainTerm::kNone: return "none";
    case RetainTerm::kDescent: return "descent";
    case RetainTerm::kKlToVanilla: return "kl-to-vanilla";
  }
  return "none";
}

RetainTerm ParseRetainTerm(std::string_view s) {
  if (s == "none") return RetainTerm::kNone;
  if (s == "descent") return RetainTerm::kDescent;
  if (s == "kl-to-vanilla") return RetainTerm::kKlToVanilla;
  throw InvalidArgument("unknown retain term '" + std::string(s) + "'");
}

std::string_view RetainDataName(RetainData d) {
  return d == RetainData::kInDistribution ? "in-distribution" : "general";
}

RetainData ParseRetainData(std::string_view s) {
  if (s == "in-distribution") return RetainData::kInDistribution;
  if (s == "general") return RetainData::kGeneral;
  throw InvalidArgument("unknown retain data kind '" + std::string(s) + "'");
}

void MethodSpec::Validate() const {
  if (name.empty()) throw InvalidArgument("method needs a name");
  if (!(forget_coef >= 0.0) || !(retain_coef >= 0.0)) {
    throw InvalidArgument("method '" + name +
                          "': coefficients must be non-negative");
  }
}

MethodSpec GradientAscent() {
  return {.name = "ga",
          .reference = ReferenceKind::kDeltaTrue,
          .forget_sign = ForgetSign::kAscent};
}

MethodSpec RandomLabels() {
  return {.name = "random-labels",
          .reference = ReferenceKind::kUniform,
          .forget_sign = ForgetSign::kNone};
}

MethodSpec Adversarial() {
  return {.name = "adversarial",
          .reference = ReferenceKind::kDeltaAdversarial,
          .forget_sign = ForgetSign::kNone};
}

MethodSpec GaDescent(RetainData data) {
  MethodSpec m = GradientAscent();
  m.name = data == RetainData::kInDistribution ? "ga+descent-in"
                                               : "ga+descent-general";
  m.retain_term = RetainTerm::kDescent;
  m.retain_data = data;
  return m;
}

MethodSpec GaKl(RetainData data) {
  MethodSpec m = GradientAscent();
  m.name = data == RetainData::kInDistribution ? "ga+kl-in" : "ga+kl-general";
  m.retain_term = RetainTerm::kKlToVanilla;
  m.retain_data = data;
  return m;
}

std::vector<MethodSpec> AllMethods() {
  return {GradientAscent(),
          RandomLabels(),
          Adversarial(),
          GaDescent(RetainData::kInDistribution),
          GaDescent(RetainData::kGeneral),
          GaKl(RetainData::kInDistribution),
          GaKl(RetainData::kGeneral)};
}

MethodSpec MethodByName(std::string_view name) {
  for (auto& m : AllMethods())
    if (m.name == name) return m;
  throw InvalidArgument("unknown method '" + std::string(name) + "'");
}

int AdversarialToken(std::span<const double> probs, int true_token) {
  if (probs.size() < 2) {
    throw InvalidArgument("adversarial token needs a vocabulary of at least 2");
  }
  if (true_token < 0 || static_cast<std::size_t>(true_token) >= probs.size()) {
    throw InvalidArgument("true token outside vocabulary");
  }
  int best = -1;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    if (a == true_token) continue;
    // Strict comparison keeps the lowest id among ties.
    if (best < 0 || probs[a] > probs[best]) best = a;
  }
  return best;
}

int AdversarialToken(const lm::ModelParams& model, std::span<const int> prefix,
                     int true_token) {
  if (model.vocab_size < 2) {
    throw InvalidArgument("adversarial token needs a vocabulary of at least 2");
  }
  return AdversarialToken(lm::NextTokenDistribution(model, prefix), true_token);
}

std::vector<double> ReferenceDistribution(ReferenceKind kind,
                                          const lm::ModelParams& model,
                                          std::span<const int> prefix,
                                          int true_token) {
  const int v = model.vocab_size;
  if (true_token < 0 || true_token >= v) {
    throw InvalidArgument("true token outside vocabulary");
  }
  std::vector<double> q(static_cast<std::size_t>(v), 0.0);
  switch (kind) {
    case ReferenceKind::kDeltaTrue:
      q[static_cast<std::size_t>(true_token)] = 1.0;
      break;
    case ReferenceKind::kUniform:
      q.assign(q.size(), 1.0 / v);
      break;
    case ReferenceKind::kDeltaAdversarial:
      q[static_cast<std::size_t>(AdversarialToken(model, prefix, true_token))] =
          1.0;
      break;
  }
  return q;
}

}  // namespace unlearnlab::unlearn
