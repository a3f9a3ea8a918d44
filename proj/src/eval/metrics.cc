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

#include "unlearnlab/eval/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "unlearnlab/error.h"

namespace unlearnlab::eval {

namespace {

std::size_t Positions(std::span<const TokenSequence> data) {
  std::size_t n = 0;
  for (const auto& s : data)
    if (s.size() >= 2) n += s.size() - 1;
  return n;
}

}  // namespace

double Perplexity(const lm::ModelParams& model,
                  std::span<const TokenSequence> data) {
  const std::size_t n = Positions(data);
  if (n == 0) throw InvalidArgument("perplexity of data with no predictions");
  double nll = 0.0;
  for (const auto& s : data)
    if (s.size() >= 2) nll += lm::SequenceNll(model, s);
  return std::exp(nll / static_cast<double>(n));
}

double NextTokenAccuracy(const lm::ModelParams& model,
                         std::span<const TokenSequence> data) {
  const std::size_t n = Positions(data);
  if (n == 0) throw InvalidArgument("accuracy of data with no predictions");
  std::size_t hits = 0;
  for (const auto& s : data) {
    if (s.size() < 2) continue;
    const lm::Tensor probs = lm::PositionDistributions(model, s);
    for (std::size_t r = 0; r < probs.rows(); ++r) {
      const auto row = probs.row(r);
      // max_element returns the first maximum, i.e. the lowest id.
      const auto best = std::max_element(row.begin(), row.end()) - row.begin();
      if (best == s[r + 1]) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

SplitMetrics Evaluate(const lm::ModelParams& model,
                      std::span<const TokenSequence> data) {
  return {Perplexity(model, data), NextTokenAccuracy(model, data)};
}

SplitMetrics ApproxRetrainTarget(const lm::ModelParams& vanilla,
                                 std::span<const TokenSequence> approximate) {
  if (approximate.empty()) throw InvalidArgument("approximate set is empty");
  return Evaluate(vanilla, approximate);
}

double MinKScore(std::span<const double> lp, double k_percent) {
  if (lp.empty()) throw InvalidArgument("min-k score of an empty sequence");
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    throw InvalidArgument("k must lie in (0, 100]");
  }
  std::vector<double> sorted(lp.begin(), lp.end());
  std::sort(sorted.begin(), sorted.end());
  // Guard the ceiling against k% * T landing a hair above an integer.
  const double exact = k_percent * static_cast<double>(sorted.size()) / 100.0;
  auto count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  count = std::clamp<std::size_t>(count, 1, sorted.size());
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) s += sorted[i];
  return s / static_cast<double>(count);
}

double MinKScore(const lm::ModelParams& model, std::span<const int> seq,
                 double k_percent) {
  return MinKScore(lm::TokenLogProbs(model, seq), k_percent);
}

double Auc(std::span<const double> members,
           std::span<const double> non_members) {
  if (members.empty() || non_members.empty()) {
    throw InvalidArgument("AUC needs non-empty member and non-member lists");
  }
  struct Item {
    double score;
    bool member;
  };
  std::vector<Item> all;
  for (double s : members) all.push_back({s, true});
  for (double s : non_members) all.push_back({s, false});
  std::sort(all.begin(), all.end(),
            [](const Item& a, const Item& b) { return a.score < b.score; });
  double member_rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t)
      if (all[t].member) member_rank_sum += midrank;
    i = j;
  }
  const double m = static_cast<double>(members.size());
  const double n = static_cast<double>(non_members.size());
  return (member_rank_sum - m * (m + 1.0) / 2.0) / (m * n);
}

void MiaConfig::Validate() const {
  if (k_percent.empty()) throw InvalidArgument("MIA k sweep is empty");
  for (double k : k_percent) {
    if (!(k > 0.0 && k <= 100.0)) {
      throw InvalidArgument("MIA k must lie in (0, 100]");
    }
  }
}

MiaResult MiaAucSweep(const lm::ModelParams& model,
                      std::span<const TokenSequence> members,
                      std::span<const TokenSequence> non_members,
                      const MiaConfig& config) {
  config.Validate();
  if (members.empty() || non_members.empty()) {
    throw InvalidArgument("MIA needs non-empty member and non-member sets");
  }
  std::vector<std::vector<double>> lp_m, lp_n;
  for (const auto& s : members) lp_m.push_back(lm::TokenLogProbs(model, s));
  for (const auto& s : non_members) lp_n.push_back(lm::TokenLogProbs(model, s));
  MiaResult r;
  for (double k : config.k_percent) {
    std::vector<double> sm, sn;
    for (const auto& lp : lp_m) sm.push_back(MinKScore(lp, k));
    for (const auto& lp : lp_n) sn.push_back(MinKScore(lp, k));
    const double auc = Auc(sm, sn);
    r.k_percent.push_back(k);
    r.auc.push_back(auc);
    if (r.auc.size() == 1 || auc > r.best_auc) {
      r.best_auc = auc;
      r.best_k = k;
    }
  }
  return r;
}

double RenyiDivergence(std::span<const double> p, std::span<const double> q,
                       double alpha) {
  if (alpha == 1.0) {
    throw InvalidArgument("Renyi order 1 is the KL divergence; use KL");
  }
  if (!(alpha > 0.0)) throw InvalidArgument("Renyi order must be positive");
  if (p.size() != q.size() || p.empty()) {
    throw InvalidArgument("Renyi divergence needs equal, non-empty supports");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    const double qi = std::max(q[i], autodiff::kProbabilityFloor);
    s += std::pow(p[i], alpha) * std::pow(qi, 1.0 - alpha);
  }
  // Rounding can push identical distributions a hair below zero.
  return std::max(0.0, std::log(s) / (alpha - 1.0));
}

double Type1Measure(const lm::ModelParams& a, const lm::ModelParams& b,
                    std::span<const TokenSequence> prompts, double alpha) {
  if (prompts.empty()) throw InvalidArgument("type-I prompt set is empty");
  double worst = 0.0;
  for (const auto& s : prompts) {
    if (s.size() < 2) continue;
    const lm::Tensor pa = lm::PositionDistributions(a, s);
    const lm::Tensor pb = lm::PositionDistributions(b, s);
    for (std::size_t r = 0; r < pa.rows(); ++r) {
      worst = std::max({worst, RenyiDivergence(pa.row(r), pb.row(r), alpha),
                        RenyiDivergence(pb.row(r), pa.row(r), alpha)});
    }
  }
  return worst;
}

double Type2Violation(const NextTokenFn& next_token,
                      std::span<const ForbiddenPair> pairs) {
  if (pairs.empty()) throw InvalidArgument("forbidden set is empty");
  double worst = 0.0;
  for (const auto& f : pairs) {
    const std::vector<double> p = next_token(f.prefix);
    if (f.token < 0 || static_cast<std::size_t>(f.token) >= p.size()) {
      throw InvalidArgument("forbidden token outside vocabulary");
    }
    worst = std::max(worst, p[static_cast<std::size_t>(f.token)]);
  }
  return worst;
}

double Type2Violation(const lm::ModelParams& model,
                      std::span<const ForbiddenPair> pairs) {
  return Type2Violation(
      [&](std::span<const int> prefix) {
        return lm::NextTokenDistribution(model, prefix);
      },
      pairs);
}

void BehavioralConstraint::Validate() const {
  if (!(xi >= 0.0)) throw InvalidArgument("slack xi must be non-negative");
  if (mode == ConstraintMode::kType1) {
    if (prompts.empty()) throw InvalidArgument("type-I prompt set is empty");
    if (!(alpha > 0.0) || alpha == 1.0) {
      throw InvalidArgument("type-I alpha must be positive and not 1");
    }
  } else {
    if (forbidden.empty()) throw InvalidArgument("forbidden set is empty");
    if (!(xi > 0.0 && xi < 1.0)) {
      throw InvalidArgument("type-II slack xi must lie in (0, 1)");
    }
  }
}

}  // namespace unlearnlab::eval
