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

#ifndef UNLEARNLAB_TESTS_SUPPORT_METRIC_ORACLES_H_
#define UNLEARNLAB_TESTS_SUPPORT_METRIC_ORACLES_H_

// Small metric cases with hand-derived or brute-force expected values,
// shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "unlearnlab/eval/metrics.h"
#include "unlearnlab/lm/model.h"

namespace unlearnlab::testing {

struct OracleCase {
  std::string name;
  double got = 0.0;
  double want = 0.0;
};

// Counts member > non-member pairs directly, ties worth one half.
inline double BruteForceAuc(const std::vector<double>& m,
                            const std::vector<double>& n) {
  double wins = 0.0;
  for (double a : m)
    for (double b : n) wins += a > b ? 1.0 : a == b ? 0.5 : 0.0;
  return wins / static_cast<double>(m.size() * n.size());
}

// Bigram over {0, 1}: P(1|0) = 3/4, P(.|1) uniform.
inline lm::ModelParams HandBigram() {
  lm::ModelParams m = lm::ModelParams::InitBigram(2);
  m.params[0].value(0, 1) = std::log(3.0);
  return m;
}

inline std::vector<OracleCase> MetricOracleCases() {
  using eval::Auc;
  using eval::MinKScore;
  using eval::Perplexity;
  using eval::RenyiDivergence;
  using V = std::vector<double>;
  std::vector<OracleCase> c;

  const V lp4 = {-1, -2, -3, -4};
  c.push_back({"min-k 50% of 4", MinKScore(lp4, 50), -3.5});
  c.push_back({"min-k 10% of 4 keeps one", MinKScore(lp4, 10), -4.0});
  c.push_back({"min-k 100% is the mean", MinKScore(lp4, 100), -2.5});
  c.push_back({"min-k 50% of 3 rounds up",
               MinKScore(V{-0.5, -0.1, -2.0}, 50), -1.25});
  V lp10;
  for (int i = 1; i <= 10; ++i) lp10.push_back(-i / 10.0);
  c.push_back({"min-k 30% of 10", MinKScore(lp10, 30), -0.9});

  c.push_back({"auc separated", Auc(V{3, 4, 5}, V{1, 2}), 1.0});
  c.push_back({"auc reversed", Auc(V{1}, V{2}), 0.0});
  c.push_back({"auc with tie", Auc(V{1, 2}, V{2, 3}), 0.125});
  c.push_back({"auc all tied", Auc(V{7, 7}, V{7, 7, 7}), 0.5});
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 5; ++t) {
    V m, n;
    for (int i = 0; i < 7 + t; ++i) m.push_back(static_cast<double>(rng() % 6));
    for (int i = 0; i < 5 + 2 * t; ++i)
      n.push_back(static_cast<double>(rng() % 6));
    c.push_back({"auc brute force " + std::to_string(t), Auc(m, n),
                 BruteForceAuc(m, n)});
  }

  c.push_back({"renyi-2 point mass vs coin",
               RenyiDivergence(V{1, 0}, V{0.5, 0.5}, 2.0), std::log(2.0)});
  c.push_back({"renyi-0.5 point mass vs coin",
               RenyiDivergence(V{1, 0}, V{0.5, 0.5}, 0.5), std::log(2.0)});
  c.push_back({"renyi-2 coin vs biased",
               RenyiDivergence(V{0.5, 0.5}, V{0.25, 0.75}, 2.0),
               std::log(4.0 / 3.0)});
  c.push_back({"renyi-3 coin vs biased",
               RenyiDivergence(V{0.5, 0.5}, V{0.25, 0.75}, 3.0),
               0.5 * std::log(20.0 / 9.0)});
  c.push_back({"renyi of identical", RenyiDivergence(V{0.2, 0.8}, V{0.2, 0.8},
                                                     2.0),
               0.0});

  const lm::ModelParams uni = lm::ModelParams::InitBigram(5);
  const std::vector<lm::TokenSequence> any = {{0, 4, 2, 2, 1}, {3, 3}};
  c.push_back({"perplexity of uniform", Perplexity(uni, any), 5.0});
  const lm::ModelParams hb = HandBigram();
  const std::vector<lm::TokenSequence> one = {{0, 1, 1, 0}};
  c.push_back({"perplexity hand bigram", Perplexity(hb, one),
               std::cbrt(16.0 / 3.0)});
  const std::vector<lm::TokenSequence> two = {{0, 1}, {1, 0}};
  c.push_back({"perplexity pools tokens", Perplexity(hb, two),
               std::sqrt(8.0 / 3.0)});
  return c;
}

inline constexpr double kMetricOracleTolerance = 1e-9;

}  // namespace unlearnlab::testing

#endif  // UNLEARNLAB_TESTS_SUPPORT_METRIC_ORACLES_H_
