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

#include <gtest/gtest.h>

#include <cmath>

#include "support/metric_oracles.h"
#include "unlearnlab/error.h"
#include "unlearnlab/eval/metrics.h"
#include "unlearnlab/eval/report.h"

namespace unlearnlab::eval {
namespace {

using testing::HandBigram;

TEST(MetricsTest, OracleTable) {
  for (const auto& c : testing::MetricOracleCases())
    EXPECT_NEAR(c.got, c.want, testing::kMetricOracleTolerance) << c.name;
}

TEST(MetricsTest, MinKRejectsBadPercent) {
  const std::vector<double> lp = {-1.0};
  EXPECT_THROW(MinKScore(lp, 0.0), InvalidArgument);
  EXPECT_THROW(MinKScore(lp, 101.0), InvalidArgument);
  EXPECT_THROW(MinKScore(std::vector<double>{}, 50.0), InvalidArgument);
}

TEST(MetricsTest, MinKFromModelUsesTokenLogProbs) {
  const lm::ModelParams m = HandBigram();
  const lm::TokenSequence seq = {0, 1, 1, 0};
  // log probs: log .75, log .5, log .5; the lowest third is log .5.
  EXPECT_NEAR(MinKScore(m, seq, 100.0 / 3), std::log(0.5), 1e-12);
}

TEST(MetricsTest, AucNeedsBothClasses) {
  const std::vector<double> a = {1.0};
  EXPECT_THROW(Auc(a, {}), InvalidArgument);
  EXPECT_THROW(Auc({}, a), InvalidArgument);
}

TEST(MetricsTest, AucIsSymmetricUnderSwap) {
  const std::vector<double> m = {0.1, 0.4, 0.4, 0.9};
  const std::vector<double> n = {0.2, 0.4, 0.3};
  EXPECT_NEAR(Auc(m, n) + Auc(n, m), 1.0, 1e-15);
}

TEST(MetricsTest, RenyiDomainAndOrdering) {
  const std::vector<double> p = {0.7, 0.2, 0.1}, q = {0.2, 0.3, 0.5};
  EXPECT_THROW(RenyiDivergence(p, q, 1.0), InvalidArgument);
  EXPECT_THROW(RenyiDivergence(p, q, 0.0), InvalidArgument);
  // Non-decreasing in alpha.
  double last = 0.0;
  for (double a : {0.25, 0.5, 2.0, 4.0, 8.0}) {
    const double d = RenyiDivergence(p, q, a);
    EXPECT_GE(d, last - 1e-15);
    last = d;
  }
}

TEST(MetricsTest, AccuracyBreaksTiesTowardLowestId) {
  // Uniform model predicts token 0 everywhere.
  const lm::ModelParams m = lm::ModelParams::InitBigram(3);
  const std::vector<lm::TokenSequence> d = {{1, 0, 2, 0}, {2}};
  EXPECT_NEAR(NextTokenAccuracy(m, d), 2.0 / 3, 1e-15);
  const std::vector<lm::TokenSequence> none = {{1}};
  EXPECT_THROW(Perplexity(m, none), InvalidArgument);
}

TEST(MetricsTest, MiaSweepPicksFirstBest) {
  const lm::ModelParams m = HandBigram();
  // Members use the likely 0 -> 1 transition, non-members do not.
  const std::vector<lm::TokenSequence> members = {{0, 1, 0, 1}, {0, 1, 1}};
  const std::vector<lm::TokenSequence> non = {{0, 0, 0}, {1, 0, 0}};
  const MiaResult r = MiaAucSweep(m, members, non);
  ASSERT_EQ(r.auc.size(), 10u);
  EXPECT_EQ(r.best_auc, 1.0);
  EXPECT_EQ(r.best_k, r.k_percent[0]);
  EXPECT_THROW(MiaConfig{.k_percent = {}}.Validate(), InvalidArgument);
  EXPECT_THROW(MiaConfig{.k_percent = {0.0}}.Validate(), InvalidArgument);
}

TEST(BehavioralTest, Type1IsZeroForIdenticalModels) {
  const lm::ModelParams m = HandBigram();
  const std::vector<lm::TokenSequence> prompts = {{0, 1, 0}};
  EXPECT_NEAR(Type1Measure(m, m, prompts, 2.0), 0.0, 1e-15);
  // Hand bigram vs uniform at context 0: max of D2(p||u) and D2(u||p).
  const lm::ModelParams u = lm::ModelParams::InitBigram(2);
  const double pu = std::log(0.25 * 0.25 / 0.5 + 0.75 * 0.75 / 0.5);
  const double up = std::log(0.25 / 0.25 + 0.25 / 0.75);
  EXPECT_NEAR(Type1Measure(m, u, prompts, 2.0), std::max(pu, up), 1e-12);
}

TEST(BehavioralTest, Type2IsTheWorstPair) {
  const lm::ModelParams m = HandBigram();
  const std::vector<ForbiddenPair> pairs = {{{1}, 0}, {{0}, 1}, {{0}, 0}};
  EXPECT_NEAR(Type2Violation(m, pairs), 0.75, 1e-15);
  const NextTokenFn flat = [](std::span<const int>) {
    return std::vector<double>{0.5, 0.5};
  };
  EXPECT_EQ(Type2Violation(flat, pairs), 0.5);
}

TEST(BehavioralTest, ConstraintValidation) {
  BehavioralConstraint c;
  EXPECT_THROW(c.Validate(), InvalidArgument);  // no forbidden pairs
  c.forbidden = {{{0}, 1}};
  EXPECT_NO_THROW(c.Validate());
  c.xi = 1.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  BehavioralConstraint t1{.mode = ConstraintMode::kType1,
                          .prompts = {{0, 1}},
                          .alpha = 1.0};
  EXPECT_THROW(t1.Validate(), InvalidArgument);
}

MetricsReport SampleReport() {
  MiaResult mia{.k_percent = {10, 20}, .auc = {0.6, 0.7}, .best_k = 20,
                .best_auc = 0.7};
  return MetricsReport(
      Provenance{.role = "unlearned",
                 .method = "ga",
                 .config_hash = "0123456789abcdef",
                 .seed = 3},
      {{"forget", {12.5, 0.25}}, {"retain", {9.0, 0.4}}}, mia,
      BehavioralValues{.type1 = 0.3, .type2 = 0.01});
}

TEST(ReportTest, JsonRoundTrip) {
  const MetricsReport r = SampleReport();
  const MetricsReport back = MetricsReport::FromJson(r.ToJson());
  EXPECT_EQ(back.ToJson(), r.ToJson());
  EXPECT_EQ(back.split("forget").perplexity, 12.5);
  EXPECT_THROW(back.split("missing"), InvalidArgument);
  EXPECT_EQ(r.MiaCsv(), "k_percent,auc\n10,0.59999999999999998\n"
                        "20,0.69999999999999996\n");
}

TEST(ReportTest, RejectsOutOfRangeValues) {
  nlohmann::json j = SampleReport().ToJson();
  j["splits"]["forget"]["accuracy"] = 1.5;
  EXPECT_THROW(MetricsReport::FromJson(j), InvalidArgument);
  j = SampleReport().ToJson();
  j["splits"]["forget"]["perplexity"] = 0.5;
  EXPECT_THROW(MetricsReport::FromJson(j), InvalidArgument);
  j = SampleReport().ToJson();
  j["mia"]["best_auc"] = -0.1;
  EXPECT_THROW(MetricsReport::FromJson(j), InvalidArgument);
  j = SampleReport().ToJson();
  j.erase("splits");
  EXPECT_THROW(MetricsReport::FromJson(j), FormatError);
}

}  // namespace
}  // namespace unlearnlab::eval
