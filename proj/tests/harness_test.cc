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
#include <filesystem>
#include <fstream>

#include "unlearnlab/error.h"
#include "unlearnlab/harness/config.h"
#include "unlearnlab/harness/experiment.h"
#include "unlearnlab/harness/search.h"
#include "unlearnlab/harness/sweep.h"

namespace unlearnlab::harness {
namespace {

namespace fs = std::filesystem;

// Small enough for a unit test: bigram, two short domains, two methods.
ExperimentConfig TinyConfig(const fs::path& out) {
  ExperimentConfig c = DefaultConfig();
  c.corpus.alphabet = "abcdef";
  for (auto& d : c.corpus.domains) {
    d.num_sequences = 20;
    d.sequence_length = 12;
  }
  c.splits.forget_fraction = 0.1;
  c.splits.retain_sample_size = 4;
  c.splits.general_size = 8;
  c.splits.approx_size = 6;
  c.model.arch = lm::Arch::kBigram;
  c.train.learning_rate = 0.1;
  c.train.epochs = 3;
  c.unlearn.methods = {"ga", "ga+kl-in"};
  c.unlearn.learning_rate = 1e-2;
  c.unlearn.steps = 8;
  c.behavioral.type2.pairs = 2;
  c.behavioral.type2.learning_rate = 1e-1;
  c.behavioral.type2.steps = 8;
  c.seeds = {0, 1};
  c.output_dir = out;
  return c;
}

TEST(ConfigTest, JsonRoundTrip) {
  const ExperimentConfig c = DefaultConfig();
  const nlohmann::json j = ConfigToJson(c);
  EXPECT_EQ(ConfigToJson(ConfigFromJson(j)), j);
  EXPECT_EQ(ConfigHash(ConfigFromJson(j)), ConfigHash(c));
  EXPECT_EQ(ConfigHash(c).size(), 16u);
}

TEST(ConfigTest, MissingKeysTakeDefaults) {
  const ExperimentConfig c =
      ConfigFromJson(nlohmann::json::parse(R"({"seeds": [7]})"));
  EXPECT_EQ(c.seeds, std::vector<std::uint64_t>{7});
  EXPECT_EQ(c.unlearn.methods, DefaultConfig().unlearn.methods);
}

TEST(ConfigTest, UnknownKeysAreErrors) {
  // Schema problems are format errors; bad values are invalid arguments.
  EXPECT_THROW(ConfigFromJson(nlohmann::json::parse(R"({"sedes": [1]})")),
               FormatError);
  EXPECT_THROW(
      ConfigFromJson(nlohmann::json::parse(R"({"unlearn": {"lr": 0.1}})")),
      FormatError);
  EXPECT_THROW(ConfigFromJson(nlohmann::json::parse(
                   R"({"unlearn": {"methods": ["ga", "sgd"]}})")),
               InvalidArgument);
  EXPECT_THROW(ConfigFromJson(nlohmann::json::parse(R"({"seeds": "one"})")),
               FormatError);
}

TEST(ConfigTest, OutputDirDoesNotChangeTheHash) {
  ExperimentConfig a = DefaultConfig(), b = DefaultConfig();
  b.output_dir = "/elsewhere";
  EXPECT_EQ(ConfigHash(a), ConfigHash(b));
  b.unlearn.learning_rate *= 2;
  EXPECT_NE(ConfigHash(a), ConfigHash(b));
}

TEST(ConfigTest, Fnv1aKnownVectors) {
  EXPECT_EQ(Fnv1aHex(""), "cbf29ce484222325");
  EXPECT_EQ(Fnv1aHex("a"), "af63dc4c8601ec8c");
}

TEST(ConfigTest, DerivedSeedsDifferByTag) {
  EXPECT_NE(DeriveSeed(0, "init"), DeriveSeed(0, "train"));
  EXPECT_NE(DeriveSeed(0, "init"), DeriveSeed(1, "init"));
  EXPECT_EQ(DeriveSeed(3, "splits"), DeriveSeed(3, "splits"));
}

TEST(ConfigTest, LoadConfigReportsBadFiles) {
  const fs::path p = fs::temp_directory_path() / "unlearnlab_bad.json";
  std::ofstream(p) << "{ not json";
  EXPECT_THROW(LoadConfig(p), FormatError);
  EXPECT_THROW(LoadConfig("/nonexistent.json"), Error);
  fs::remove(p);
}

// Synthetic response ppl(lr) = 10 + 100 lr: the bracket and fine grid are
// known in closed form.
TEST(LrSearchTest, FindsTheClosestFineGridPoint) {
  int calls = 0;
  const LrResponse linear = [&](double lr) {
    ++calls;
    return 10.0 + 100.0 * lr;
  };
  const std::vector<double> grid = {1e-3, 1e-2, 1e-1};
  const double target = 13.0;  // exact at lr = 0.03
  const LrSearchResult r = LrGuidelineSearch(linear, grid, target);
  EXPECT_EQ(calls, 3 + kFineGridPoints);
  ASSERT_EQ(r.fine.size(), static_cast<std::size_t>(kFineGridPoints));
  for (const auto& p : r.fine) {
    EXPECT_GT(p.lr, 1e-2);
    EXPECT_LT(p.lr, 1e-1);
  }
  // Fine points 1e-2 * 10^(j/11); the closest to 0.03 is j = 5.
  EXPECT_NEAR(r.lr, 1e-2 * std::pow(10.0, 5.0 / 11), 1e-15);
  EXPECT_NEAR(r.ppl, 10.0 + 100.0 * r.lr, 1e-12);
}

TEST(LrSearchTest, UnbracketedTargetNamesEndpoints) {
  const LrResponse flat = [](double) { return 5.0; };
  try {
    LrGuidelineSearch(flat, {1e-3, 1e-1}, 9.0);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("ppl 5"), std::string::npos);
  }
}

TEST(LrSearchTest, SingletonGrid) {
  const LrResponse f = [](double lr) { return 100.0 * lr; };
  EXPECT_EQ(LrGuidelineSearch(f, {0.1}, 10.1).lr, 0.1);
  EXPECT_THROW(LrGuidelineSearch(f, {0.1}, 12.0), InvalidArgument);
  EXPECT_THROW(LrGuidelineSearch(f, {}, 12.0), InvalidArgument);
  EXPECT_THROW(LrGuidelineSearch(f, {0.1, 0.1}, 12.0), InvalidArgument);
}

TEST(SweepTest, SpecValidation) {
  SweepSpec s{.axis = SweepAxis::kSteps, .grid = {1, 2, 4}, .fixed = 1e-3,
              .methods = {"ga"}};
  EXPECT_NO_THROW(s.Validate());
  s.grid = {1, 2.5};
  EXPECT_THROW(s.Validate(), InvalidArgument);
  s.grid = {4, 2};
  EXPECT_THROW(s.Validate(), InvalidArgument);
  s = {.axis = SweepAxis::kLearningRate, .grid = {1e-3}, .fixed = 0.5,
       .methods = {"ga"}};
  EXPECT_THROW(s.Validate(), InvalidArgument);
  s.fixed = 4;
  s.methods = {"nope"};
  EXPECT_THROW(s.Validate(), InvalidArgument);
  EXPECT_EQ(ParseSweepAxis(SweepAxisName(SweepAxis::kSteps)),
            SweepAxis::kSteps);
}

TEST(ExperimentTest, PreparedSeedIsDeterministic) {
  const ExperimentConfig c = TinyConfig("unused");
  const PreparedSeed a = PrepareSeed(c, 0);
  const PreparedSeed b = PrepareSeed(c, 0);
  EXPECT_TRUE(*a.vanilla == *b.vanilla);
  EXPECT_TRUE(*a.retrained == *b.retrained);
  EXPECT_EQ(a.data.forget, b.data.forget);
  EXPECT_EQ(a.vanilla->role, lm::ModelRole::kVanilla);
  EXPECT_EQ(a.retrained->role, lm::ModelRole::kRetrained);
  // Another seed draws another corpus.
  EXPECT_FALSE(PrepareSeed(c, 1).data.forget == a.data.forget);
}

TEST(ExperimentTest, ForbiddenPairsComeFromTheForgetSet) {
  const ExperimentConfig c = TinyConfig("unused");
  const PreparedSeed p = PrepareSeed(c, 0, false);
  ASSERT_EQ(p.forbidden.size(), 2u);
  for (const auto& f : p.forbidden) {
    EXPECT_GT(lm::NextTokenDistribution(p.vanilla_model(), f.prefix)[f.token],
              c.behavioral.type2.xi);
    bool found = false;
    for (const auto& u : p.data.forget)
      if (u.size() > f.prefix.size() &&
          std::equal(f.prefix.begin(), f.prefix.end(), u.begin()) &&
          u[f.prefix.size()] == f.token)
        found = true;
    EXPECT_TRUE(found);
  }
}

TEST(ExperimentTest, SweepRowsCoverTheGrid) {
  const ExperimentConfig c = TinyConfig("unused");
  const std::vector<PreparedSeed> seeds = {PrepareSeed(c, 0, false)};
  const SweepSpec s{.axis = SweepAxis::kSteps, .grid = {1, 2},
                    .fixed = 1e-2, .methods = {"ga", "random-labels"}};
  const auto rows = Sweep(c, s, seeds);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].method, "ga");
  EXPECT_EQ(rows[1].point, 2.0);
  EXPECT_EQ(rows[1].steps_run, 2);
  const std::string csv = SweepCsv(rows);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(ExperimentTest, FullRunWritesArtifactsAndRepeats) {
  const fs::path base = fs::temp_directory_path() / "unlearnlab_harness";
  fs::remove_all(base);
  const ExperimentOutcome a = RunExperiment(TinyConfig(base / "a"));
  const ExperimentOutcome b = RunExperiment(TinyConfig(base / "b"));
  ASSERT_TRUE(a.ok()) << a.manifest.dump(2);
  // Per seed: vanilla, retrained, two methods, the type-II run.
  EXPECT_EQ(a.reports.size(), 10u);
  EXPECT_EQ(ReportsHash(a.reports), ReportsHash(b.reports));
  EXPECT_EQ(a.manifest["reports_hash"], ReportsHash(a.reports));
  for (const char* f : {"manifest.json", "config.snapshot.json",
                        "summary.csv", "seed-0/metrics.json",
                        "seed-1/checkpoints/vanilla.ckpt",
                        "seed-1/checkpoints/unlearned-ga+kl-in.ckpt",
                        "seed-0/trace-ga.csv", "seed-0/mia-ga.csv",
                        "seed-0/corpus/splits.json"}) {
    EXPECT_TRUE(fs::exists(base / "a" / f)) << f;
  }
  for (const auto& r : a.reports)
    EXPECT_NO_THROW(eval::MetricsReport::FromJson(r.ToJson()));
  fs::remove_all(base);
}

}  // namespace
}  // namespace unlearnlab::harness
