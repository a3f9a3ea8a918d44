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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "support/gradcheck.h"
#include "support/metric_oracles.h"
#include "unlearnlab/corpus/generator.h"
#include "unlearnlab/cost/flops.h"
#include "unlearnlab/eval/metrics.h"
#include "unlearnlab/harness/experiment.h"
#include "unlearnlab/harness/sweep.h"
#include "unlearnlab/lm/bigram.h"
#include "unlearnlab/lm/train.h"
#include "unlearnlab/lm/vocabulary.h"
#include "unlearnlab/unlearn/newton.h"
#include "unlearnlab/unlearn/step.h"

namespace {

using namespace unlearnlab;

// Pinned tolerances.
constexpr double kGradRelTol = 1e-4;
constexpr int kGradGraphs = 60;
constexpr double kNegationTol = 1e-12;
constexpr double kForgetRatioTol = 0.10;
constexpr double kRetainRatioTol = 0.05;
constexpr double kNewtonNllTol = 1e-3;
constexpr double kNewtonDupNorm = 1e-8;
constexpr double kGeneralDegradeTol = 0.10;
constexpr int kAllowedInversions = 1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string Fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

Outcome FlopsTable() {
  const std::map<std::string, std::string> want = {
      {"retraining", "1.08e23"},    {"ga", "2.95e17"},
      {"random-labels", "2.95e17"}, {"adversarial", "3.93e17"},
      {"ga+descent-in", "5.90e17"}, {"ga+descent-general", "5.90e17"},
      {"ga+kl-in", "5.90e17"},      {"ga+kl-general", "5.90e17"}};
  Outcome o{.pass = true};
  for (const auto& row : cost::CostTable({})) {
    const std::string got = cost::ToScientific3(row.flops);
    const auto it = want.find(row.method);
    if (it == want.end() || it->second != got) {
      o.pass = false;
      o.detail += row.method + "=" + got + " ";
    }
  }
  if (o.pass) o.detail = "8 rows match";
  return o;
}

Outcome GradientFidelity() {
  std::mt19937_64 rng(20260101);
  std::set<autodiff::OpKind> covered;
  double worst = 0.0;
  for (int i = 0; i < kGradGraphs; ++i) {
    testing::RandomGraph g = testing::BuildRandomGraph(rng);
    covered.insert(g.ops.begin(), g.ops.end());
    worst = std::max(worst, testing::MaxGradientError(g));
  }
  const std::size_t kinds =
      static_cast<std::size_t>(autodiff::OpKind::kCrossEntropy) + 1;
  return {.pass = worst < kGradRelTol && covered.size() == kinds,
          .detail = std::to_string(kGradGraphs) + " graphs, " +
                    std::to_string(covered.size()) + "/" +
                    std::to_string(kinds) + " op kinds, max rel err " +
                    Fmt("%.3g", worst)};
}

Outcome FrameworkReduction(const harness::PreparedSeed& p) {
  const lm::ModelParams& m0 = p.vanilla_model();
  const std::vector<lm::TokenSequence> batch(p.data.forget.begin(),
                                             p.data.forget.begin() + 4);
  const lm::OptimizerConfig sgd{.kind = lm::OptimizerKind::kSgd};
  constexpr double kLr = 0.05;
  lm::ModelParams trained = m0;
  lm::Optimizer opt_t(sgd, trained);
  lm::TrainStep(trained, batch, opt_t, kLr);
  lm::ModelParams unlearned = m0;
  lm::Optimizer opt_u(sgd, unlearned);
  unlearn::MethodSpec spec{.name = "reduction",
                           .reference = unlearn::ReferenceKind::kDeltaTrue,
                           .forget_sign = unlearn::ForgetSign::kAscent,
                           .retain_term = unlearn::RetainTerm::kNone};
  unlearn::UnifiedStep(unlearned, unlearn::WholeSequences(batch), {}, spec,
                       kLr, opt_u);
  double worst = 0.0, moved = 0.0;
  for (std::size_t k = 0; k < m0.params.size(); ++k) {
    const auto& a = trained.params[k].value;
    const auto& b = unlearned.params[k].value;
    const auto& z = m0.params[k].value;
    for (std::size_t i = 0; i < z.size(); ++i) {
      worst = std::max(worst, std::abs((b[i] - z[i]) + (a[i] - z[i])));
      moved = std::max(moved, std::abs(a[i] - z[i]));
    }
  }
  return {.pass = worst <= kNegationTol && moved > 0.0,
          .detail = "max |d_unlearn + d_train| = " + Fmt("%.3g", worst) +
                    ", max |d_train| = " + Fmt("%.3g", moved)};
}

struct SeedRuns {
  std::map<std::string, lm::ModelParams> unlearned;
  std::map<std::string, int> steps;
};

Outcome RetrainEquivalence(const std::vector<harness::PreparedSeed>& seeds,
                           const std::vector<SeedRuns>& runs) {
  std::vector<double> forget_ratio, retain_ratio;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const auto& p = seeds[s];
    const auto& ga = runs[s].unlearned.at("ga");
    forget_ratio.push_back(eval::Perplexity(ga, p.data.forget) /
                           eval::Perplexity(*p.retrained, p.data.forget));
    retain_ratio.push_back(eval::Perplexity(ga, p.data.retain) /
                           eval::Perplexity(*p.vanilla, p.data.retain));
  }
  const double f = Median(forget_ratio), r = Median(retain_ratio);
  return {.pass = std::abs(f - 1.0) < kForgetRatioTol &&
                  std::abs(r - 1.0) < kRetainRatioTol,
          .detail = "median U ppl unlearned/retrained " + Fmt("%.4f", f) +
                    ", median D\\U ppl unlearned/vanilla " + Fmt("%.4f", r)};
}

Outcome MiaDirection(const harness::ExperimentConfig& cfg,
                     const std::vector<harness::PreparedSeed>& seeds,
                     const std::vector<SeedRuns>& runs,
                     const std::vector<std::string>& methods) {
  std::vector<double> vanilla_auc;
  for (const auto& p : seeds)
    vanilla_auc.push_back(eval::MiaAucSweep(*p.vanilla, p.data.forget,
                                            p.approximate, cfg.mia)
                              .best_auc);
  const double v = Median(vanilla_auc);
  Outcome o{.pass = true, .detail = "vanilla " + Fmt("%.3f", v)};
  for (const auto& m : methods) {
    std::vector<double> auc;
    for (std::size_t s = 0; s < seeds.size(); ++s)
      auc.push_back(eval::MiaAucSweep(runs[s].unlearned.at(m),
                                      seeds[s].data.forget,
                                      seeds[s].approximate, cfg.mia)
                        .best_auc);
    const double u = Median(auc);
    const bool ok = v > u && std::abs(u - 0.5) < std::abs(v - 0.5);
    o.pass = o.pass && ok;
    o.detail += ", " + m + " " + Fmt("%.3f", u) + (ok ? "" : " (x)");
  }
  return o;
}

Outcome MetricOracles() {
  int bad = 0, total = 0;
  std::string which;
  for (const auto& c : testing::MetricOracleCases()) {
    ++total;
    if (!(std::abs(c.got - c.want) <= testing::kMetricOracleTolerance)) {
      ++bad;
      which += " " + c.name;
    }
  }
  return {.pass = bad == 0,
          .detail = std::to_string(total - bad) + "/" + std::to_string(total) +
                    " cases" + which};
}

std::vector<lm::TokenSequence> DenseChain(int n, int len, std::uint64_t seed) {
  corpus::GeneratorSpec g;
  g.alphabet = "abcdefgh";
  g.markov = corpus::RandomChain(8, 2.0, 0.2, seed);
  g.num_sequences = n;
  g.sequence_length = len;
  g.seed = seed + 1;
  const lm::Vocabulary v(g.alphabet);
  std::vector<lm::TokenSequence> out;
  for (const auto& s : corpus::Generate(g)) out.push_back(v.Encode(s));
  return out;
}

Outcome NewtonUnlearning() {
  // |U| / |D| = 10 / 200.
  const auto d = DenseChain(200, 64, 5);
  const std::vector<lm::TokenSequence> u(d.begin(), d.begin() + 10);
  const std::vector<lm::TokenSequence> rest(d.begin() + 10, d.end());
  const lm::ModelParams init = lm::ModelParams::InitBigram(8);
  const lm::ModelParams vanilla = lm::FitBigram(init, lm::CountBigrams(d, 8));
  const auto step = unlearn::NewtonUnlearnBigram(vanilla, d, u);
  const lm::ModelParams oracle =
      lm::FitBigram(init, lm::CountBigrams(rest, 8));
  const double gap =
      lm::MeanTokenNll(step.model, rest) - lm::MeanTokenNll(oracle, rest);

  // U is one full copy of a corpus that D holds 20 times.
  const auto base = DenseChain(10, 64, 6);
  std::vector<lm::TokenSequence> dup;
  for (int r = 0; r < 20; ++r) dup.insert(dup.end(), base.begin(), base.end());
  const lm::ModelParams dv = lm::FitBigram(init, lm::CountBigrams(dup, 8));
  const double norm = unlearn::NewtonUnlearnBigram(dv, dup, base).step_norm;
  return {.pass = gap < kNewtonNllTol && norm < kNewtonDupNorm,
          .detail = "NLL gap to retrain optimum " + Fmt("%.3g", gap) +
                    " nats/token, duplicated-U step norm " +
                    Fmt("%.3g", norm)};
}

Outcome TypeTwoConstraint(const harness::ExperimentConfig& cfg,
                          const std::vector<harness::PreparedSeed>& seeds) {
  const double xi = cfg.behavioral.type2.xi;
  std::vector<double> violation, degrade;
  int satisfied = 0;
  for (const auto& p : seeds) {
    if (p.forbidden.size() !=
        static_cast<std::size_t>(cfg.behavioral.type2.pairs)) {
      return {.pass = false, .detail = "seed " + std::to_string(p.seed) +
                                       " has too few forbidden pairs"};
    }
    const auto r = harness::RunType2(cfg, p);
    const double v = eval::Type2Violation(r.model, p.forbidden);
    violation.push_back(v);
    satisfied += v <= xi;
    degrade.push_back(eval::Perplexity(r.model, p.data.general) /
                          eval::Perplexity(*p.vanilla, p.data.general) -
                      1.0);
  }
  const double v = Median(violation), g = Median(degrade);
  return {.pass = v <= xi && g < kGeneralDegradeTol,
          .detail = "median violation " + Fmt("%.4g", v) + " (" +
                    std::to_string(satisfied) + "/" +
                    std::to_string(seeds.size()) +
                    " seeds <= xi), median general ppl change " +
                    Fmt("%+.2f%%", 100 * g)};
}

Outcome HyperparameterTrend(const harness::ExperimentConfig& cfg,
                            const std::vector<harness::PreparedSeed>& seeds) {
  // Learning-rate sweep at 4 steps.
  harness::SweepSpec lr{.axis = harness::SweepAxis::kLearningRate,
                        .grid = {1e-3, 3.16e-3, 1e-2, 3.16e-2, 1e-1},
                        .fixed = 4,
                        .methods = {"ga"}};
  const auto lr_rows = harness::Sweep(cfg, lr, seeds);
  std::vector<double> medians;
  for (double point : lr.grid) {
    std::vector<double> v;
    for (const auto& r : lr_rows)
      if (r.point == point) v.push_back(r.forget_ppl);
    medians.push_back(Median(v));
  }
  int inversions = 0;
  for (std::size_t i = 1; i < medians.size(); ++i)
    inversions += medians[i] < medians[i - 1];

  // Step sweep at a fixed lr, one pass over U in `steps` batches.
  harness::SweepSpec st{.axis = harness::SweepAxis::kSteps,
                        .grid = {1, 2, 4, 8, 16, 32},
                        .fixed = 1e-2,
                        .methods = {"ga+descent-in", "random-labels"}};
  std::map<std::string, int> flags;
  for (const auto& r : harness::Sweep(cfg, st, seeds))
    flags[r.method] += r.instability;

  std::string curve;
  for (double m : medians) curve += (curve.empty() ? "" : " ") + Fmt("%.2f", m);
  const bool lr_ok = inversions <= kAllowedInversions;
  const bool steps_ok = flags["ga+descent-in"] < flags["random-labels"];
  return {.pass = lr_ok && steps_ok,
          .detail = "GA forget ppl by lr [" + curve + "] " +
                    std::to_string(inversions) +
                    " inversions; instability flags ga+descent-in " +
                    std::to_string(flags["ga+descent-in"]) +
                    " vs random-labels " +
                    std::to_string(flags["random-labels"])};
}

Outcome Determinism(const harness::ExperimentConfig& base) {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "unlearnlab_acceptance";
  fs::remove_all(root);
  harness::ExperimentConfig cfg = base;
  cfg.seeds = {0};
  cfg.output_dir = root / "first";
  const auto a = harness::RunExperiment(cfg);
  cfg.output_dir = root / "second";
  const auto b = harness::RunExperiment(cfg);
  const std::string ha = harness::ReportsHash(a.reports);
  const std::string hb = harness::ReportsHash(b.reports);
  fs::remove_all(root);
  return {.pass = a.ok() && b.ok() && ha == hb && !a.reports.empty(),
          .detail = std::to_string(a.reports.size()) + " reports, hashes " +
                    ha + " / " + hb};
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const harness::ExperimentConfig cfg = harness::DefaultConfig();
  const std::vector<std::string> mia_methods = {
      "ga", "ga+descent-in", "ga+descent-general", "ga+kl-in",
      "ga+kl-general"};

  std::vector<harness::PreparedSeed> seeds;
  std::vector<SeedRuns> runs;
  for (std::uint64_t s : cfg.seeds) {
    seeds.push_back(harness::PrepareSeed(cfg, s, true));
    SeedRuns r;
    for (const auto& m : mia_methods) {
      auto res =
          harness::RunMethod(cfg, seeds.back(), unlearn::MethodByName(m));
      r.steps[m] = static_cast<int>(res.trace.steps.size());
      r.unlearned.emplace(m, std::move(res.model));
    }
    runs.push_back(std::move(r));
  }

  using Check = std::function<Outcome()>;
  const std::vector<std::pair<std::string, Check>> checks = {
      {"FLOPs table", FlopsTable},
      {"gradient fidelity", GradientFidelity},
      {"framework reduction", [&] { return FrameworkReduction(seeds[0]); }},
      {"retrain-oracle equivalence",
       [&] { return RetrainEquivalence(seeds, runs); }},
      {"MIA direction",
       [&] { return MiaDirection(cfg, seeds, runs, mia_methods); }},
      {"metric unit oracles", MetricOracles},
      {"Newton unlearning", NewtonUnlearning},
      {"type-II constraint", [&] { return TypeTwoConstraint(cfg, seeds); }},
      {"hyperparameter trend",
       [&] { return HyperparameterTrend(cfg, seeds); }},
      {"determinism", [&] { return Determinism(cfg); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {.pass = false, .detail = std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s  (%s)\n", i + 1,
                o.pass ? "PASS" : "FAIL", checks[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  std::printf("%d/%zu criteria passed in %.0f s\n",
              static_cast<int>(checks.size()) - failed, checks.size(), secs);
  return failed == 0 ? 0 : 1;
}
