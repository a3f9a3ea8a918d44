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

// Command-line driver. Every subcommand rebuilds the seed's corpus and splits
// from the config, so checkpoints only carry weights.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unlearnlab/cost/flops.h"
#include "unlearnlab/corpus/io.h"
#include "unlearnlab/error.h"
#include "unlearnlab/harness/experiment.h"
#include "unlearnlab/harness/sweep.h"
#include "unlearnlab/lm/checkpoint.h"

namespace fs = std::filesystem;
using namespace unlearnlab;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

harness::ExperimentConfig Config(const Common& c) {
  return c.config.empty() ? harness::DefaultConfig()
                          : harness::LoadConfig(c.config);
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error("cannot write " + path.string());
}

void AddCommon(CLI::App* app, Common& c, bool out_required) {
  app->add_option("--config", c.config, "experiment config (JSON)")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "experiment seed");
  auto* out = app->add_option("--out", c.out, "output path");
  if (out_required) out->required();
}

harness::PreparedSeed WithVanilla(const harness::ExperimentConfig& cfg,
                                  std::uint64_t seed,
                                  const std::string& vanilla_path) {
  harness::PreparedSeed p = harness::PrepareData(cfg, seed);
  if (vanilla_path.empty()) {
    harness::TrainVanilla(cfg, p);
  } else {
    harness::SetVanilla(cfg, p, lm::LoadCheckpoint(fs::path(vanilla_path)));
  }
  return p;
}

// The report must survive its own validation on reload.
int EmitReport(const eval::MetricsReport& r, const std::string& out) {
  const std::string text = r.ToJson().dump(2) + "\n";
  eval::MetricsReport::FromJson(nlohmann::json::parse(text));
  if (out.empty()) {
    std::cout << text;
  } else {
    WriteFile(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale LLM unlearning experiments"};
  app.require_subcommand(1);

  Common gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "write the corpus splits");
  AddCommon(gen_cmd, gen, true);

  Common train;
  auto* train_cmd = app.add_subcommand("train", "train the vanilla model");
  AddCommon(train_cmd, train, true);

  Common retrain;
  auto* retrain_cmd =
      app.add_subcommand("retrain", "train the oracle on the retain set");
  AddCommon(retrain_cmd, retrain, true);

  Common unl;
  std::string unl_method, unl_vanilla, unl_trace;
  auto* unl_cmd = app.add_subcommand("unlearn", "run one unlearning method");
  AddCommon(unl_cmd, unl, true);
  unl_cmd->add_option("--method", unl_method, "method name")->required();
  unl_cmd->add_option("--vanilla", unl_vanilla,
                      "vanilla checkpoint (trained when absent)");
  unl_cmd->add_option("--trace", unl_trace, "per-step trace CSV");

  Common ev;
  std::string ev_model, ev_vanilla, ev_retrained, ev_label;
  auto* ev_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  AddCommon(ev_cmd, ev, false);
  ev_cmd->add_option("--model", ev_model, "checkpoint to evaluate")
      ->required()
      ->check(CLI::ExistingFile);
  ev_cmd->add_option("--vanilla", ev_vanilla, "vanilla checkpoint");
  ev_cmd->add_option("--retrained", ev_retrained,
                     "retrained checkpoint, enables type-I");
  ev_cmd->add_option("--label", ev_label, "method label for provenance");

  Common sw;
  std::string sw_axis = "lr";
  std::vector<double> sw_grid;
  double sw_fixed = 4;
  std::vector<std::string> sw_methods;
  auto* sw_cmd = app.add_subcommand("sweep", "lr or step-count sweep");
  AddCommon(sw_cmd, sw, true);
  sw_cmd->add_option("--axis", sw_axis, "lr or steps")
      ->check(CLI::IsMember({"lr", "steps"}));
  sw_cmd->add_option("--grid", sw_grid, "increasing grid")->required()->delimiter(',');
  sw_cmd->add_option("--fixed", sw_fixed,
                     "steps for an lr sweep, lr for a steps sweep");
  sw_cmd->add_option("--methods", sw_methods, "methods (default: config)")
      ->delimiter(',');

  bool cost_csv = false;
  cost::CostInputs cost_in;
  auto* cost_cmd = app.add_subcommand("cost-table", "FLOPs per method");
  cost_cmd->add_flag("--csv", cost_csv, "CSV instead of a table");
  cost_cmd->add_option("--params", cost_in.params);
  cost_cmd->add_option("--pretraining-tokens", cost_in.pretraining_tokens);
  cost_cmd->add_option("--forget-tokens", cost_in.forget_tokens);
  cost_cmd->add_option("--epochs", cost_in.epochs);

  Common show;
  auto* show_cmd =
      app.add_subcommand("show-config", "print the resolved config");
  AddCommon(show_cmd, show, false);

  Common full;
  auto* full_cmd =
      app.add_subcommand("full-experiment", "every seed, method and report");
  AddCommon(full_cmd, full, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) {
      const auto cfg = Config(gen);
      const auto p = harness::PrepareData(cfg, gen.seed);
      corpus::WriteSplits(gen.out, p.splits);
      return 0;
    }
    if (*train_cmd) {
      const auto cfg = Config(train);
      auto p = harness::PrepareData(cfg, train.seed);
      harness::TrainVanilla(cfg, p);
      lm::SaveCheckpoint(fs::path(train.out), *p.vanilla);
      return 0;
    }
    if (*retrain_cmd) {
      const auto cfg = Config(retrain);
      auto p = harness::PrepareData(cfg, retrain.seed);
      harness::TrainRetrained(cfg, p);
      lm::SaveCheckpoint(fs::path(retrain.out), *p.retrained);
      return 0;
    }
    if (*unl_cmd) {
      const auto cfg = Config(unl);
      const auto p = WithVanilla(cfg, unl.seed, unl_vanilla);
      const auto r =
          harness::RunMethod(cfg, p, unlearn::MethodByName(unl_method));
      lm::SaveCheckpoint(fs::path(unl.out), r.model);
      if (!unl_trace.empty()) WriteFile(unl_trace, harness::TraceCsv(r.trace));
      std::fprintf(stderr, "%s: %zu steps, target %s, %d clipped\n",
                   unl_method.c_str(), r.trace.steps.size(),
                   r.trace.target_reached ? "reached" : "not reached",
                   r.trace.instability_count());
      return 0;
    }
    if (*ev_cmd) {
      const auto cfg = Config(ev);
      auto p = WithVanilla(cfg, ev.seed, ev_vanilla);
      if (!ev_retrained.empty())
        p.retrained = lm::LoadCheckpoint(fs::path(ev_retrained));
      const lm::ModelParams model = lm::LoadCheckpoint(fs::path(ev_model));
      const std::string label =
          ev_label.empty() ? std::string(lm::RoleName(model.role)) : ev_label;
      return EmitReport(harness::EvaluateModel(cfg, p, model, label), ev.out);
    }
    if (*sw_cmd) {
      const auto cfg = Config(sw);
      harness::SweepSpec spec;
      spec.axis = harness::ParseSweepAxis(sw_axis);
      spec.grid = sw_grid;
      spec.fixed = sw_fixed;
      spec.methods = sw_methods.empty() ? cfg.unlearn.methods : sw_methods;
      spec.Validate();
      // An explicit --seed narrows the sweep to that seed.
      std::vector<std::uint64_t> which = cfg.seeds;
      if (sw_cmd->count("--seed")) which = {sw.seed};
      std::vector<harness::PreparedSeed> seeds;
      for (std::uint64_t s : which)
        seeds.push_back(harness::PrepareSeed(cfg, s, false));
      WriteFile(sw.out, harness::SweepCsv(harness::Sweep(cfg, spec, seeds)));
      return 0;
    }
    if (*cost_cmd) {
      const auto rows = cost::CostTable(cost_in);
      std::cout << (cost_csv ? cost::CostTableCsv(rows)
                             : cost::CostTableText(rows));
      return 0;
    }
    if (*show_cmd) {
      const auto cfg = Config(show);
      const std::string text = harness::ConfigToJson(cfg).dump(2) + "\n";
      if (show.out.empty()) {
        std::cout << text;
      } else {
        WriteFile(show.out, text);
      }
      return 0;
    }
    if (*full_cmd) {
      auto cfg = Config(full);
      if (!full.out.empty()) cfg.output_dir = full.out;
      const auto outcome = harness::RunExperiment(cfg);
      for (const auto& r : outcome.reports)
        eval::MetricsReport::FromJson(r.ToJson());
      std::fprintf(stderr, "%zu reports in %s, manifest %s\n",
                   outcome.reports.size(), cfg.output_dir.c_str(),
                   outcome.ok() ? "ok" : "has failures");
      return outcome.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
