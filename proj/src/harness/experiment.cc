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

#include "unlearnlab/harness/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "unlearnlab/corpus/io.h"
#include "unlearnlab/error.h"
#include "unlearnlab/lm/checkpoint.h"

namespace unlearnlab::harness {

using nlohmann::json;

namespace {

std::vector<TokenSequence> Encode(const lm::Vocabulary& vocab,
                                  const std::vector<std::string>& seqs) {
  std::vector<TokenSequence> out;
  for (const auto& s : seqs) out.push_back(vocab.Encode(s));
  return out;
}

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
}

std::string ReadText(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string CheckpointHash(const lm::ModelParams& m) {
  std::ostringstream s;
  lm::SaveCheckpoint(s, m);
  return Fnv1aHex(s.str());
}

}  // namespace

const lm::ModelParams& PreparedSeed::vanilla_model() const {
  if (!vanilla) throw InvalidArgument("vanilla model has not been trained");
  return *vanilla;
}

corpus::CorpusSpec BuildCorpusSpec(const ExperimentConfig& cfg,
                                   std::uint64_t seed) {
  corpus::CorpusSpec spec;
  const int v = static_cast<int>(cfg.corpus.alphabet.size());
  for (std::size_t d = 0; d < cfg.corpus.domains.size(); ++d) {
    const DomainConfig& dc = cfg.corpus.domains[d];
    corpus::GeneratorSpec g;
    g.alphabet = cfg.corpus.alphabet;
    g.markov = corpus::RandomChain(
        v, dc.concentration, dc.floor_mix,
        DeriveSeed(seed, "chain-" + std::to_string(d)));
    g.num_sequences = dc.num_sequences;
    g.sequence_length = dc.sequence_length;
    g.seed = DeriveSeed(seed, "sample-" + std::to_string(d));
    spec.domain_names.push_back(dc.name);
    spec.domains.push_back(std::move(g));
  }
  spec.forget_domain = cfg.corpus.forget_domain;
  spec.Validate();
  return spec;
}

PreparedSeed PrepareData(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.Validate();
  PreparedSeed p;
  p.seed = seed;
  p.corpus_spec = BuildCorpusSpec(cfg, seed);
  const corpus::Corpus c = corpus::GenerateCorpus(p.corpus_spec);
  corpus::SplitSpec split = cfg.splits;
  split.seed = DeriveSeed(seed, "splits");
  p.splits = corpus::MakeSplits(c, p.corpus_spec, split);
  p.vocab = lm::Vocabulary(cfg.corpus.alphabet);
  p.data = unlearn::EncodeSplits(p.splits, p.vocab);
  p.train = Encode(p.vocab, p.splits.train);
  p.approximate = Encode(p.vocab, p.splits.approximate);
  const int v = p.vocab.size();
  p.init = cfg.model.arch == lm::Arch::kTinyDecoder
               ? lm::ModelParams::InitDecoder(v, cfg.model.decoder,
                                              DeriveSeed(seed, "init"))
               : lm::ModelParams::InitBigram(v);
  p.init.vocabulary = cfg.corpus.alphabet;
  return p;
}

namespace {

lm::TrainConfig SeededTrain(const ExperimentConfig& cfg, std::uint64_t seed) {
  lm::TrainConfig t = cfg.train;
  t.seed = DeriveSeed(seed, "train");
  return t;
}

}  // namespace

void TrainVanilla(const ExperimentConfig& cfg, PreparedSeed& p) {
  lm::ModelParams m = lm::Train(p.init, p.train, SeededTrain(cfg, p.seed));
  m.role = lm::ModelRole::kVanilla;
  SetVanilla(cfg, p, std::move(m));
}

void SetVanilla(const ExperimentConfig& cfg, PreparedSeed& p,
                lm::ModelParams vanilla) {
  p.vanilla = std::move(vanilla);
  p.target = eval::ApproxRetrainTarget(*p.vanilla, p.approximate);
  p.forbidden.clear();
  const Type2Config& t2 = cfg.behavioral.type2;
  if (t2.enabled) {
    p.forbidden = SelectForbiddenPairs(
        *p.vanilla, p.data.forget,
        p.corpus_spec.forget_generator().markov, t2.pairs, t2.xi);
  }
}

void TrainRetrained(const ExperimentConfig& cfg, PreparedSeed& p) {
  p.retrained =
      unlearn::RetrainOracle(p.init, p.data.retain, SeededTrain(cfg, p.seed));
}

PreparedSeed PrepareSeed(const ExperimentConfig& cfg, std::uint64_t seed,
                         bool with_retrained) {
  PreparedSeed p = PrepareData(cfg, seed);
  TrainVanilla(cfg, p);
  if (with_retrained) TrainRetrained(cfg, p);
  return p;
}

std::vector<eval::ForbiddenPair> SelectForbiddenPairs(
    const lm::ModelParams& vanilla, std::span<const TokenSequence> forget,
    const corpus::MarkovChain& chain, int count, double xi) {
  if (chain.order != 1) {
    throw InvalidArgument("forbidden-pair selection needs a first-order chain");
  }
  struct Candidate {
    double chain_prob;
    std::size_t seq, pos;
  };
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < forget.size(); ++i) {
    const TokenSequence& s = forget[i];
    if (s.size() < 2) continue;
    const lm::Tensor probs = lm::PositionDistributions(vanilla, s);
    for (std::size_t t = 0; t + 1 < s.size(); ++t) {
      const auto next = static_cast<std::size_t>(s[t + 1]);
      if (probs(t, next) <= xi) continue;
      cands.push_back({chain.transition[static_cast<std::size_t>(s[t])][next],
                       i, t});
    }
  }
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.chain_prob < b.chain_prob;
                   });
  std::vector<eval::ForbiddenPair> out;
  for (const auto& c : cands) {
    if (static_cast<int>(out.size()) == count) break;
    const TokenSequence& s = forget[c.seq];
    out.push_back({TokenSequence(s.begin(), s.begin() + static_cast<long>(c.pos) + 1),
                   s[c.pos + 1]});
  }
  return out;
}

unlearn::UnlearnRun RunFor(const ExperimentConfig& cfg, const PreparedSeed& p,
                           const unlearn::MethodSpec& method) {
  unlearn::UnlearnRun run = MakeRun(cfg.unlearn, method, p.seed);
  if (run.stop.kind == unlearn::StopKind::kReachTarget) {
    run.stop.target_ppl = p.target.perplexity;
  }
  return run;
}

unlearn::UnlearnResult RunMethod(const ExperimentConfig& cfg,
                                 const PreparedSeed& p,
                                 const unlearn::MethodSpec& method) {
  return unlearn::RunUnlearning(p.vanilla_model(), p.data,
                                RunFor(cfg, p, method));
}

unlearn::ConstraintResult RunType2(const ExperimentConfig& cfg,
                                   const PreparedSeed& p) {
  const Type2Config& t2 = cfg.behavioral.type2;
  unlearn::UnlearnRun run =
      MakeRun(cfg.unlearn, unlearn::MethodByName(t2.method), p.seed);
  run.learning_rate = t2.learning_rate;
  run.steps = t2.steps;
  run.stop.kind = unlearn::StopKind::kFixedSteps;
  return unlearn::RunConstraintUnlearning(p.vanilla_model(), p.forbidden,
                                          p.data, run, t2.xi);
}

eval::MetricsReport EvaluateModel(const ExperimentConfig& cfg,
                                  const PreparedSeed& p,
                                  const lm::ModelParams& model,
                                  const std::string& method) {
  std::map<std::string, eval::SplitMetrics> splits{
      {"forget", eval::Evaluate(model, p.data.forget)},
      {"retain", eval::Evaluate(model, p.data.retain)},
      {"retain_sample", eval::Evaluate(model, p.data.retain_sample)},
      {"general", eval::Evaluate(model, p.data.general)},
      {"approximate", eval::Evaluate(model, p.approximate)}};
  eval::MiaResult mia =
      eval::MiaAucSweep(model, p.data.forget, p.approximate, cfg.mia);
  eval::BehavioralValues b;
  if (p.retrained) {
    // Prompts: U plus as many sequences of G.
    std::vector<TokenSequence> prompts = p.data.forget;
    const std::size_t extra = std::min(p.data.forget.size(), p.data.general.size());
    prompts.insert(prompts.end(), p.data.general.begin(),
                   p.data.general.begin() + static_cast<long>(extra));
    b.type1 = eval::Type1Measure(model, *p.retrained, prompts,
                                 cfg.behavioral.type1_alpha);
  }
  if (!p.forbidden.empty()) b.type2 = eval::Type2Violation(model, p.forbidden);
  return eval::MetricsReport(
      {.role = std::string(lm::RoleName(model.role)),
       .method = method,
       .config_hash = ConfigHash(cfg),
       .seed = p.seed},
      std::move(splits), std::move(mia), b);
}

std::string TraceCsv(const unlearn::UnlearnTrace& trace) {
  std::string out = "step,forget_ppl,retain_ppl,grad_norm,clipped\n";
  out += "0," + Num(trace.initial_forget_ppl) + "," +
         Num(trace.initial_retain_ppl) + ",,\n";
  for (const auto& r : trace.steps) {
    out += std::to_string(r.step) + "," + Num(r.forget_ppl) + "," +
           Num(r.retain_ppl) + "," + Num(r.grad_norm) + "," +
           (r.clipped ? "1" : "0") + "\n";
  }
  return out;
}

bool ExperimentOutcome::ok() const {
  return manifest.value("ok", false);
}

std::string ReportsHash(const std::vector<eval::MetricsReport>& reports) {
  std::string all;
  for (const auto& r : reports) all += r.ToJson().dump() + "\n";
  return Fnv1aHex(all);
}

ExperimentOutcome RunExperiment(const ExperimentConfig& cfg) {
  cfg.Validate();
  namespace fs = std::filesystem;
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  WriteText(out / "config.snapshot.json", ConfigToJson(cfg).dump(2) + "\n");

  ExperimentOutcome outcome;
  json runs = json::array();
  json isolation = json::array();
  bool ok = true;
  std::string summary =
      "seed,role,method,forget_ppl,retain_ppl,general_ppl,approximate_ppl,"
      "forget_acc,best_auc,type1,type2\n";

  auto record = [&](std::uint64_t seed, const std::string& stage,
                    const std::string& error) {
    json r = {{"seed", seed}, {"stage", stage},
              {"status", error.empty() ? "ok" : "failed"}};
    if (!error.empty()) {
      r["error"] = error;
      ok = false;
    }
    runs.push_back(r);
  };

  for (std::uint64_t seed : cfg.seeds) {
    const fs::path dir = out / ("seed-" + std::to_string(seed));
    fs::create_directories(dir / "checkpoints");
    std::vector<eval::MetricsReport> seed_reports;
    auto add_report = [&](eval::MetricsReport r, const std::string& tag) {
      WriteText(dir / ("mia-" + tag + ".csv"), r.MiaCsv());
      const auto& pv = r.provenance();
      auto opt = [](const std::optional<double>& v) {
        return v ? Num(*v) : std::string();
      };
      summary += std::to_string(pv.seed) + "," + pv.role + "," + pv.method +
                 "," + Num(r.split("forget").perplexity) + "," +
                 Num(r.split("retain").perplexity) + "," +
                 Num(r.split("general").perplexity) + "," +
                 Num(r.split("approximate").perplexity) + "," +
                 Num(r.split("forget").accuracy) + "," +
                 Num(r.mia()->best_auc) + "," + opt(r.behavioral().type1) +
                 "," + opt(r.behavioral().type2) + "\n";
      seed_reports.push_back(std::move(r));
    };

    PreparedSeed p;
    try {
      p = PrepareData(cfg, seed);
      corpus::WriteSplits(dir / "corpus", p.splits);
      TrainVanilla(cfg, p);
      lm::SaveCheckpoint(dir / "checkpoints" / "vanilla.ckpt", *p.vanilla);
      TrainRetrained(cfg, p);
      lm::SaveCheckpoint(dir / "checkpoints" / "retrained.ckpt", *p.retrained);
      record(seed, "prepare", "");
    } catch (const std::exception& e) {
      record(seed, "prepare", e.what());
      continue;
    }
    const std::string vanilla_file =
        Fnv1aHex(ReadText(dir / "checkpoints" / "vanilla.ckpt"));
    const std::string vanilla_mem = CheckpointHash(*p.vanilla);

    for (const auto& [model, tag] :
         {std::pair{&*p.vanilla, "vanilla"}, std::pair{&*p.retrained, "retrained"}}) {
      try {
        add_report(EvaluateModel(cfg, p, *model, ""), tag);
        record(seed, std::string("evaluate-") + tag, "");
      } catch (const std::exception& e) {
        record(seed, std::string("evaluate-") + tag, e.what());
      }
    }
    for (const auto& name : cfg.unlearn.methods) {
      const std::string stage = "unlearn-" + name;
      try {
        const unlearn::UnlearnResult r =
            RunMethod(cfg, p, unlearn::MethodByName(name));
        lm::SaveCheckpoint(dir / "checkpoints" / ("unlearned-" + name + ".ckpt"),
                           r.model);
        WriteText(dir / ("trace-" + name + ".csv"), TraceCsv(r.trace));
        add_report(EvaluateModel(cfg, p, r.model, name), name);
        json rec = {{"seed", seed}, {"stage", stage}, {"status", "ok"},
                    {"steps", r.trace.steps.size()},
                    {"target_reached", r.trace.target_reached},
                    {"instability", r.trace.instability_count()}};
        runs.push_back(rec);
      } catch (const std::exception& e) {
        record(seed, stage, e.what());
      }
    }
    if (!p.forbidden.empty()) {
      const std::string name = "type2-" + cfg.behavioral.type2.method;
      try {
        const unlearn::ConstraintResult r = RunType2(cfg, p);
        lm::SaveCheckpoint(dir / "checkpoints" / ("unlearned-" + name + ".ckpt"),
                           r.model);
        add_report(EvaluateModel(cfg, p, r.model, name), name);
        runs.push_back({{"seed", seed}, {"stage", "unlearn-" + name},
                        {"status", "ok"},
                        {"steps", r.trace.steps.size()},
                        {"satisfied", r.trace.satisfied}});
      } catch (const std::exception& e) {
        record(seed, "unlearn-" + name, e.what());
      }
    }

    const std::string after_file =
        Fnv1aHex(ReadText(dir / "checkpoints" / "vanilla.ckpt"));
    const std::string after_mem = CheckpointHash(*p.vanilla);
    const bool same = vanilla_file == after_file && vanilla_mem == after_mem &&
                      vanilla_file == vanilla_mem;
    if (!same) ok = false;
    isolation.push_back({{"seed", seed}, {"before", vanilla_file},
                         {"after", after_file}, {"ok", same}});

    json reports = json::array();
    for (const auto& r : seed_reports) reports.push_back(r.ToJson());
    WriteText(dir / "metrics.json", reports.dump(2) + "\n");
    for (auto& r : seed_reports) outcome.reports.push_back(std::move(r));
  }
  WriteText(out / "summary.csv", summary);
  outcome.manifest = {{"format", "unlearnlab-manifest"},
                      {"version", 1},
                      {"config_hash", ConfigHash(cfg)},
                      {"seeds", cfg.seeds},
                      {"runs", runs},
                      {"vanilla_isolation", isolation},
                      {"reports_hash", ReportsHash(outcome.reports)},
                      {"ok", ok}};
  WriteText(out / "manifest.json", outcome.manifest.dump(2) + "\n");
  return outcome;
}

}  // namespace unlearnlab::harness
