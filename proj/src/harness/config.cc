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

#include "unlearnlab/harness/config.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "unlearnlab/corpus/generator.h"
#include "unlearnlab/error.h"

namespace unlearnlab::harness {

using nlohmann::json;

namespace {

// Reads optional keys of one JSON object and rejects keys nobody asked for.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw FormatError(where_ + ": expected an object");
  }

  template <typename T>
  void Get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw FormatError(where_ + "." + key + ": " + e.what());
    }
  }

  const json* Child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  void Finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw FormatError(where_ + ": unknown key '" + k + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

const char* StopName(unlearn::StopKind k) {
  return k == unlearn::StopKind::kFixedSteps ? "fixed-steps" : "reach-target";
}

unlearn::StopKind ParseStop(const std::string& s) {
  if (s == "fixed-steps") return unlearn::StopKind::kFixedSteps;
  if (s == "reach-target") return unlearn::StopKind::kReachTarget;
  throw FormatError("unknown stop rule '" + s + "'");
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (seeds.empty()) throw InvalidArgument("config needs at least one seed");
  if (corpus.domains.empty()) throw InvalidArgument("config has no domains");
  if (corpus.forget_domain < 0 ||
      corpus.forget_domain >= static_cast<int>(corpus.domains.size())) {
    throw InvalidArgument("forget domain index out of range");
  }
  if (corpus.alphabet.size() < 2) {
    throw InvalidArgument("alphabet needs at least two symbols");
  }
  for (const auto& d : corpus.domains) {
    if (!(d.concentration > 0.0) || !(d.floor_mix >= 0.0 && d.floor_mix <= 1.0) ||
        d.num_sequences < 1 || d.sequence_length < 2) {
      throw InvalidArgument("domain '" + d.name + "' is malformed");
    }
    if (model.arch == lm::Arch::kTinyDecoder &&
        d.sequence_length > model.decoder.context) {
      throw InvalidArgument("domain '" + d.name +
                            "' sequences exceed the model context");
    }
  }
  train.Validate();
  mia.Validate();
  for (const auto& m : unlearn.methods) unlearn::MethodByName(m);
  if (!(unlearn.learning_rate > 0.0) || unlearn.steps < 0 ||
      unlearn.batches < 0 || !(unlearn.tolerance >= 0.0) ||
      unlearn.tolerance >= 1.0 || !(unlearn.forget_coef >= 0.0) ||
      !(unlearn.retain_coef >= 0.0)) {
    throw InvalidArgument("unlearn settings are malformed");
  }
  if (unlearn.max_grad_norm && !(*unlearn.max_grad_norm > 0.0)) {
    throw InvalidArgument("max grad norm must be positive");
  }
  if (!(behavioral.type1_alpha > 0.0) || behavioral.type1_alpha == 1.0) {
    throw InvalidArgument("type-I alpha must be positive and not 1");
  }
  const Type2Config& t2 = behavioral.type2;
  if (t2.enabled) {
    unlearn::MethodByName(t2.method);
    if (t2.pairs < 1 || !(t2.xi > 0.0 && t2.xi < 1.0) ||
        !(t2.learning_rate > 0.0) || t2.steps < 0) {
      throw InvalidArgument("type-II settings are malformed");
    }
  }
}

ExperimentConfig DefaultConfig() {
  ExperimentConfig c;
  c.corpus.domains = {{.name = "forget"}, {.name = "general"}};
  c.splits = {.forget_fraction = 0.05,
              .retain_sample_size = 10,
              .approx_size = 40,
              .general_size = 40,
              .seed = 0};
  c.train.learning_rate = 1e-2;
  c.train.batch_size = 8;
  c.train.epochs = 10;
  for (const auto& m : unlearn::AllMethods()) c.unlearn.methods.push_back(m.name);
  c.behavioral.type2.enabled = true;
  c.seeds = {0, 1, 2, 3, 4};
  c.output_dir = "runs/default";
  return c;
}

ExperimentConfig ConfigFromJson(const json& j) {
  ExperimentConfig c = DefaultConfig();
  Reader top(j, "config");
  if (const json* cj = top.Child("corpus")) {
    Reader r(*cj, "corpus");
    r.Get("alphabet", c.corpus.alphabet);
    r.Get("forget_domain", c.corpus.forget_domain);
    if (const json* dj = r.Child("domains")) {
      if (!dj->is_array()) throw FormatError("corpus.domains: expected a list");
      c.corpus.domains.clear();
      for (const auto& d : *dj) {
        DomainConfig dc;
        Reader rd(d, "corpus.domains[]");
        rd.Get("name", dc.name);
        rd.Get("concentration", dc.concentration);
        rd.Get("floor_mix", dc.floor_mix);
        rd.Get("num_sequences", dc.num_sequences);
        rd.Get("sequence_length", dc.sequence_length);
        rd.Finish();
        c.corpus.domains.push_back(dc);
      }
    }
    r.Finish();
  }
  if (const json* sj = top.Child("splits")) {
    Reader r(*sj, "splits");
    r.Get("forget_fraction", c.splits.forget_fraction);
    r.Get("retain_sample_size", c.splits.retain_sample_size);
    r.Get("approx_size", c.splits.approx_size);
    r.Get("general_size", c.splits.general_size);
    r.Finish();
  }
  if (const json* mj = top.Child("model")) {
    Reader r(*mj, "model");
    std::string arch(lm::ArchName(c.model.arch));
    r.Get("arch", arch);
    c.model.arch = lm::ParseArch(arch);
    r.Get("layers", c.model.decoder.layers);
    r.Get("dim", c.model.decoder.dim);
    r.Get("heads", c.model.decoder.heads);
    r.Get("context", c.model.decoder.context);
    r.Get("mlp_dim", c.model.decoder.mlp_dim);
    r.Finish();
  }
  if (const json* tj = top.Child("train")) {
    Reader r(*tj, "train");
    r.Get("learning_rate", c.train.learning_rate);
    r.Get("batch_size", c.train.batch_size);
    r.Get("epochs", c.train.epochs);
    std::string opt(lm::OptimizerName(c.train.optimizer.kind));
    r.Get("optimizer", opt);
    c.train.optimizer.kind = lm::ParseOptimizer(opt);
    r.Finish();
  }
  if (const json* uj = top.Child("unlearn")) {
    Reader r(*uj, "unlearn");
    r.Get("methods", c.unlearn.methods);
    r.Get("learning_rate", c.unlearn.learning_rate);
    r.Get("steps", c.unlearn.steps);
    r.Get("batches", c.unlearn.batches);
    std::string stop = StopName(c.unlearn.stop);
    r.Get("stop", stop);
    c.unlearn.stop = ParseStop(stop);
    r.Get("tolerance", c.unlearn.tolerance);
    if (const json* g = r.Child("max_grad_norm")) {
      c.unlearn.max_grad_norm =
          g->is_null() ? std::nullopt : std::optional<double>(g->get<double>());
    }
    std::string opt(lm::OptimizerName(c.unlearn.optimizer));
    r.Get("optimizer", opt);
    c.unlearn.optimizer = lm::ParseOptimizer(opt);
    r.Get("forget_coef", c.unlearn.forget_coef);
    r.Get("retain_coef", c.unlearn.retain_coef);
    r.Finish();
  }
  if (const json* mj = top.Child("mia")) {
    Reader r(*mj, "mia");
    r.Get("k_percent", c.mia.k_percent);
    r.Finish();
  }
  if (const json* bj = top.Child("behavioral")) {
    Reader r(*bj, "behavioral");
    r.Get("type1_alpha", c.behavioral.type1_alpha);
    if (const json* t2 = r.Child("type2")) {
      Reader rt(*t2, "behavioral.type2");
      Type2Config& t = c.behavioral.type2;
      rt.Get("enabled", t.enabled);
      rt.Get("pairs", t.pairs);
      rt.Get("xi", t.xi);
      rt.Get("method", t.method);
      rt.Get("learning_rate", t.learning_rate);
      rt.Get("steps", t.steps);
      rt.Finish();
    }
    r.Finish();
  }
  top.Get("seeds", c.seeds);
  std::string out = c.output_dir.string();
  top.Get("output_dir", out);
  c.output_dir = out;
  top.Finish();
  c.Validate();
  return c;
}

json ConfigToJson(const ExperimentConfig& c) {
  json domains = json::array();
  for (const auto& d : c.corpus.domains) {
    domains.push_back({{"name", d.name},
                       {"concentration", d.concentration},
                       {"floor_mix", d.floor_mix},
                       {"num_sequences", d.num_sequences},
                       {"sequence_length", d.sequence_length}});
  }
  const Type2Config& t = c.behavioral.type2;
  return {
      {"corpus",
       {{"alphabet", c.corpus.alphabet},
        {"domains", domains},
        {"forget_domain", c.corpus.forget_domain}}},
      {"splits",
       {{"forget_fraction", c.splits.forget_fraction},
        {"retain_sample_size", c.splits.retain_sample_size},
        {"approx_size", c.splits.approx_size},
        {"general_size", c.splits.general_size}}},
      {"model",
       {{"arch", lm::ArchName(c.model.arch)},
        {"layers", c.model.decoder.layers},
        {"dim", c.model.decoder.dim},
        {"heads", c.model.decoder.heads},
        {"context", c.model.decoder.context},
        {"mlp_dim", c.model.decoder.mlp_dim}}},
      {"train",
       {{"learning_rate", c.train.learning_rate},
        {"batch_size", c.train.batch_size},
        {"epochs", c.train.epochs},
        {"optimizer", lm::OptimizerName(c.train.optimizer.kind)}}},
      {"unlearn",
       {{"methods", c.unlearn.methods},
        {"learning_rate", c.unlearn.learning_rate},
        {"steps", c.unlearn.steps},
        {"batches", c.unlearn.batches},
        {"stop", StopName(c.unlearn.stop)},
        {"tolerance", c.unlearn.tolerance},
        {"max_grad_norm", c.unlearn.max_grad_norm
                              ? json(*c.unlearn.max_grad_norm)
                              : json(nullptr)},
        {"optimizer", lm::OptimizerName(c.unlearn.optimizer)},
        {"forget_coef", c.unlearn.forget_coef},
        {"retain_coef", c.unlearn.retain_coef}}},
      {"mia", {{"k_percent", c.mia.k_percent}}},
      {"behavioral",
       {{"type1_alpha", c.behavioral.type1_alpha},
        {"type2",
         {{"enabled", t.enabled},
          {"pairs", t.pairs},
          {"xi", t.xi},
          {"method", t.method},
          {"learning_rate", t.learning_rate},
          {"steps", t.steps}}}}},
      {"seeds", c.seeds},
      {"output_dir", c.output_dir.string()}};
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("config " + path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

std::string Fnv1aHex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ConfigHash(const ExperimentConfig& c) {
  // The output directory does not change results, so it is left out.
  json j = ConfigToJson(c);
  j.erase("output_dir");
  return Fnv1aHex(j.dump());
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view tag) {
  return corpus::HashString(tag, seed);
}

unlearn::UnlearnRun MakeRun(const UnlearnConfig& u,
                            const unlearn::MethodSpec& method,
                            std::uint64_t seed) {
  unlearn::UnlearnRun run;
  run.method = method;
  run.method.forget_coef = u.forget_coef;
  run.method.retain_coef = u.retain_coef;
  run.learning_rate = u.learning_rate;
  run.steps = u.steps;
  run.batches = u.batches;
  run.stop.kind = u.stop;
  run.stop.tolerance = u.tolerance;
  run.optimizer.kind = u.optimizer;
  run.max_grad_norm = u.max_grad_norm;
  run.seed = DeriveSeed(seed, "retain-general-" + method.name);
  return run;
}

}  // namespace unlearnlab::harness
