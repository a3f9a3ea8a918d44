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

#ifndef UNLEARNLAB_HARNESS_CONFIG_H_
#define UNLEARNLAB_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "unlearnlab/corpus/splits.h"
#include "unlearnlab/eval/metrics.h"
#include "unlearnlab/lm/model.h"
#include "unlearnlab/lm/train.h"
#include "unlearnlab/unlearn/run.h"

namespace unlearnlab::harness {

// One corpus domain: a random first-order chain over the alphabet, drawn
// fresh for every experiment seed.
struct DomainConfig {
  std::string name;
  double concentration = 2.0;
  double floor_mix = 0.05;
  int num_sequences = 100;
  int sequence_length = 32;
};

struct CorpusConfig {
  std::string alphabet = "abcdefghijklmnop";
  std::vector<DomainConfig> domains;
  int forget_domain = 0;
};

struct ModelConfig {
  lm::Arch arch = lm::Arch::kTinyDecoder;
  lm::DecoderConfig decoder;
};

// Settings shared by every unlearning run of an experiment.
struct UnlearnConfig {
  std::vector<std::string> methods;
  double learning_rate = 3e-4;
  int steps = 64;
  int batches = 0;
  unlearn::StopKind stop = unlearn::StopKind::kReachTarget;
  double tolerance = 0.02;
  std::optional<double> max_grad_norm = 1.0;
  lm::OptimizerKind optimizer = lm::OptimizerKind::kAdam;
  double forget_coef = 1.0;
  double retain_coef = 1.0;
};

struct Type2Config {
  bool enabled = false;
  int pairs = 5;
  double xi = 1e-2;
  std::string method = "ga";
  double learning_rate = 3e-4;
  int steps = 64;
};

struct BehavioralConfig {
  double type1_alpha = 2.0;
  Type2Config type2;
};

struct ExperimentConfig {
  CorpusConfig corpus;
  corpus::SplitSpec splits;  // its seed is ignored; see DeriveSeed
  ModelConfig model;
  lm::TrainConfig train;     // its seed is ignored
  UnlearnConfig unlearn;
  eval::MiaConfig mia;
  BehavioralConfig behavioral;
  std::vector<std::uint64_t> seeds = {0};
  std::filesystem::path output_dir = "runs/experiment";

  // Throws InvalidArgument if any part fails its own validation.
  void Validate() const;
};

// The default desk-scale experiment: a two-domain corpus (forget domain and
// a general domain) of 100 sequences each, seven methods, five seeds.
ExperimentConfig DefaultConfig();

// Missing keys take their DefaultConfig() values; unknown keys are errors.
ExperimentConfig ConfigFromJson(const nlohmann::json& j);
nlohmann::json ConfigToJson(const ExperimentConfig& c);
ExperimentConfig LoadConfig(const std::filesystem::path& path);

// 16 hex digits of FNV-1a over the canonical (sorted-key, compact) JSON.
std::string ConfigHash(const ExperimentConfig& c);
std::string Fnv1aHex(std::string_view bytes);

// Independent stream seed for `tag` under the experiment seed.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view tag);

unlearn::UnlearnRun MakeRun(const UnlearnConfig& u,
                            const unlearn::MethodSpec& method,
                            std::uint64_t seed);

}  // namespace unlearnlab::harness

#endif  // UNLEARNLAB_HARNESS_CONFIG_H_
