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

#ifndef UNLEARNLAB_CORPUS_GENERATOR_H_
#define UNLEARNLAB_CORPUS_GENERATOR_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace unlearnlab::corpus {

// Order-k Markov chain over `alphabet`. Row c of `transition` is the
// distribution of the next symbol given the last k symbols, encoded as the
// base-V number c = s_1 * V^(k-1) + ... + s_k.
struct MarkovChain {
  int order = 1;
  std::vector<std::vector<double>> transition;  // V^order rows of V entries
  // Distribution of the first `order` symbols, over the V^order contexts.
  // Empty means the stationary distribution.
  std::vector<double> initial;
};

// Sentences built from templates such as "the {animal} ran." with each
// {slot} replaced by a uniformly chosen filler.
struct TemplateGrammar {
  std::vector<std::string> templates;
  std::map<std::string, std::vector<std::string>> slots;
};

enum class GeneratorKind { kMarkovChain, kTemplateGrammar };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kMarkovChain;
  std::string alphabet = "abcdefghijklmnop";  // Markov state symbols
  MarkovChain markov;
  TemplateGrammar grammar;
  int num_sequences = 100;
  int sequence_length = 32;
  std::uint64_t seed = 0;
  // Stored entropy rate in nats/symbol; checked against the matrix when set.
  std::optional<double> entropy_rate;

  // Throws InvalidArgument on a malformed spec: non-stochastic rows
  // (tolerance 1e-12), wrong row counts, unknown template slots, ...
  void Validate() const;
};

// Deterministic for a fixed spec (including its seed).
std::vector<std::string> Generate(const GeneratorSpec& spec);

// Limiting distribution over contexts reached from spec.markov.initial (or
// from uniform when no initial distribution is given).
std::vector<double> StationaryDistribution(const MarkovChain& chain,
                                           int vocab_size);

// sum_c pi_c * H(transition[c]) in nats per symbol.
double EntropyRate(const MarkovChain& chain, int vocab_size);

// Random chain whose rows mix a Dirichlet(concentration) draw with the
// uniform distribution: row = (1 - floor_mix) * dirichlet + floor_mix / V.
MarkovChain RandomChain(int vocab_size, double concentration, double floor_mix,
                        std::uint64_t seed);

// 64-bit mixing hash of a string under a seed (FNV-1a then SplitMix64).
std::uint64_t HashString(std::string_view s, std::uint64_t seed);

}  // namespace unlearnlab::corpus

#endif  // UNLEARNLAB_CORPUS_GENERATOR_H_
