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

#ifndef UNLEARNLAB_CORPUS_SPLITS_H_
#define UNLEARNLAB_CORPUS_SPLITS_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "unlearnlab/corpus/generator.h"

namespace unlearnlab::corpus {

// A training corpus assembled from one or more domains. The forget set is
// drawn from `forget_domain`; its generator also produces the approximate
// set.
struct CorpusSpec {
  std::vector<std::string> domain_names;
  std::vector<GeneratorSpec> domains;
  int forget_domain = 0;

  void Validate() const;
  const GeneratorSpec& forget_generator() const;
};

struct Corpus {
  std::vector<std::string> sequences;
  std::vector<int> domain;  // domain index per sequence
};

// Concatenates each domain's generated sequences in domain order.
Corpus GenerateCorpus(const CorpusSpec& spec);

// Sequence-level view of the data splits. Index lists point into `train`.
struct CorpusSplits {
  std::vector<std::string> train;      // D
  std::vector<int> train_domain;
  std::vector<std::size_t> forget;     // U
  std::vector<std::size_t> retain;     // D \ U
  std::vector<std::size_t> retain_sample;  // R: forget-domain part of D \ U
  std::vector<std::size_t> general;    // G: held-out sample of D \ U
  std::vector<std::string> approximate;  // A: fresh, disjoint from D

  std::vector<std::string> Select(const std::vector<std::size_t>& idx) const;
  // Throws InvalidArgument if any split invariant is violated.
  void CheckInvariants() const;
};

struct SplitSpec {
  double forget_fraction = 0.05;
  int retain_sample_size = 10;
  int approx_size = 20;
  int general_size = 40;
  std::uint64_t seed = 0;
};

// Membership of U, R and G depends on sequence content and the seed, not on
// the order of `corpus`, so shuffling D leaves every split unchanged.
// Throws InvalidArgument for forget_fraction outside (0, 1) or sizes the
// corpus cannot supply.
CorpusSplits MakeSplits(const Corpus& corpus, const CorpusSpec& spec,
                        const SplitSpec& split);

}  // namespace unlearnlab::corpus

#endif  // UNLEARNLAB_CORPUS_SPLITS_H_
