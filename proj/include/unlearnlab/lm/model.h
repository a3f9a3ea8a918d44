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

#ifndef UNLEARNLAB_LM_MODEL_H_
#define UNLEARNLAB_LM_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unlearnlab/autodiff/graph.h"
#include "unlearnlab/lm/vocabulary.h"

namespace unlearnlab::lm {

using autodiff::Tensor;

enum class Arch { kTinyDecoder, kBigram };
enum class ModelRole { kVanilla, kUnlearned, kRetrained };

std::string_view ArchName(Arch arch);
Arch ParseArch(std::string_view name);
std::string_view RoleName(ModelRole role);
ModelRole ParseRole(std::string_view name);

struct DecoderConfig {
  int layers = 2;
  int dim = 32;
  int heads = 2;
  int context = 64;  // T_max; prefixes must be shorter than this
  int mlp_dim = 128;

  bool operator==(const DecoderConfig&) const = default;
};

struct ParamArray {
  std::string name;
  Tensor value;
};

// Weights of one next-token model plus its architecture header.
//
// Tiny decoder: pre-LN transformer with learned positional embeddings,
// per-head projection matrices and a GELU MLP. Bigram: a VxV logit table,
// row a holding the logits of the token following a.
struct ModelParams {
  Arch arch = Arch::kBigram;
  int vocab_size = 0;
  DecoderConfig decoder;
  ModelRole role = ModelRole::kVanilla;
  std::string vocabulary;  // optional character table, for checkpoints
  std::vector<ParamArray> params;

  static ModelParams InitDecoder(int vocab_size, const DecoderConfig& config,
                                 std::uint64_t seed);
  // All-zero logits, i.e. the uniform model.
  static ModelParams InitBigram(int vocab_size);

  std::size_t ParamCount() const;
  bool AllFinite() const;
  const Tensor& Get(std::string_view name) const;
  Tensor& Get(std::string_view name);

  bool operator==(const ModelParams&) const;
};

// Parameter arrays bound as graph inputs, in ModelParams::params order.
struct ParamNodes {
  std::vector<autodiff::NodeId> ids;
};

ParamNodes BindParams(autodiff::Graph& graph, const ModelParams& model);

// Logits [n x V] for inputs tokens[0..n); row i scores tokens[i+1].
autodiff::NodeId BuildLogits(autodiff::Graph& graph, const ModelParams& model,
                             const ParamNodes& nodes,
                             std::span<const int> inputs);

// Throws InvalidArgument if `tokens` contains ids outside [0, V).
void CheckTokens(const ModelParams& model, std::span<const int> tokens);

// P(. | prefix). Throws on an empty prefix or a prefix of T_max or more
// tokens for the decoder.
std::vector<double> NextTokenDistribution(const ModelParams& model,
                                          std::span<const int> prefix);

// Next-token distributions for every prefix of `seq`: row i is
// P(. | seq[0..i]), for i in [0, seq.size() - 1).
Tensor PositionDistributions(const ModelParams& model,
                             std::span<const int> seq);

// log P(seq[i+1] | seq[0..i]) for every predicted position.
std::vector<double> TokenLogProbs(const ModelParams& model,
                                  std::span<const int> seq);

// -sum_t log P(w_{t+1} | w_1..w_t), in nats. Requires seq.size() >= 2.
double SequenceNll(const ModelParams& model, std::span<const int> seq);

}  // namespace unlearnlab::lm

#endif  // UNLEARNLAB_LM_MODEL_H_
