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

#include "unlearnlab/lm/model.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "unlearnlab/error.h"

namespace unlearnlab::lm {

using autodiff::Graph;
using autodiff::NodeId;
using autodiff::Shape;

std::string_view ArchName(Arch arch) {
  return arch == Arch::kTinyDecoder ? "tiny-decoder" : "bigram";
}

Arch ParseArch(std::string_view name) {
  if (name == "tiny-decoder") return Arch::kTinyDecoder;
  if (name == "bigram") return Arch::kBigram;
  throw InvalidArgument("unknown architecture '" + std::string(name) + "'");
}

std::string_view RoleName(ModelRole role) {
  switch (role) {
    case ModelRole::kVanilla: return "vanilla";
    case ModelRole::kUnlearned: return "unlearned";
    case ModelRole::kRetrained: return "retrained";
  }
  return "vanilla";
}

ModelRole ParseRole(std::string_view name) {
  if (name == "vanilla") return ModelRole::kVanilla;
  if (name == "unlearned") return ModelRole::kUnlearned;
  if (name == "retrained") return ModelRole::kRetrained;
  throw InvalidArgument("unknown model role '" + std::string(name) + "'");
}

namespace {

constexpr double kMaskedScore = -1e9;

std::string LayerName(int layer, const char* part) {
  return "layer" + std::to_string(layer) + "." + part;
}

std::string HeadName(int layer, int head, const char* part) {
  return "layer" + std::to_string(layer) + ".head" + std::to_string(head) +
         "." + part;
}

Tensor Normal(Shape shape, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Tensor t(shape);
  for (double& v : t.data()) v = dist(rng);
  return t;
}

}  // namespace

ModelParams ModelParams::InitDecoder(int vocab_size,
                                     const DecoderConfig& config,
                                     std::uint64_t seed) {
  if (vocab_size < 1 || config.layers < 1 || config.dim < 1 ||
      config.heads < 1 || config.dim % config.heads != 0 ||
      config.context < 2 || config.mlp_dim < 1) {
    throw InvalidArgument("invalid tiny-decoder configuration");
  }
  ModelParams m;
  m.arch = Arch::kTinyDecoder;
  m.vocab_size = vocab_size;
  m.decoder = config;
  std::mt19937_64 rng(seed);
  const auto v = static_cast<std::size_t>(vocab_size);
  const auto d = static_cast<std::size_t>(config.dim);
  const auto dh = d / static_cast<std::size_t>(config.heads);
  const auto hidden = static_cast<std::size_t>(config.mlp_dim);
  const double in_scale = 1.0 / std::sqrt(static_cast<double>(d));
  const double out_scale = in_scale / std::sqrt(2.0 * config.layers);
  auto add = [&m](std::string name, Tensor t) {
    m.params.push_back({std::move(name), std::move(t)});
  };
  add("tok_emb", Normal({v, d}, 0.1, rng));
  add("pos_emb", Normal({static_cast<std::size_t>(config.context), d}, 0.1,
                        rng));
  for (int l = 0; l < config.layers; ++l) {
    add(LayerName(l, "ln1_gain"), Tensor({1, d}, 1.0));
    add(LayerName(l, "ln1_bias"), Tensor({1, d}, 0.0));
    for (int h = 0; h < config.heads; ++h) {
      add(HeadName(l, h, "wq"), Normal({d, dh}, in_scale, rng));
      add(HeadName(l, h, "wk"), Normal({d, dh}, in_scale, rng));
      add(HeadName(l, h, "wv"), Normal({d, dh}, in_scale, rng));
      add(HeadName(l, h, "wo"), Normal({dh, d}, out_scale, rng));
    }
    add(LayerName(l, "ln2_gain"), Tensor({1, d}, 1.0));
    add(LayerName(l, "ln2_bias"), Tensor({1, d}, 0.0));
    add(LayerName(l, "mlp_in"), Normal({d, hidden}, in_scale, rng));
    add(LayerName(l, "mlp_in_bias"), Tensor({1, hidden}, 0.0));
    add(LayerName(l, "mlp_out"),
        Normal({hidden, d},
               out_scale * std::sqrt(static_cast<double>(d) /
                                     static_cast<double>(hidden)),
               rng));
    add(LayerName(l, "mlp_out_bias"), Tensor({1, d}, 0.0));
  }
  add("lnf_gain", Tensor({1, d}, 1.0));
  add("lnf_bias", Tensor({1, d}, 0.0));
  add("lm_head", Normal({d, v}, in_scale, rng));
  add("lm_head_bias", Tensor({1, v}, 0.0));
  return m;
}

ModelParams ModelParams::InitBigram(int vocab_size) {
  if (vocab_size < 1) throw InvalidArgument("vocab size must be positive");
  ModelParams m;
  m.arch = Arch::kBigram;
  m.vocab_size = vocab_size;
  const auto v = static_cast<std::size_t>(vocab_size);
  m.params.push_back({"logits", Tensor({v, v}, 0.0)});
  return m;
}

std::size_t ModelParams::ParamCount() const {
  std::size_t total = 0;
  for (const auto& p : params) total += p.value.size();
  return total;
}

bool ModelParams::AllFinite() const {
  for (const auto& p : params)
    for (double v : p.value.data())
      if (!std::isfinite(v)) return false;
  return true;
}

const Tensor& ModelParams::Get(std::string_view name) const {
  for (const auto& p : params)
    if (p.name == name) return p.value;
  throw InvalidArgument("model has no parameter '" + std::string(name) + "'");
}

Tensor& ModelParams::Get(std::string_view name) {
  return const_cast<Tensor&>(std::as_const(*this).Get(name));
}

bool ModelParams::operator==(const ModelParams& o) const {
  if (arch != o.arch || vocab_size != o.vocab_size || role != o.role ||
      vocabulary != o.vocabulary || params.size() != o.params.size()) {
    return false;
  }
  if (arch == Arch::kTinyDecoder && !(decoder == o.decoder)) return false;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name != o.params[i].name ||
        !(params[i].value.shape() == o.params[i].value.shape()) ||
        params[i].value.data() != o.params[i].value.data()) {
      return false;
    }
  }
  return true;
}

ParamNodes BindParams(Graph& graph, const ModelParams& model) {
  ParamNodes nodes;
  nodes.ids.reserve(model.params.size());
  for (const auto& p : model.params) nodes.ids.push_back(graph.Input(p.value));
  return nodes;
}

void CheckTokens(const ModelParams& model, std::span<const int> tokens) {
  for (int t : tokens) {
    if (t < 0 || t >= model.vocab_size) {
      throw InvalidArgument("token id " + std::to_string(t) +
                            " outside vocabulary of size " +
                            std::to_string(model.vocab_size));
    }
  }
}

namespace {

void CheckInputs(const ModelParams& model, std::span<const int> inputs) {
  if (inputs.empty()) throw InvalidArgument("empty prefix");
  if (model.arch == Arch::kTinyDecoder &&
      inputs.size() >= static_cast<std::size_t>(model.decoder.context)) {
    throw InvalidArgument("prefix of length " + std::to_string(inputs.size()) +
                          " does not fit context " +
                          std::to_string(model.decoder.context));
  }
  CheckTokens(model, inputs);
}

// Resolves parameter nodes by name with a running cursor; BuildLogits reads
// them in the same order InitDecoder created them.
class ParamCursor {
 public:
  ParamCursor(const ModelParams& model, const ParamNodes& nodes)
      : model_(model), nodes_(nodes) {}

  NodeId Next(const std::string& expected) {
    if (pos_ >= model_.params.size() || model_.params[pos_].name != expected) {
      throw InvalidArgument("parameter layout mismatch at '" + expected + "'");
    }
    return nodes_.ids[pos_++];
  }

 private:
  const ModelParams& model_;
  const ParamNodes& nodes_;
  std::size_t pos_ = 0;
};

NodeId AffineNorm(Graph& g, NodeId x, NodeId gain, NodeId bias) {
  return g.Add(g.Mul(g.LayerNorm(x), gain), bias);
}

}  // namespace

NodeId BuildLogits(Graph& g, const ModelParams& model, const ParamNodes& nodes,
                   std::span<const int> inputs) {
  CheckInputs(model, inputs);
  std::vector<int> ids(inputs.begin(), inputs.end());
  if (model.arch == Arch::kBigram) {
    return g.EmbeddingGather(nodes.ids.at(0), std::move(ids));
  }
  const DecoderConfig& cfg = model.decoder;
  const std::size_t n = inputs.size();
  const std::size_t dh = static_cast<std::size_t>(cfg.dim / cfg.heads);
  ParamCursor p(model, nodes);

  std::vector<int> positions(n);
  for (std::size_t i = 0; i < n; ++i) positions[i] = static_cast<int>(i);
  const NodeId tok = g.EmbeddingGather(p.Next("tok_emb"), std::move(ids));
  const NodeId pos = g.EmbeddingGather(p.Next("pos_emb"), positions);
  NodeId x = g.Add(tok, pos);

  Tensor mask_values({n, n}, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c) mask_values(r, c) = kMaskedScore;
  const NodeId mask = g.Input(std::move(mask_values));
  const double score_scale = 1.0 / std::sqrt(static_cast<double>(dh));

  for (int l = 0; l < cfg.layers; ++l) {
    const NodeId g1 = p.Next(LayerName(l, "ln1_gain"));
    const NodeId b1 = p.Next(LayerName(l, "ln1_bias"));
    const NodeId h = AffineNorm(g, x, g1, b1);
    for (int head = 0; head < cfg.heads; ++head) {
      const NodeId q = g.MatMul(h, p.Next(HeadName(l, head, "wq")));
      const NodeId k = g.MatMul(h, p.Next(HeadName(l, head, "wk")));
      const NodeId v = g.MatMul(h, p.Next(HeadName(l, head, "wv")));
      const NodeId scores =
          g.Add(g.Scale(g.MatMul(q, g.Transpose(k)), score_scale), mask);
      const NodeId attended = g.MatMul(g.Softmax(scores), v);
      x = g.Add(x, g.MatMul(attended, p.Next(HeadName(l, head, "wo"))));
    }
    const NodeId g2 = p.Next(LayerName(l, "ln2_gain"));
    const NodeId b2 = p.Next(LayerName(l, "ln2_bias"));
    const NodeId h2 = AffineNorm(g, x, g2, b2);
    const NodeId w_in = p.Next(LayerName(l, "mlp_in"));
    const NodeId b_in = p.Next(LayerName(l, "mlp_in_bias"));
    const NodeId w_out = p.Next(LayerName(l, "mlp_out"));
    const NodeId b_out = p.Next(LayerName(l, "mlp_out_bias"));
    const NodeId hidden = g.Gelu(g.Add(g.MatMul(h2, w_in), b_in));
    x = g.Add(x, g.Add(g.MatMul(hidden, w_out), b_out));
  }
  const NodeId gf = p.Next("lnf_gain");
  const NodeId bf = p.Next("lnf_bias");
  const NodeId head_w = p.Next("lm_head");
  const NodeId head_b = p.Next("lm_head_bias");
  return g.Add(g.MatMul(AffineNorm(g, x, gf, bf), head_w), head_b);
}

namespace {

// Runs the model over inputs and returns the row-wise softmax of the logits.
Tensor Probabilities(const ModelParams& model, std::span<const int> inputs) {
  Graph g;
  const ParamNodes nodes = BindParams(g, model);
  const NodeId logits = BuildLogits(g, model, nodes, inputs);
  const NodeId probs = g.Softmax(logits);
  g.Forward();
  return g.value(probs);
}

}  // namespace

std::vector<double> NextTokenDistribution(const ModelParams& model,
                                          std::span<const int> prefix) {
  if (prefix.empty()) throw InvalidArgument("empty prefix");
  if (model.arch == Arch::kBigram) {
    // Only the last token conditions a bigram.
    prefix = prefix.last(1);
  }
  const Tensor probs = Probabilities(model, prefix);
  auto last = probs.row(probs.rows() - 1);
  return {last.begin(), last.end()};
}

Tensor PositionDistributions(const ModelParams& model,
                             std::span<const int> seq) {
  if (seq.size() < 2) {
    throw InvalidArgument("sequence needs at least two tokens");
  }
  CheckTokens(model, seq);
  return Probabilities(model, seq.first(seq.size() - 1));
}

std::vector<double> TokenLogProbs(const ModelParams& model,
                                  std::span<const int> seq) {
  const Tensor probs = PositionDistributions(model, seq);
  std::vector<double> out(probs.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double p = probs(i, static_cast<std::size_t>(seq[i + 1]));
    out[i] = std::log(std::max(p, autodiff::kProbabilityFloor));
  }
  return out;
}

double SequenceNll(const ModelParams& model, std::span<const int> seq) {
  double total = 0.0;
  for (double lp : TokenLogProbs(model, seq)) total -= lp;
  return total;
}

}  // namespace unlearnlab::lm
