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

#include "unlearnlab/corpus/generator.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "unlearnlab/error.h"

namespace unlearnlab::corpus {

namespace {

std::size_t Power(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::size_t SampleIndex(const std::vector<double>& probs,
                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Rounding left u above the running total; take the last positive entry.
  for (std::size_t i = probs.size(); i-- > 0;)
    if (probs[i] > 0.0) return i;
  return probs.size() - 1;
}

void CheckDistribution(const std::vector<double>& p, const std::string& what) {
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument(what + " has a negative or non-finite entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument(what + " sums to " + std::to_string(total) +
                          ", not 1");
  }
}

std::vector<std::string> TemplateSlots(const std::string& tmpl) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while ((pos = tmpl.find('{', pos)) != std::string::npos) {
    const std::size_t close = tmpl.find('}', pos);
    if (close == std::string::npos) {
      throw InvalidArgument("unterminated slot in template '" + tmpl + "'");
    }
    out.push_back(tmpl.substr(pos + 1, close - pos - 1));
    pos = close + 1;
  }
  return out;
}

}  // namespace

void GeneratorSpec::Validate() const {
  if (num_sequences < 0) throw InvalidArgument("num_sequences is negative");
  if (sequence_length < 1) {
    throw InvalidArgument("sequence_length must be positive");
  }
  if (kind == GeneratorKind::kTemplateGrammar) {
    if (grammar.templates.empty()) {
      throw InvalidArgument("template grammar has no templates");
    }
    for (const auto& t : grammar.templates) {
      for (const auto& slot : TemplateSlots(t)) {
        auto it = grammar.slots.find(slot);
        if (it == grammar.slots.end() || it->second.empty()) {
          throw InvalidArgument("template slot '" + slot + "' has no fillers");
        }
      }
    }
    return;
  }
  const std::size_t v = alphabet.size();
  if (v < 1) throw InvalidArgument("empty alphabet");
  if (markov.order < 1) throw InvalidArgument("markov order must be >= 1");
  const std::size_t contexts = Power(v, markov.order);
  if (markov.transition.size() != contexts) {
    throw InvalidArgument("transition matrix has " +
                          std::to_string(markov.transition.size()) +
                          " rows, expected " + std::to_string(contexts));
  }
  for (std::size_t c = 0; c < contexts; ++c) {
    if (markov.transition[c].size() != v) {
      throw InvalidArgument("transition row " + std::to_string(c) +
                            " has wrong length");
    }
    CheckDistribution(markov.transition[c],
                      "transition row " + std::to_string(c));
  }
  if (!markov.initial.empty()) {
    if (markov.initial.size() != contexts) {
      throw InvalidArgument("initial distribution has wrong length");
    }
    CheckDistribution(markov.initial, "initial distribution");
  }
  if (entropy_rate) {
    const double h = EntropyRate(markov, static_cast<int>(v));
    if (std::abs(h - *entropy_rate) > 1e-9) {
      throw InvalidArgument("stored entropy rate " +
                            std::to_string(*entropy_rate) +
                            " disagrees with matrix value " +
                            std::to_string(h));
    }
  }
}

std::vector<double> StationaryDistribution(const MarkovChain& chain,
                                           int vocab_size) {
  const auto v = static_cast<std::size_t>(vocab_size);
  const std::size_t contexts = Power(v, chain.order);
  std::vector<double> pi = chain.initial;
  if (pi.empty()) pi.assign(contexts, 1.0 / static_cast<double>(contexts));
  std::vector<double> next(contexts);
  // Lazy chain: same stationary law, and aperiodic so the iteration settles.
  for (int iter = 0; iter < 100000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t c = 0; c < contexts; ++c) {
      if (pi[c] == 0.0) continue;
      next[c] += 0.5 * pi[c];
      const std::size_t shifted = (c * v) % contexts;
      for (std::size_t b = 0; b < v; ++b)
        next[shifted + b] += 0.5 * pi[c] * chain.transition[c][b];
    }
    double diff = 0.0;
    for (std::size_t c = 0; c < contexts; ++c)
      diff = std::max(diff, std::abs(next[c] - pi[c]));
    pi.swap(next);
    if (diff < 1e-16) break;
  }
  return pi;
}

double EntropyRate(const MarkovChain& chain, int vocab_size) {
  const std::vector<double> pi = StationaryDistribution(chain, vocab_size);
  double h = 0.0;
  for (std::size_t c = 0; c < pi.size(); ++c) {
    double row = 0.0;
    for (double p : chain.transition[c])
      if (p > 0.0) row -= p * std::log(p);
    h += pi[c] * row;
  }
  return h;
}

MarkovChain RandomChain(int vocab_size, double concentration, double floor_mix,
                        std::uint64_t seed) {
  if (vocab_size < 1 || !(concentration > 0.0) || floor_mix < 0.0 ||
      floor_mix > 1.0) {
    throw InvalidArgument("invalid random chain parameters");
  }
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(concentration, 1.0);
  const auto v = static_cast<std::size_t>(vocab_size);
  MarkovChain chain;
  chain.order = 1;
  chain.transition.assign(v, std::vector<double>(v));
  for (auto& row : chain.transition) {
    double total = 0.0;
    for (double& x : row) {
      x = gamma(rng);
      total += x;
    }
    for (double& x : row)
      x = (1.0 - floor_mix) * x / total + floor_mix / static_cast<double>(v);
    // Renormalize so the row sums to one within rounding.
    double s = 0.0;
    for (double x : row) s += x;
    for (double& x : row) x /= s;
  }
  return chain;
}

std::uint64_t HashString(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = h ^ (seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::string GenerateMarkov(const GeneratorSpec& spec, std::mt19937_64& rng,
                           const std::vector<double>& start) {
  const std::size_t v = spec.alphabet.size();
  const int order = spec.markov.order;
  const std::size_t contexts = Power(v, order);
  std::size_t context = SampleIndex(start, rng);
  std::string out;
  out.reserve(static_cast<std::size_t>(spec.sequence_length));
  // Unpack the initial context into its `order` symbols, oldest first.
  std::vector<std::size_t> first(static_cast<std::size_t>(order));
  std::size_t rest = context;
  for (int i = order - 1; i >= 0; --i) {
    first[static_cast<std::size_t>(i)] = rest % v;
    rest /= v;
  }
  for (std::size_t s : first) {
    if (out.size() == static_cast<std::size_t>(spec.sequence_length)) break;
    out.push_back(spec.alphabet[s]);
  }
  while (out.size() < static_cast<std::size_t>(spec.sequence_length)) {
    const std::size_t next = SampleIndex(spec.markov.transition[context], rng);
    out.push_back(spec.alphabet[next]);
    context = (context * v) % contexts + next;
  }
  return out;
}

std::string GenerateSentences(const GeneratorSpec& spec, std::mt19937_64& rng) {
  const auto& g = spec.grammar;
  std::string out;
  const auto length = static_cast<std::size_t>(spec.sequence_length);
  while (out.size() < length) {
    std::uniform_int_distribution<std::size_t> pick_t(0,
                                                      g.templates.size() - 1);
    const std::string& tmpl = g.templates[pick_t(rng)];
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
      if (tmpl[pos] == '{') {
        const std::size_t close = tmpl.find('}', pos);
        const auto& fillers = g.slots.at(tmpl.substr(pos + 1, close - pos - 1));
        std::uniform_int_distribution<std::size_t> pick_f(0,
                                                          fillers.size() - 1);
        out += fillers[pick_f(rng)];
        pos = close + 1;
      } else {
        out.push_back(tmpl[pos++]);
      }
    }
    if (out.size() < length) out.push_back(' ');
  }
  out.resize(length);
  return out;
}

}  // namespace

std::vector<std::string> Generate(const GeneratorSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.seed);
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(spec.num_sequences));
  std::vector<double> start;
  if (spec.kind == GeneratorKind::kMarkovChain) {
    start = spec.markov.initial.empty()
                ? StationaryDistribution(spec.markov,
                                         static_cast<int>(spec.alphabet.size()))
                : spec.markov.initial;
  }
  for (int i = 0; i < spec.num_sequences; ++i) {
    out.push_back(spec.kind == GeneratorKind::kMarkovChain
                      ? GenerateMarkov(spec, rng, start)
                      : GenerateSentences(spec, rng));
  }
  return out;
}

}  // namespace unlearnlab::corpus
