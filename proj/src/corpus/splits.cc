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

#include "unlearnlab/corpus/splits.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "unlearnlab/error.h"

namespace unlearnlab::corpus {

void CorpusSpec::Validate() const {
  if (domains.empty()) throw InvalidArgument("corpus has no domains");
  if (!domain_names.empty() && domain_names.size() != domains.size()) {
    throw InvalidArgument("domain_names and domains differ in length");
  }
  if (forget_domain < 0 ||
      static_cast<std::size_t>(forget_domain) >= domains.size()) {
    throw InvalidArgument("forget_domain out of range");
  }
  for (const auto& d : domains) d.Validate();
}

const GeneratorSpec& CorpusSpec::forget_generator() const {
  return domains.at(static_cast<std::size_t>(forget_domain));
}

Corpus GenerateCorpus(const CorpusSpec& spec) {
  spec.Validate();
  Corpus c;
  for (std::size_t d = 0; d < spec.domains.size(); ++d) {
    for (auto& s : Generate(spec.domains[d])) {
      c.sequences.push_back(std::move(s));
      c.domain.push_back(static_cast<int>(d));
    }
  }
  return c;
}

std::vector<std::string> CorpusSplits::Select(
    const std::vector<std::size_t>& idx) const {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(train.at(i));
  return out;
}

void CorpusSplits::CheckInvariants() const {
  const std::size_t n = train.size();
  if (forget.empty() || forget.size() >= n) {
    throw InvalidArgument("need 1 <= |U| < |D|");
  }
  std::vector<char> in_forget(n, 0);
  for (std::size_t i : forget) {
    if (i >= n || in_forget[i]) throw InvalidArgument("bad forget index");
    in_forget[i] = 1;
  }
  std::vector<char> in_retain(n, 0);
  for (std::size_t i : retain) {
    if (i >= n || in_forget[i] || in_retain[i]) {
      throw InvalidArgument("retain set overlaps the forget set");
    }
    in_retain[i] = 1;
  }
  if (forget.size() + retain.size() != n) {
    throw InvalidArgument("U and D \\ U do not cover D");
  }
  for (std::size_t i : retain_sample)
    if (i >= n || !in_retain[i]) {
      throw InvalidArgument("retain sample is not inside D \\ U");
    }
  for (std::size_t i : general)
    if (i >= n || !in_retain[i]) {
      throw InvalidArgument("general set is not inside D \\ U");
    }
  const std::set<std::string> d(train.begin(), train.end());
  for (const auto& a : approximate)
    if (d.count(a)) throw InvalidArgument("approximate set intersects D");
}

namespace {

constexpr std::uint64_t kForgetSalt = 0x5f0f1a7e;
constexpr std::uint64_t kRetainSalt = 0x7e7a1f5a;
constexpr std::uint64_t kGeneralSalt = 0x9e5e7a11;
constexpr std::uint64_t kApproxSalt = 0xa9920c5e;

// Order `candidates` by a content-derived key. The k-th copy of a repeated
// sequence gets its own key, so the order is a function of the multiset of
// sequences only.
std::vector<std::size_t> KeyedOrder(const std::vector<std::string>& seqs,
                                    std::vector<std::size_t> candidates,
                                    std::uint64_t seed) {
  std::map<std::string, int> occurrences;
  std::vector<std::tuple<std::uint64_t, std::string, int, std::size_t>> keyed;
  keyed.reserve(candidates.size());
  // Occurrence numbering must not depend on the input order either, so
  // number copies after sorting candidates by content.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) {
                     return seqs[a] < seqs[b];
                   });
  for (std::size_t i : candidates) {
    const int occ = occurrences[seqs[i]]++;
    const std::uint64_t key =
        HashString(seqs[i] + '\x1f' + std::to_string(occ), seed);
    keyed.emplace_back(key, seqs[i], occ, i);
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a), std::get<2>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b), std::get<2>(b));
  });
  std::vector<std::size_t> out;
  out.reserve(keyed.size());
  for (const auto& k : keyed) out.push_back(std::get<3>(k));
  return out;
}

std::vector<std::size_t> TakeSorted(const std::vector<std::size_t>& ordered,
                                    std::size_t k) {
  std::vector<std::size_t> out(ordered.begin(),
                               ordered.begin() + static_cast<long>(k));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CorpusSplits MakeSplits(const Corpus& corpus, const CorpusSpec& spec,
                        const SplitSpec& split) {
  spec.Validate();
  const std::size_t n = corpus.sequences.size();
  if (corpus.domain.size() != n) {
    throw InvalidArgument("corpus domain tags do not match sequences");
  }
  if (!(split.forget_fraction > 0.0 && split.forget_fraction < 1.0)) {
    throw InvalidArgument("forget fraction must lie strictly between 0 and 1");
  }
  const auto forget_count = static_cast<std::size_t>(
      std::llround(split.forget_fraction * static_cast<double>(n)));
  if (forget_count < 1 || forget_count >= n) {
    throw InvalidArgument("forget fraction yields " +
                          std::to_string(forget_count) +
                          " sequences out of " + std::to_string(n));
  }
  if (split.retain_sample_size < 0 || split.approx_size < 0 ||
      split.general_size < 0) {
    throw InvalidArgument("split sizes must be non-negative");
  }

  CorpusSplits s;
  s.train = corpus.sequences;
  s.train_domain = corpus.domain;

  std::vector<std::size_t> forget_domain_idx;
  for (std::size_t i = 0; i < n; ++i)
    if (corpus.domain[i] == spec.forget_domain) forget_domain_idx.push_back(i);
  if (forget_domain_idx.size() < forget_count) {
    throw InvalidArgument("forget domain holds only " +
                          std::to_string(forget_domain_idx.size()) +
                          " sequences");
  }
  s.forget = TakeSorted(
      KeyedOrder(s.train, forget_domain_idx, split.seed ^ kForgetSalt),
      forget_count);

  std::vector<char> in_forget(n, 0);
  for (std::size_t i : s.forget) in_forget[i] = 1;
  std::vector<std::size_t> retain_in_domain;
  for (std::size_t i = 0; i < n; ++i) {
    if (in_forget[i]) continue;
    s.retain.push_back(i);
    if (corpus.domain[i] == spec.forget_domain) retain_in_domain.push_back(i);
  }

  const auto r_size = static_cast<std::size_t>(split.retain_sample_size);
  if (r_size > retain_in_domain.size()) {
    throw InvalidArgument("retain sample larger than the in-domain retain set");
  }
  s.retain_sample = TakeSorted(
      KeyedOrder(s.train, retain_in_domain, split.seed ^ kRetainSalt), r_size);

  const auto g_size = static_cast<std::size_t>(split.general_size);
  if (g_size > s.retain.size()) {
    throw InvalidArgument("general set larger than D \\ U");
  }
  s.general = TakeSorted(
      KeyedOrder(s.train, s.retain, split.seed ^ kGeneralSalt), g_size);

  // Fresh draws from the forget domain's generator, skipping anything in D.
  const std::set<std::string> seen(s.train.begin(), s.train.end());
  GeneratorSpec fresh = spec.forget_generator();
  fresh.num_sequences = std::max(split.approx_size, 1);
  fresh.seed = HashString(std::to_string(fresh.seed),
                          split.seed ^ kApproxSalt);
  const auto a_size = static_cast<std::size_t>(split.approx_size);
  for (int round = 0; s.approximate.size() < a_size; ++round) {
    if (round >= 1000) {
      throw InvalidArgument("generator cannot produce " +
                            std::to_string(a_size) +
                            " sequences outside D");
    }
    for (auto& a : Generate(fresh)) {
      if (s.approximate.size() == a_size) break;
      if (!seen.count(a)) s.approximate.push_back(std::move(a));
    }
    fresh.seed = HashString(std::to_string(fresh.seed), kApproxSalt);
  }
  s.CheckInvariants();
  return s;
}

}  // namespace unlearnlab::corpus
