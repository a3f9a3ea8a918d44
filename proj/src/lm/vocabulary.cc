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

#include "unlearnlab/lm/vocabulary.h"

#include <algorithm>
#include <set>

#include "unlearnlab/error.h"

namespace unlearnlab::lm {

Vocabulary::Vocabulary(std::string symbols) : symbols_(std::move(symbols)) {
  index_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const auto c = static_cast<unsigned char>(symbols_[i]);
    if (index_[c] != -1) {
      throw InvalidArgument(std::string("duplicate vocabulary symbol '") +
                            symbols_[i] + "'");
    }
    index_[c] = static_cast<int>(i);
  }
}

Vocabulary Vocabulary::FromCorpus(std::span<const std::string> lines) {
  std::set<unsigned char> seen;
  for (const auto& line : lines)
    for (char c : line) seen.insert(static_cast<unsigned char>(c));
  std::string symbols;
  for (unsigned char c : seen) symbols.push_back(static_cast<char>(c));
  return Vocabulary(std::move(symbols));
}

TokenSequence Vocabulary::Encode(std::string_view text) const {
  TokenSequence out;
  out.reserve(text.size());
  for (char c : text) {
    const int id = index_[static_cast<unsigned char>(c)];
    if (id < 0) {
      throw InvalidArgument(std::string("character '") + c +
                            "' is not in the vocabulary");
    }
    out.push_back(id);
  }
  return out;
}

std::string Vocabulary::Decode(std::span<const int> tokens) const {
  std::string out;
  out.reserve(tokens.size());
  for (int t : tokens) {
    if (t < 0 || t >= size()) {
      throw InvalidArgument("token id " + std::to_string(t) +
                            " outside vocabulary of size " +
                            std::to_string(size()));
    }
    out.push_back(symbols_[static_cast<std::size_t>(t)]);
  }
  return out;
}

}  // namespace unlearnlab::lm
