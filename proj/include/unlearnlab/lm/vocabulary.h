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

#ifndef UNLEARNLAB_LM_VOCABULARY_H_
#define UNLEARNLAB_LM_VOCABULARY_H_

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace unlearnlab::lm {

using TokenSequence = std::vector<int>;

// Character-level vocabulary. Token ids follow the order of `symbols`.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::string symbols);

  // Sorted set of distinct bytes appearing in `lines`.
  static Vocabulary FromCorpus(std::span<const std::string> lines);

  int size() const { return static_cast<int>(symbols_.size()); }
  const std::string& symbols() const { return symbols_; }

  // Throws InvalidArgument on a character outside the vocabulary.
  TokenSequence Encode(std::string_view text) const;
  std::string Decode(std::span<const int> tokens) const;

 private:
  std::string symbols_;
  std::array<int, 256> index_{};
};

}  // namespace unlearnlab::lm

#endif  // UNLEARNLAB_LM_VOCABULARY_H_
