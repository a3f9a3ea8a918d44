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

#ifndef UNLEARNLAB_LM_CHECKPOINT_H_
#define UNLEARNLAB_LM_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>

#include "unlearnlab/lm/model.h"

namespace unlearnlab::lm {

// Text checkpoint. Values are written as C99 hexadecimal floats, so a
// save/load round trip is bit-exact.
//
//   unlearnlab-checkpoint 1
//   arch tiny-decoder            (or bigram)
//   vocab_size 16
//   vocabulary abcdefghijklmnop  ("-" when absent)
//   role vanilla
//   layers 2                     (tiny-decoder only: layers .. mlp_dim)
//   dim 32
//   heads 2
//   context 64
//   mlp_dim 128
//   tensors <count>
//   tensor <name> <rows> <cols>
//   <rows lines of cols hex floats>
//   ...
//   end
void SaveCheckpoint(std::ostream& out, const ModelParams& model);
ModelParams LoadCheckpoint(std::istream& in);

void SaveCheckpoint(const std::filesystem::path& path,
                    const ModelParams& model);
ModelParams LoadCheckpoint(const std::filesystem::path& path);

}  // namespace unlearnlab::lm

#endif  // UNLEARNLAB_LM_CHECKPOINT_H_
