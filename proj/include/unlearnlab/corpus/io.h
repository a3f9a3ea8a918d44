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

#ifndef UNLEARNLAB_CORPUS_IO_H_
#define UNLEARNLAB_CORPUS_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "unlearnlab/corpus/splits.h"

namespace unlearnlab::corpus {

// UTF-8 text, one sequence per line, '\n' terminated.
void WriteCorpus(const std::filesystem::path& path,
                 const std::vector<std::string>& sequences);
std::vector<std::string> ReadCorpus(const std::filesystem::path& path);

// Writes <dir>/train.txt, <dir>/approximate.txt and <dir>/splits.json. The
// manifest holds the index lists of every split plus the domain tag of each
// training sequence:
//   {"format": "unlearnlab-splits", "version": 1,
//    "train_file": "train.txt", "approximate_file": "approximate.txt",
//    "num_train": N, "train_domain": [...], "forget": [...],
//    "retain": [...], "retain_sample": [...], "general": [...]}
void WriteSplits(const std::filesystem::path& dir, const CorpusSplits& splits);
CorpusSplits ReadSplits(const std::filesystem::path& dir);

}  // namespace unlearnlab::corpus

#endif  // UNLEARNLAB_CORPUS_IO_H_
