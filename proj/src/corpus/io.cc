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

#include "unlearnlab/corpus/io.h"

#include <fstream>

#include "json.hpp"
#include "unlearnlab/error.h"

namespace unlearnlab::corpus {

using nlohmann::json;

void WriteCorpus(const std::filesystem::path& path,
                 const std::vector<std::string>& sequences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& s : sequences) {
    if (s.find('\n') != std::string::npos) {
      throw InvalidArgument("sequence contains a newline");
    }
    out << s << '\n';
  }
}

std::vector<std::string> ReadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

void WriteSplits(const std::filesystem::path& dir, const CorpusSplits& s) {
  std::filesystem::create_directories(dir);
  WriteCorpus(dir / "train.txt", s.train);
  WriteCorpus(dir / "approximate.txt", s.approximate);
  json j;
  j["format"] = "unlearnlab-splits";
  j["version"] = 1;
  j["train_file"] = "train.txt";
  j["approximate_file"] = "approximate.txt";
  j["num_train"] = s.train.size();
  j["train_domain"] = s.train_domain;
  j["forget"] = s.forget;
  j["retain"] = s.retain;
  j["retain_sample"] = s.retain_sample;
  j["general"] = s.general;
  std::ofstream out(dir / "splits.json");
  out << j.dump(2) << '\n';
}

CorpusSplits ReadSplits(const std::filesystem::path& dir) {
  std::ifstream in(dir / "splits.json");
  if (!in) throw Error("cannot open " + (dir / "splits.json").string());
  json j;
  try {
    in >> j;
    if (j.at("format") != "unlearnlab-splits" || j.at("version") != 1) {
      throw FormatError("unsupported split manifest format");
    }
    CorpusSplits s;
    s.train = ReadCorpus(dir / j.at("train_file").get<std::string>());
    s.approximate =
        ReadCorpus(dir / j.at("approximate_file").get<std::string>());
    if (s.train.size() != j.at("num_train").get<std::size_t>()) {
      throw FormatError("train file length disagrees with manifest");
    }
    s.train_domain = j.at("train_domain").get<std::vector<int>>();
    s.forget = j.at("forget").get<std::vector<std::size_t>>();
    s.retain = j.at("retain").get<std::vector<std::size_t>>();
    s.retain_sample = j.at("retain_sample").get<std::vector<std::size_t>>();
    s.general = j.at("general").get<std::vector<std::size_t>>();
    s.CheckInvariants();
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed split manifest: ") + e.what());
  }
}

}  // namespace unlearnlab::corpus
