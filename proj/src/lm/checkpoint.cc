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

#include "unlearnlab/lm/checkpoint.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "unlearnlab/error.h"

namespace unlearnlab::lm {

namespace {

constexpr const char* kMagic = "unlearnlab-checkpoint";
constexpr int kVersion = 1;

std::string HexFloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

// Vocabulary bytes as two hex digits each, so any byte survives the
// whitespace-delimited format.
std::string HexBytes(const std::string& s) {
  if (s.empty()) return "-";
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : s) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string FromHexBytes(const std::string& s) {
  if (s == "-") return "";
  if (s.size() % 2 != 0) throw FormatError("odd-length vocabulary field");
  std::string out;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    out.push_back(static_cast<char>(std::stoi(s.substr(i, 2), nullptr, 16)));
  }
  return out;
}

template <typename T>
T Field(std::istream& in, const std::string& key) {
  std::string k;
  T v{};
  if (!(in >> k) || k != key || !(in >> v)) {
    throw FormatError("checkpoint: expected field '" + key + "'");
  }
  return v;
}

double ParseDouble(const std::string& tok) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0') {
    throw FormatError("checkpoint: bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

void SaveCheckpoint(std::ostream& out, const ModelParams& m) {
  out << kMagic << ' ' << kVersion << '\n';
  out << "arch " << ArchName(m.arch) << '\n';
  out << "vocab_size " << m.vocab_size << '\n';
  out << "vocabulary " << HexBytes(m.vocabulary) << '\n';
  out << "role " << RoleName(m.role) << '\n';
  if (m.arch == Arch::kTinyDecoder) {
    out << "layers " << m.decoder.layers << '\n'
        << "dim " << m.decoder.dim << '\n'
        << "heads " << m.decoder.heads << '\n'
        << "context " << m.decoder.context << '\n'
        << "mlp_dim " << m.decoder.mlp_dim << '\n';
  }
  out << "tensors " << m.params.size() << '\n';
  for (const auto& p : m.params) {
    out << "tensor " << p.name << ' ' << p.value.rows() << ' '
        << p.value.cols() << '\n';
    for (std::size_t r = 0; r < p.value.rows(); ++r) {
      for (std::size_t c = 0; c < p.value.cols(); ++c) {
        if (c) out << ' ';
        out << HexFloat(p.value(r, c));
      }
      out << '\n';
    }
  }
  out << "end\n";
}

ModelParams LoadCheckpoint(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) {
    throw FormatError("not an unlearnlab checkpoint");
  }
  if (version != kVersion) {
    throw FormatError("unsupported checkpoint version " +
                      std::to_string(version));
  }
  ModelParams m;
  m.arch = ParseArch(Field<std::string>(in, "arch"));
  m.vocab_size = Field<int>(in, "vocab_size");
  m.vocabulary = FromHexBytes(Field<std::string>(in, "vocabulary"));
  m.role = ParseRole(Field<std::string>(in, "role"));
  if (m.arch == Arch::kTinyDecoder) {
    m.decoder.layers = Field<int>(in, "layers");
    m.decoder.dim = Field<int>(in, "dim");
    m.decoder.heads = Field<int>(in, "heads");
    m.decoder.context = Field<int>(in, "context");
    m.decoder.mlp_dim = Field<int>(in, "mlp_dim");
  }
  const auto count = Field<std::size_t>(in, "tensors");
  for (std::size_t i = 0; i < count; ++i) {
    std::string key, name;
    std::size_t rows = 0, cols = 0;
    if (!(in >> key >> name >> rows >> cols) || key != "tensor") {
      throw FormatError("checkpoint: malformed tensor header");
    }
    Tensor t({rows, cols});
    std::string tok;
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (!(in >> tok)) throw FormatError("checkpoint: truncated tensor data");
      t[j] = ParseDouble(tok);
    }
    m.params.push_back({std::move(name), std::move(t)});
  }
  std::string end;
  if (!(in >> end) || end != "end") {
    throw FormatError("checkpoint: missing end marker");
  }
  // Re-derive the layout from the header and insist the arrays match it.
  const ModelParams layout =
      m.arch == Arch::kTinyDecoder
          ? ModelParams::InitDecoder(m.vocab_size, m.decoder, 0)
          : ModelParams::InitBigram(m.vocab_size);
  if (layout.params.size() != m.params.size()) {
    throw FormatError("checkpoint tensor count does not match architecture");
  }
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    if (layout.params[i].name != m.params[i].name ||
        !(layout.params[i].value.shape() == m.params[i].value.shape())) {
      throw FormatError("checkpoint tensor '" + m.params[i].name +
                        "' does not match architecture");
    }
  }
  return m;
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const ModelParams& model) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  SaveCheckpoint(out, model);
}

ModelParams LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return LoadCheckpoint(in);
}

}  // namespace unlearnlab::lm
