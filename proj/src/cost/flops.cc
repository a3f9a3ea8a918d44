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

#include "unlearnlab/cost/flops.h"

#include <algorithm>
#include <array>

#include "unlearnlab/error.h"

namespace unlearnlab::cost {

namespace {

Flops Mul(Flops a, Flops b) {
  Flops out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw InvalidArgument("FLOP count overflows 128 bits");
  }
  return out;
}

Flops AddChecked(Flops a, Flops b) {
  Flops out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw InvalidArgument("FLOP count overflows 128 bits");
  }
  return out;
}

enum class CostClass { kPlain, kAdversarial, kHybrid };

CostClass Classify(std::string_view method) {
  static constexpr std::array<std::string_view, 2> kPlain = {"ga",
                                                            "random-labels"};
  static constexpr std::array<std::string_view, 4> kHybrid = {
      "ga+descent-in", "ga+descent-general", "ga+kl-in", "ga+kl-general"};
  if (std::find(kPlain.begin(), kPlain.end(), method) != kPlain.end()) {
    return CostClass::kPlain;
  }
  if (method == "adversarial") return CostClass::kAdversarial;
  if (std::find(kHybrid.begin(), kHybrid.end(), method) != kHybrid.end()) {
    return CostClass::kHybrid;
  }
  throw InvalidArgument("no cost model for method '" + std::string(method) +
                        "'");
}

}  // namespace

Flops TrainingFlops(std::uint64_t tokens, std::uint64_t params) {
  return Mul(Mul(6, tokens), params);
}

Flops ForwardFlops(std::uint64_t tokens, std::uint64_t params) {
  return Mul(Mul(2, tokens), params);
}

Flops MethodFlops(std::string_view method, std::uint64_t forget_tokens,
                  std::uint64_t params, std::uint64_t epochs) {
  const CostClass c = Classify(method);
  const Flops tokens = Mul(forget_tokens, epochs);
  if (tokens > ~std::uint64_t{0}) {
    throw InvalidArgument("token count overflows 64 bits");
  }
  const auto t = static_cast<std::uint64_t>(tokens);
  switch (c) {
    case CostClass::kPlain:
      return TrainingFlops(t, params);
    case CostClass::kAdversarial:
      return AddChecked(TrainingFlops(t, params), ForwardFlops(t, params));
    case CostClass::kHybrid:
      return Mul(2, TrainingFlops(t, params));
  }
  return 0;
}

std::string ToDecimal(Flops f) {
  if (f == 0) return "0";
  std::string s;
  while (f > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(f % 10)));
    f /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string ToScientific3(Flops f) {
  if (f == 0) return "0.00e0";
  std::string d = ToDecimal(f);
  int exponent = static_cast<int>(d.size()) - 1;
  d.resize(std::max<std::size_t>(d.size(), 4), '0');
  int head = (d[0] - '0') * 100 + (d[1] - '0') * 10 + (d[2] - '0');
  if (d[3] >= '5') ++head;  // half-up on the exact digits
  if (head == 1000) {
    head = 100;
    ++exponent;
  }
  std::string out;
  out.push_back(static_cast<char>('0' + head / 100));
  out.push_back('.');
  out.push_back(static_cast<char>('0' + head / 10 % 10));
  out.push_back(static_cast<char>('0' + head % 10));
  return out + "e" + std::to_string(exponent);
}

std::vector<CostRow> CostTable(const CostInputs& in) {
  std::vector<CostRow> rows;
  rows.push_back({"retraining", TrainingFlops(in.pretraining_tokens, in.params)});
  for (std::string_view m :
       {"ga", "random-labels", "adversarial", "ga+descent-in",
        "ga+descent-general", "ga+kl-in", "ga+kl-general"}) {
    rows.push_back({std::string(m),
                    MethodFlops(m, in.forget_tokens, in.params, in.epochs)});
  }
  return rows;
}

std::string CostTableText(const std::vector<CostRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.method.size());
  std::string out = "method" + std::string(width - 6 + 2, ' ') + "flops\n";
  for (const auto& r : rows) {
    out += r.method + std::string(width - r.method.size() + 2, ' ') +
           ToScientific3(r.flops) + "\n";
  }
  return out;
}

std::string CostTableCsv(const std::vector<CostRow>& rows) {
  std::string out = "method,flops,flops_3sf\n";
  for (const auto& r : rows)
    out += r.method + "," + ToDecimal(r.flops) + "," + ToScientific3(r.flops) +
           "\n";
  return out;
}

}  // namespace unlearnlab::cost
