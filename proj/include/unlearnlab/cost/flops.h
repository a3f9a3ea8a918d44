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

#ifndef UNLEARNLAB_COST_FLOPS_H_
#define UNLEARNLAB_COST_FLOPS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace unlearnlab::cost {

// Exact FLOP counts reach 1e23 and beyond, so they are kept in 128 bits.
using Flops = unsigned __int128;

// 6 * tokens * params. Throws InvalidArgument on overflow.
Flops TrainingFlops(std::uint64_t tokens, std::uint64_t params);
// 2 * tokens * params.
Flops ForwardFlops(std::uint64_t tokens, std::uint64_t params);

// Unlearning cost over forget_tokens * epochs tokens:
//   ga, random-labels   training
//   adversarial         training + forward
//   any ga+... hybrid   2 * training (retain tokens match forget tokens)
// Throws InvalidArgument for a method name it does not know.
Flops MethodFlops(std::string_view method, std::uint64_t forget_tokens,
                  std::uint64_t params, std::uint64_t epochs = 1);

std::string ToDecimal(Flops f);
// Scientific notation with three significant figures, half-up rounding of
// the exact value: 108000000000000000000000 -> "1.08e23".
std::string ToScientific3(Flops f);

struct CostInputs {
  std::uint64_t params = 6'000'000'000;
  std::uint64_t pretraining_tokens = 3'000'000'000'000;
  std::uint64_t forget_tokens = 2000ull * 4096ull;
  std::uint64_t epochs = 1;
};

struct CostRow {
  std::string method;  // "retraining" or an unlearning method name
  Flops flops = 0;
};

// Retraining first, then the seven unlearning methods.
std::vector<CostRow> CostTable(const CostInputs& in);
std::string CostTableText(const std::vector<CostRow>& rows);
// method,flops,flops_3sf
std::string CostTableCsv(const std::vector<CostRow>& rows);

}  // namespace unlearnlab::cost

#endif  // UNLEARNLAB_COST_FLOPS_H_
