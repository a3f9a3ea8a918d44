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

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <map>

#include "unlearnlab/cost/flops.h"
#include "unlearnlab/error.h"

namespace unlearnlab::cost {
namespace {

TEST(FlopsTest, ExactCountsAtDefaultScale) {
  // 6 * 8,192,000 tokens * 6e9 params.
  EXPECT_EQ(ToDecimal(TrainingFlops(2000ull * 4096, 6'000'000'000)),
            "294912000000000000");
  EXPECT_EQ(ToDecimal(ForwardFlops(2000ull * 4096, 6'000'000'000)),
            "98304000000000000");
  EXPECT_EQ(ToDecimal(TrainingFlops(3'000'000'000'000, 6'000'000'000)),
            "108000000000000000000000");
}

TEST(FlopsTest, TableAtDefaultScale) {
  std::map<std::string, std::string> got;
  for (const auto& row : CostTable({})) got[row.method] = ToScientific3(row.flops);
  const std::map<std::string, std::string> want = {
      {"retraining", "1.08e23"},         {"ga", "2.95e17"},
      {"random-labels", "2.95e17"},      {"adversarial", "3.93e17"},
      {"ga+descent-in", "5.90e17"},      {"ga+descent-general", "5.90e17"},
      {"ga+kl-in", "5.90e17"},           {"ga+kl-general", "5.90e17"}};
  EXPECT_EQ(got, want);
}

TEST(FlopsTest, ScientificRoundsHalfUp) {
  EXPECT_EQ(ToScientific3(0), "0.00e0");
  EXPECT_EQ(ToScientific3(7), "7.00e0");
  EXPECT_EQ(ToScientific3(12345), "1.23e4");
  EXPECT_EQ(ToScientific3(12350), "1.24e4");
  EXPECT_EQ(ToScientific3(99950), "1.00e5");
  EXPECT_EQ(ToScientific3(99949), "9.99e4");
}

TEST(FlopsTest, EpochsScaleLinearly) {
  EXPECT_EQ(MethodFlops("ga", 100, 10, 3), 3 * MethodFlops("ga", 100, 10, 1));
  EXPECT_EQ(MethodFlops("adversarial", 100, 10), 8000u);
  EXPECT_EQ(MethodFlops("ga+kl-in", 100, 10), 12000u);
}

TEST(FlopsTest, RejectsUnknownMethodAndOverflow) {
  EXPECT_THROW(MethodFlops("fine-tune", 1, 1), InvalidArgument);
  const auto big = std::numeric_limits<std::uint64_t>::max();
  EXPECT_NO_THROW(TrainingFlops(big, 1));
  EXPECT_THROW(MethodFlops("ga+kl-in", big, big, big), InvalidArgument);
}

TEST(FlopsTest, CsvHasOneRowPerMethod) {
  const std::string csv = CostTableCsv(CostTable({}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,flops,flops_3sf");
  EXPECT_NE(csv.find("retraining,108000000000000000000000,1.08e23\n"),
            std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

}  // namespace
}  // namespace unlearnlab::cost
