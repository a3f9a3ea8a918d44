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

#ifndef UNLEARNLAB_EVAL_REPORT_H_
#define UNLEARNLAB_EVAL_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "unlearnlab/eval/metrics.h"

namespace unlearnlab::eval {

struct Provenance {
  std::string role;    // vanilla, unlearned, retrained
  std::string method;  // empty for vanilla and retrained
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct BehavioralValues {
  std::optional<double> type1;
  std::optional<double> type2;
};

// Evaluation summary of one model. The constructor throws InvalidArgument
// unless every accuracy and AUC lies in [0, 1] and every perplexity is at
// least 1, so a live report always satisfies its invariants.
class MetricsReport {
 public:
  MetricsReport(Provenance provenance,
                std::map<std::string, SplitMetrics> splits,
                std::optional<MiaResult> mia, BehavioralValues behavioral);

  const Provenance& provenance() const { return provenance_; }
  const std::map<std::string, SplitMetrics>& splits() const { return splits_; }
  const SplitMetrics& split(const std::string& name) const;
  const std::optional<MiaResult>& mia() const { return mia_; }
  const BehavioralValues& behavioral() const { return behavioral_; }

  // Stable schema; keys are emitted in sorted order.
  nlohmann::json ToJson() const;
  // Re-validates, so a tampered report fails to load.
  static MetricsReport FromJson(const nlohmann::json& j);

  // k_percent,auc rows for the MIA sweep; header only when there is none.
  std::string MiaCsv() const;

 private:
  Provenance provenance_;
  std::map<std::string, SplitMetrics> splits_;
  std::optional<MiaResult> mia_;
  BehavioralValues behavioral_;
};

}  // namespace unlearnlab::eval

#endif  // UNLEARNLAB_EVAL_REPORT_H_
