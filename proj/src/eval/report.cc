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

#include "unlearnlab/eval/report.h"

#include <cmath>
#include <cstdio>

#include "unlearnlab/error.h"

namespace unlearnlab::eval {

using nlohmann::json;

namespace {

bool InUnit(double x) { return x >= 0.0 && x <= 1.0; }

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

MetricsReport::MetricsReport(Provenance provenance,
                             std::map<std::string, SplitMetrics> splits,
                             std::optional<MiaResult> mia,
                             BehavioralValues behavioral)
    : provenance_(std::move(provenance)),
      splits_(std::move(splits)),
      mia_(std::move(mia)),
      behavioral_(behavioral) {
  for (const auto& [name, m] : splits_) {
    if (!InUnit(m.accuracy)) {
      throw InvalidArgument("report: accuracy on '" + name +
                            "' outside [0, 1]");
    }
    if (!(m.perplexity >= 1.0) || !std::isfinite(m.perplexity)) {
      throw InvalidArgument("report: perplexity on '" + name +
                            "' is not a finite value >= 1");
    }
  }
  if (mia_) {
    if (mia_->auc.size() != mia_->k_percent.size() || mia_->auc.empty()) {
      throw InvalidArgument("report: malformed MIA sweep");
    }
    for (double a : mia_->auc)
      if (!InUnit(a)) throw InvalidArgument("report: AUC outside [0, 1]");
    if (!InUnit(mia_->best_auc)) {
      throw InvalidArgument("report: best AUC outside [0, 1]");
    }
  }
  for (const auto& v : {behavioral_.type1, behavioral_.type2}) {
    if (v && !(*v >= 0.0)) {
      throw InvalidArgument("report: negative behavioral measure");
    }
  }
  if (behavioral_.type2 && *behavioral_.type2 > 1.0) {
    throw InvalidArgument("report: type-II value is not a probability");
  }
}

const SplitMetrics& MetricsReport::split(const std::string& name) const {
  auto it = splits_.find(name);
  if (it == splits_.end()) {
    throw InvalidArgument("report has no split '" + name + "'");
  }
  return it->second;
}

json MetricsReport::ToJson() const {
  json j;
  j["provenance"] = {{"role", provenance_.role},
                     {"method", provenance_.method},
                     {"config_hash", provenance_.config_hash},
                     {"seed", provenance_.seed}};
  json splits = json::object();
  for (const auto& [name, m] : splits_)
    splits[name] = {{"perplexity", m.perplexity}, {"accuracy", m.accuracy}};
  j["splits"] = splits;
  if (mia_) {
    j["mia"] = {{"k_percent", mia_->k_percent},
                {"auc", mia_->auc},
                {"best_k", mia_->best_k},
                {"best_auc", mia_->best_auc}};
  } else {
    j["mia"] = nullptr;
  }
  j["behavioral"] = {
      {"type1", behavioral_.type1 ? json(*behavioral_.type1) : json(nullptr)},
      {"type2", behavioral_.type2 ? json(*behavioral_.type2) : json(nullptr)}};
  return j;
}

MetricsReport MetricsReport::FromJson(const json& j) {
  try {
    const json& p = j.at("provenance");
    Provenance prov{p.at("role").get<std::string>(),
                    p.at("method").get<std::string>(),
                    p.at("config_hash").get<std::string>(),
                    p.at("seed").get<std::uint64_t>()};
    std::map<std::string, SplitMetrics> splits;
    for (const auto& [name, m] : j.at("splits").items()) {
      splits[name] = {m.at("perplexity").get<double>(),
                      m.at("accuracy").get<double>()};
    }
    std::optional<MiaResult> mia;
    if (!j.at("mia").is_null()) {
      const json& m = j.at("mia");
      mia = MiaResult{m.at("k_percent").get<std::vector<double>>(),
                      m.at("auc").get<std::vector<double>>(),
                      m.at("best_k").get<double>(),
                      m.at("best_auc").get<double>()};
    }
    BehavioralValues b;
    const json& bj = j.at("behavioral");
    if (!bj.at("type1").is_null()) b.type1 = bj.at("type1").get<double>();
    if (!bj.at("type2").is_null()) b.type2 = bj.at("type2").get<double>();
    return MetricsReport(std::move(prov), std::move(splits), std::move(mia), b);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed metrics report: ") + e.what());
  }
}

std::string MetricsReport::MiaCsv() const {
  std::string out = "k_percent,auc\n";
  if (!mia_) return out;
  for (std::size_t i = 0; i < mia_->k_percent.size(); ++i)
    out += Num(mia_->k_percent[i]) + "," + Num(mia_->auc[i]) + "\n";
  return out;
}

}  // namespace unlearnlab::eval
