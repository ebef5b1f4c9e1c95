// Copyright 2026 The eoscore Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eoscore/scorer.h"

#include <cstdlib>
#include <string>

#include "eoscore/error.h"

namespace eoscore {

std::string_view KernelName(KernelKind kind) {
  return kind == KernelKind::kPortable ? "portable" : "optimized";
}

std::optional<KernelKind> ParseKernelKind(std::string_view name) {
  if (name == "portable") return KernelKind::kPortable;
  if (name == "optimized") return KernelKind::kOptimized;
  return std::nullopt;
}

KernelKind KernelFromEnvironment() {
  const char* value = std::getenv(kKernelEnvVar);
  if (value == nullptr || *value == '\0') return KernelKind::kOptimized;
  if (auto kind = ParseKernelKind(value)) return *kind;
  throw Error(ErrorCode::kInvalidConfig,
              std::string(kKernelEnvVar) + "=" + value +
                  " (expected portable or optimized)");
}

RewardScorer::RewardScorer(const MetricParams& params,
                           const DocFreqTable* df, KernelKind kernel)
    : params_(params), df_(df), kernel_(kernel) {
  params_.Validate();
  if (params_.UsesDocFreq() && df_ == nullptr) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(MetricName(params_.kind)) +
                    " needs document frequencies");
  }
  if (kernel_ == KernelKind::kOptimized) fast_.emplace(params_, df_);
}

double RewardScorer::Score(const TokenSequence& candidate,
                           std::span<const TokenSequence> refs) const {
  double out = 0.0;
  ScoreGroup(refs, std::span<const TokenSequence>(&candidate, 1),
             std::span<double>(&out, 1));
  return out;
}

void RewardScorer::ScoreGroup(std::span<const TokenSequence> refs,
                              std::span<const TokenSequence> candidates,
                              std::span<double> out) const {
  if (fast_) {
    fast_->ScoreGroup(refs, candidates, out);
    return;
  }
  if (out.size() != candidates.size()) {
    throw Error(ErrorCode::kInvalidConfig, "output size mismatch");
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    out[i] = PortableScore(params_, candidates[i], refs, df_);
  }
}

}  // namespace eoscore
