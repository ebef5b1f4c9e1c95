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

#ifndef EOSCORE_SCORER_H_
#define EOSCORE_SCORER_H_

#include <optional>
#include <span>
#include <string_view>

#include "eoscore/corpus.h"
#include "eoscore/fast_kernel.h"
#include "eoscore/metrics.h"

namespace eoscore {

enum class KernelKind { kPortable, kOptimized };

inline constexpr char kKernelEnvVar[] = "EOSCORE_KERNEL";

std::string_view KernelName(KernelKind kind);
// Accepts "portable" and "optimized"; nullopt otherwise.
std::optional<KernelKind> ParseKernelKind(std::string_view name);
// Reads EOSCORE_KERNEL. Unset means kOptimized; an unknown value throws
// InvalidConfig.
KernelKind KernelFromEnvironment();

// A metric bound to one document-frequency table and one kernel. Both
// kernels produce bit-identical scores. `df` must outlive the scorer and
// may be null for BLEU.
class RewardScorer {
 public:
  RewardScorer(const MetricParams& params, const DocFreqTable* df,
               KernelKind kernel);

  double Score(const TokenSequence& candidate,
               std::span<const TokenSequence> refs) const;
  void ScoreGroup(std::span<const TokenSequence> refs,
                  std::span<const TokenSequence> candidates,
                  std::span<double> out) const;

  const MetricParams& params() const { return params_; }
  KernelKind kernel() const { return kernel_; }

 private:
  MetricParams params_;
  const DocFreqTable* df_;
  KernelKind kernel_;
  std::optional<FastKernel> fast_;
};

}  // namespace eoscore

#endif  // EOSCORE_SCORER_H_
