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

#ifndef EOSCORE_CONFIG_H_
#define EOSCORE_CONFIG_H_

#include <string>
#include <string_view>

#include "eoscore/corpus.h"
#include "eoscore/metrics.h"

namespace eoscore {

// Library version embedded in every signature.
inline constexpr std::string_view kVersion = "1.0.0";

// The four cells of the init x reward EOS matrix. The off-diagonal cells
// need ScstConfig::Validate(allow_mixed = true).
enum class ScstClass {
  kStandard,        // EOS in df initialization and in the reward.
  kNoEos,           // EOS in neither.
  kMixedInitEos,    // EOS in df initialization only.
  kMixedRewardEos,  // EOS in the reward only.
};

// Corpus-level document frequencies (wInit) or per-batch ones (w/oInit).
enum class InitMode { kCorpus, kBatch };

// kAverage is the mean over all samples of the image, self included.
enum class BaseMode { kGreedy, kAverage, kAverageLeaveOneOut };

ScstClass ClassFor(bool init_eos, bool reward_eos);

// MAJOR.MINOR.PATCH, digits only, no leading zeros.
bool IsStrictSemver(std::string_view version);

struct ScstConfig {
  ScstClass scst_class = ScstClass::kStandard;
  InitMode init_mode = InitMode::kCorpus;
  MetricParams metric;
  BaseMode base_mode = BaseMode::kAverage;
  int nspi = 5;
  std::string eos_literal = std::string(kDefaultEosLiteral);
  std::string version = std::string(kVersion);

  bool InitUsesEos() const;
  bool RewardUsesEos() const;
  bool IsMixed() const;

  // Throws InvalidConfig for bad fields and NonStandardMixed for an
  // off-diagonal class when `allow_mixed` is false.
  void Validate(bool allow_mixed = false) const;

  friend bool operator==(const ScstConfig&, const ScstConfig&) = default;
};

}  // namespace eoscore

#endif  // EOSCORE_CONFIG_H_
