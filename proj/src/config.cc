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

#include <cctype>
#include <string>

#include "eoscore/config.h"
#include "eoscore/error.h"

namespace eoscore {

ScstClass ClassFor(bool init_eos, bool reward_eos) {
  if (init_eos && reward_eos) return ScstClass::kStandard;
  if (!init_eos && !reward_eos) return ScstClass::kNoEos;
  return init_eos ? ScstClass::kMixedInitEos : ScstClass::kMixedRewardEos;
}

bool IsStrictSemver(std::string_view version) {
  int parts = 0;
  std::size_t i = 0;
  while (true) {
    const std::size_t start = i;
    while (i < version.size() &&
           std::isdigit(static_cast<unsigned char>(version[i]))) {
      ++i;
    }
    const std::size_t len = i - start;
    if (len == 0 || len > 9 || (len > 1 && version[start] == '0')) {
      return false;
    }
    ++parts;
    if (i == version.size()) return parts == 3;
    if (version[i] != '.' || parts == 3) return false;
    ++i;
  }
}

bool ScstConfig::InitUsesEos() const {
  return scst_class == ScstClass::kStandard ||
         scst_class == ScstClass::kMixedInitEos;
}

bool ScstConfig::RewardUsesEos() const {
  return scst_class == ScstClass::kStandard ||
         scst_class == ScstClass::kMixedRewardEos;
}

bool ScstConfig::IsMixed() const {
  return scst_class == ScstClass::kMixedInitEos ||
         scst_class == ScstClass::kMixedRewardEos;
}

void ScstConfig::Validate(bool allow_mixed) const {
  metric.Validate();
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidConfig, what);
  };
  if (nspi < 1) fail("nspi must be at least 1");
  if (base_mode != BaseMode::kGreedy && nspi < 2) {
    fail("an average base needs nspi >= 2");
  }
  if (eos_literal.empty()) fail("empty EOS literal");
  for (char c : eos_literal) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      fail("EOS literal contains whitespace");
    }
  }
  if (!IsStrictSemver(version)) fail("version is not X.Y.Z: " + version);
  if (metric.kind == MetricKind::kBleu && init_mode == InitMode::kCorpus) {
    fail("BLEU has no document frequencies to initialize; use batch init");
  }
  if (IsMixed() && !allow_mixed) {
    throw Error(ErrorCode::kNonStandardMixed,
                "init and reward disagree on EOS; pass allow_mixed to study "
                "this configuration");
  }
}

}  // namespace eoscore
