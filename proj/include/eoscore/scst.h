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

#ifndef EOSCORE_SCST_H_
#define EOSCORE_SCST_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eoscore/config.h"
#include "eoscore/corpus.h"
#include "eoscore/metrics.h"
#include "eoscore/scorer.h"

namespace eoscore {

// One image of an SCST batch. Inputs come without the EOS literal, or
// with it only as the final token; the engine adds it where the class
// requires it.
struct ImageBatch {
  std::string image_id;
  std::vector<TokenSequence> samples;
  std::vector<TokenSequence> refs;
  std::optional<TokenSequence> base;
};

struct ImageAdvantages {
  std::string image_id;
  std::vector<double> rewards;
  // Per-sample baseline. Constant across samples except for
  // average-loo.
  std::vector<double> baselines;
  std::vector<double> advantages;
  // Greedy reward, or the mean sample reward for the average bases.
  double base = 0.0;
};

struct AdvantageMatrix {
  std::string signature;
  std::vector<ImageAdvantages> images;
};

// Reward of one prepared candidate against prepared references.
using RewardFunction = std::function<double(
    const TokenSequence& candidate, std::span<const TokenSequence> refs)>;

class ScstEngine {
 public:
  struct Options {
    bool allow_mixed = false;
    KernelKind kernel = KernelKind::kOptimized;
    // Worker threads for ComputeAdvantages; results do not depend on it.
    int threads = 1;
  };

  // `corpus` must be non-null exactly for InitMode::kCorpus. Throws
  // MissingCorpus, UnexpectedCorpus, EosConflict, InvalidConfig or
  // NonStandardMixed.
  static ScstEngine Init(const ScstConfig& config, const Corpus* corpus,
                         const Options& options);
  static ScstEngine Init(const ScstConfig& config, const Corpus* corpus);

  const ScstConfig& config() const { return config_; }
  const std::string& signature() const { return signature_; }
  const Options& options() const { return options_; }
  // Null unless InitMode::kCorpus.
  const DocFreqTable* doc_freq() const { return doc_freq_.get(); }

  // Throws SampleCountMismatch, EosLiteralMisplaced, MissingBase,
  // UnexpectedBase or EmptyRefs naming the first offending image.
  void ValidateBatch(std::span<const ImageBatch> batch) const;

  AdvantageMatrix ComputeAdvantages(std::span<const ImageBatch> batch) const;
  // Same pipeline with the metric replaced by `reward`.
  AdvantageMatrix ComputeAdvantages(std::span<const ImageBatch> batch,
                                    const RewardFunction& reward) const;

 private:
  ScstEngine() = default;

  struct Prepared;
  std::vector<Prepared> Prepare(std::span<const ImageBatch> batch) const;
  AdvantageMatrix Assemble(std::span<const ImageBatch> batch,
                           const std::function<void(std::size_t)>& score,
                           std::vector<Prepared>& prepared) const;
  // Rejects a sequence whose EOS state disagrees with the reward mode.
  void CheckRewardBoundary(const TokenSequence& seq) const;

  ScstConfig config_;
  Options options_;
  std::string signature_;
  std::shared_ptr<const DocFreqTable> doc_freq_;
};

}  // namespace eoscore

#endif  // EOSCORE_SCST_H_
