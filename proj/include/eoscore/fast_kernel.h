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

#ifndef EOSCORE_FAST_KERNEL_H_
#define EOSCORE_FAST_KERNEL_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eoscore/corpus.h"
#include "eoscore/metrics.h"

namespace eoscore {

// Hash-consed view of a DocFreqTable. Every stored n-gram is a trie node
// keyed by (parent node, token id); node ids are dense so per-node data
// lives in flat arrays.
class NGramIndex {
 public:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;
  static constexpr std::uint32_t kRoot = 0xFFFFFFFEu;

  NGramIndex() = default;
  explicit NGramIndex(const DocFreqTable& df);

  std::uint32_t Token(std::string_view token) const;
  std::uint32_t Child(std::uint32_t parent, std::uint32_t token) const;

  std::uint32_t token_count() const {
    return static_cast<std::uint32_t>(tokens_.size());
  }
  std::uint32_t node_count() const {
    return static_cast<std::uint32_t>(idf_.size());
  }
  // log(|I|) - log(max(df, 1)) of a stored node.
  double Idf(std::uint32_t node) const { return idf_[node]; }
  // Idf of an n-gram absent from the table.
  double unseen_idf() const { return unseen_idf_; }

 private:
  std::unordered_map<std::string, std::uint32_t> tokens_;
  std::unordered_map<std::uint64_t, std::uint32_t> children_;
  std::vector<double> idf_;
  double unseen_idf_ = 0.0;
};

// Optimized scorer for every supported metric. Produces bit-identical
// results to PortableScore: accumulation order follows first-occurrence
// order of candidate n-grams in both paths.
class FastKernel {
 public:
  // `df` may be null for BLEU.
  FastKernel(const MetricParams& params, const DocFreqTable* df);

  // Scores each candidate against `refs`; out.size() == candidates.size().
  // Reuses a per-thread workspace.
  void ScoreGroup(std::span<const TokenSequence> refs,
                  std::span<const TokenSequence> candidates,
                  std::span<double> out) const;

  const MetricParams& params() const { return params_; }

 private:
  struct Workspace;
  void BindRefs(std::span<const TokenSequence> refs, Workspace& ws) const;
  double ScoreCider(const TokenSequence& candidate, Workspace& ws) const;
  double ScoreBleu(const TokenSequence& candidate, Workspace& ws) const;

  MetricParams params_;
  NGramIndex index_;
  std::size_t corpus_size_ = 0;
};

}  // namespace eoscore

#endif  // EOSCORE_FAST_KERNEL_H_
