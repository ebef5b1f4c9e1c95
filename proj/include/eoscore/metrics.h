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

#ifndef EOSCORE_METRICS_H_
#define EOSCORE_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eoscore/corpus.h"

namespace eoscore {

enum class EosMode { kWith, kWithout };
enum class MetricKind { kCider, kCiderD, kCiderR, kBleu };

// Signature spelling: "Cider", "Cider-D", "Cider-R", "BLEU".
std::string_view MetricName(MetricKind kind);

struct MetricParams {
  MetricKind kind = MetricKind::kCiderD;
  int n_max = 4;
  // Gaussian length-penalty scale (CIDEr-D).
  double sigma = 6.0;
  // CIDEr-R: penalty exponents (must sum to 1) and length deviance.
  double repeat_coeff = 0.8;
  double length_coeff = 0.2;
  double alpha = 1.0;

  // Throws InvalidConfig.
  void Validate() const;
  bool UsesDocFreq() const { return kind != MetricKind::kBleu; }

  friend bool operator==(const MetricParams&, const MetricParams&) = default;
};

// Corpus document frequencies: for every n-gram, the number of images with
// at least one reference containing it.
class DocFreqTable {
 public:
  using Map = std::unordered_map<NGram, int, NGramHash>;

  // Accumulates images whose references are taken verbatim (no EOS edits).
  class Builder {
   public:
    Builder(int n_max, std::string_view eos_literal);
    void AddImage(std::span<const TokenSequence> refs);
    DocFreqTable Finish() &&;

   private:
    int n_max_;
    std::string eos_literal_;
    std::size_t images_ = 0;
    Map df_;
  };

  DocFreqTable() = default;

  int n_max() const { return n_max_; }
  std::size_t corpus_size() const { return corpus_size_; }
  bool eos_included() const { return eos_included_; }
  const std::string& eos_literal() const { return eos_literal_; }
  // 0 for n-grams never seen in the corpus.
  int Lookup(const NGram& ngram) const;
  const Map& entries() const { return df_; }

 private:
  Map df_;
  std::size_t corpus_size_ = 0;
  int n_max_ = 0;
  bool eos_included_ = false;
  std::string eos_literal_;
};

// Document frequencies over `corpus`. With kWith the literal is appended to
// every reference first. Throws EosConflict when a reference already holds
// the literal, InvalidConfig for a bad n_max.
DocFreqTable BuildDocFreq(const Corpus& corpus, EosMode mode, int n_max,
                          std::string_view eos_literal = kDefaultEosLiteral);

// Per-order tf-idf weights in first-occurrence order; tf is normalised by
// the number of n-grams of the same order.
struct TfIdfVector {
  std::vector<std::vector<std::pair<NGram, double>>> orders;

  double Weight(const NGram& ngram) const;
};

TfIdfVector TfIdf(const TokenSequence& seq, const DocFreqTable& df);

// Sentence-level scorers. Degenerate inputs (empty candidate, no
// references, zero-norm vectors) contribute 0. CIDEr-family scores lie in
// [0, 10], BLEU in [0, 1].
double Cider(const TokenSequence& candidate,
             std::span<const TokenSequence> refs, const DocFreqTable& df,
             const MetricParams& params);
double CiderD(const TokenSequence& candidate,
              std::span<const TokenSequence> refs, const DocFreqTable& df,
              const MetricParams& params);
double CiderR(const TokenSequence& candidate,
              std::span<const TokenSequence> refs, const DocFreqTable& df,
              const MetricParams& params);
double Bleu(const TokenSequence& candidate,
            std::span<const TokenSequence> refs, const MetricParams& params);

// Dispatches on params.kind. `df` may be null for BLEU only.
double PortableScore(const MetricParams& params,
                     const TokenSequence& candidate,
                     std::span<const TokenSequence> refs,
                     const DocFreqTable* df);

namespace detail {

// Word counts over the \w+ runs of a sentence, first-occurrence order. Bytes
// >= 0x80 count as word characters.
using WordCounts = std::vector<std::pair<std::string, int>>;
WordCounts CountWords(std::string_view sentence);

// Geometric mean of 1 / (1 + |count difference|) over candidate words.
double RepetitionPenalty(const WordCounts& candidate,
                         const WordCounts& reference);
double LengthPenalty(double candidate_len, double reference_len,
                     double alpha);

// Number of bigram occurrences: the length the reference scorers use in
// their length penalties.
inline int PenaltyLength(std::size_t tokens, int n_max) {
  return (n_max >= 2 && tokens >= 2) ? static_cast<int>(tokens) - 1 : 0;
}

// Per-order similarity scaling for CIDEr-D / CIDEr-R.
double GaussianPenalty(int candidate_length, int reference_length,
                       double sigma);

// Final BLEU-n from per-order clipped match counts.
double BleuFromCounts(std::span<const int> matches, int test_len,
                      int ref_len, int n_max);
// Closest reference length; ties resolve to the earliest reference.
int ClosestRefLength(std::span<const int> ref_lens, int test_len);

}  // namespace detail
}  // namespace eoscore

#endif  // EOSCORE_METRICS_H_
