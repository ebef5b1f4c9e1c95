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

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "eoscore/error.h"
#include "eoscore/metrics.h"

namespace eoscore {

DocFreqTable::Builder::Builder(int n_max, std::string_view eos_literal)
    : n_max_(n_max), eos_literal_(eos_literal) {
  if (n_max < 1 || n_max > kMaxNGramOrder) {
    throw Error(ErrorCode::kInvalidConfig,
                "n_max out of range: " + std::to_string(n_max));
  }
}

void DocFreqTable::Builder::AddImage(std::span<const TokenSequence> refs) {
  ++images_;
  std::unordered_set<NGram, NGramHash> seen;
  for (const auto& ref : refs) {
    NGramMultiset grams(ref, n_max_);
    for (int k = 1; k <= n_max_; ++k) {
      for (const auto& [gram, count] : grams.order(k)) {
        if (seen.insert(gram).second) ++df_[gram];
      }
    }
  }
}

DocFreqTable DocFreqTable::Builder::Finish() && {
  DocFreqTable table;
  table.n_max_ = n_max_;
  table.corpus_size_ = images_;
  table.eos_literal_ = std::move(eos_literal_);
  table.df_ = std::move(df_);
  table.eos_included_ = std::any_of(
      table.df_.begin(), table.df_.end(), [&](const auto& entry) {
        const NGram& gram = entry.first;
        return std::find(gram.begin(), gram.end(), table.eos_literal_) !=
               gram.end();
      });
  return table;
}

int DocFreqTable::Lookup(const NGram& ngram) const {
  auto it = df_.find(ngram);
  return it == df_.end() ? 0 : it->second;
}

DocFreqTable BuildDocFreq(const Corpus& corpus, EosMode mode, int n_max,
                          std::string_view eos_literal) {
  DocFreqTable::Builder builder(n_max, eos_literal);
  std::vector<TokenSequence> prepared;
  for (const auto& group : corpus.groups()) {
    prepared.clear();
    for (const auto& ref : group.refs) {
      if (ref.ContainsToken(eos_literal)) {
        throw Error(ErrorCode::kEosConflict,
                    group.image_id + ": reference already contains " +
                        std::string(eos_literal));
      }
      prepared.push_back(mode == EosMode::kWith ? AppendEos(ref, eos_literal)
                                                : ref);
    }
    builder.AddImage(prepared);
  }
  return std::move(builder).Finish();
}

double TfIdfVector::Weight(const NGram& ngram) const {
  if (ngram.empty() || ngram.size() > orders.size()) return 0.0;
  for (const auto& [gram, weight] : orders[ngram.size() - 1]) {
    if (gram == ngram) return weight;
  }
  return 0.0;
}

TfIdfVector TfIdf(const TokenSequence& seq, const DocFreqTable& df) {
  TfIdfVector out;
  const int n_max = df.n_max();
  out.orders.resize(static_cast<std::size_t>(n_max));
  if (df.corpus_size() == 0) return out;
  const double log_images = std::log(static_cast<double>(df.corpus_size()));
  NGramMultiset grams(seq, n_max);
  for (int k = 1; k <= n_max; ++k) {
    const double total = grams.Total(k);
    for (const auto& [gram, count] : grams.order(k)) {
      const double doc_freq =
          std::max(1.0, static_cast<double>(df.Lookup(gram)));
      out.orders[k - 1].emplace_back(
          gram, (count / total) * (log_images - std::log(doc_freq)));
    }
  }
  return out;
}

}  // namespace eoscore
