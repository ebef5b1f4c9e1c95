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

#include "eoscore/fast_kernel.h"

#include <algorithm>
#include <cmath>

#include "eoscore/error.h"

namespace eoscore {
namespace {

std::uint64_t PackKey(std::uint32_t parent, std::uint32_t token) {
  return (static_cast<std::uint64_t>(parent) << 32) | token;
}

}  // namespace

NGramIndex::NGramIndex(const DocFreqTable& df) {
  const double log_images =
      df.corpus_size() ? std::log(static_cast<double>(df.corpus_size())) : 0.0;
  unseen_idf_ = log_images - std::log(std::max(1.0, 0.0));

  std::vector<const DocFreqTable::Map::value_type*> entries;
  entries.reserve(df.entries().size());
  for (const auto& entry : df.entries()) entries.push_back(&entry);
  std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
    return a->first.size() < b->first.size();
  });

  tokens_.reserve(entries.size());
  children_.reserve(entries.size());
  idf_.reserve(entries.size());
  for (const auto* entry : entries) {
    const NGram& gram = entry->first;
    std::uint32_t node = kRoot;
    for (std::size_t i = 0; i < gram.size(); ++i) {
      auto [tok, tok_inserted] = tokens_.try_emplace(
          gram[i], static_cast<std::uint32_t>(tokens_.size()));
      auto [child, inserted] = children_.try_emplace(
          PackKey(node, tok->second), static_cast<std::uint32_t>(idf_.size()));
      if (inserted) idf_.push_back(unseen_idf_);
      node = child->second;
    }
    idf_[node] = log_images -
                 std::log(std::max(1.0, static_cast<double>(entry->second)));
  }
}

std::uint32_t NGramIndex::Token(std::string_view token) const {
  auto it = tokens_.find(std::string(token));
  return it == tokens_.end() ? kNone : it->second;
}

std::uint32_t NGramIndex::Child(std::uint32_t parent,
                                std::uint32_t token) const {
  auto it = children_.find(PackKey(parent, token));
  return it == children_.end() ? kNone : it->second;
}

// Reusable buffers. Interning tables outside the index live for one bound
// reference group; per-sequence scratch is overwritten on every call.
struct FastKernel::Workspace {
  std::unordered_map<std::string, std::uint32_t> extra_tokens;
  std::unordered_map<std::uint64_t, std::uint32_t> extra_nodes;

  std::unordered_map<std::uint32_t, std::uint32_t> slot_of;
  std::size_t ref_count = 0;
  std::size_t slot_count = 0;
  std::vector<double> ref_weights;  // ref_count x slot_count
  std::vector<double> ref_norms;    // ref_count x n
  std::vector<int> ref_lengths;
  std::vector<detail::WordCounts> ref_words;
  std::vector<int> ref_max_counts;  // per slot
  std::vector<int> ref_token_lens;

  // Per-sequence scratch.
  std::vector<std::uint32_t> token_ids;
  std::vector<std::uint32_t> level;
  std::vector<std::vector<std::pair<std::uint32_t, int>>> entries;
  std::vector<std::vector<double>> weights;
  std::vector<double> norms;
  int length = 0;
  std::unordered_map<std::uint32_t, std::uint32_t> position;
  std::vector<std::pair<std::uint32_t, double>> staged;
  std::vector<std::size_t> staged_offsets;
};

namespace {

std::uint32_t ResolveToken(const NGramIndex& index,
                           std::unordered_map<std::string, std::uint32_t>& extra,
                           const std::string& token) {
  const std::uint32_t id = index.Token(token);
  if (id != NGramIndex::kNone) return id;
  auto [it, inserted] = extra.try_emplace(
      token, index.token_count() + static_cast<std::uint32_t>(extra.size()));
  return it->second;
}

std::uint32_t ResolveChild(
    const NGramIndex& index,
    std::unordered_map<std::uint64_t, std::uint32_t>& extra,
    std::uint32_t parent, std::uint32_t token) {
  const bool parent_known =
      parent == NGramIndex::kRoot || parent < index.node_count();
  if (parent_known && token < index.token_count()) {
    const std::uint32_t node = index.Child(parent, token);
    if (node != NGramIndex::kNone) return node;
  }
  auto [it, inserted] = extra.try_emplace(
      PackKey(parent, token),
      index.node_count() + static_cast<std::uint32_t>(extra.size()));
  return it->second;
}

}  // namespace

FastKernel::FastKernel(const MetricParams& params, const DocFreqTable* df)
    : params_(params) {
  params_.Validate();
  if (params_.UsesDocFreq()) {
    if (df == nullptr) {
      throw Error(ErrorCode::kInvalidConfig,
                  std::string(MetricName(params_.kind)) +
                      " needs document frequencies");
    }
    index_ = NGramIndex(*df);
    corpus_size_ = df->corpus_size();
  }
}

namespace {

// Fills ws.entries / ws.weights / ws.norms / ws.length for one sequence.
template <typename Ws>
void Vectorize(const TokenSequence& seq, const NGramIndex& index, int n,
               bool weigh, Ws& ws) {
  const auto& tokens = seq.tokens();
  const std::size_t len = tokens.size();
  ws.token_ids.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    ws.token_ids[i] = ResolveToken(index, ws.extra_tokens, tokens[i]);
  }
  ws.entries.resize(n);
  ws.weights.resize(n);
  ws.norms.assign(n, 0.0);
  ws.length = 0;
  ws.level.assign(len, NGramIndex::kRoot);
  for (int k = 1; k <= n; ++k) {
    auto& entries = ws.entries[k - 1];
    entries.clear();
    ws.position.clear();
    if (len < static_cast<std::size_t>(k)) {
      ws.weights[k - 1].clear();
      continue;
    }
    const std::size_t windows = len - k + 1;
    for (std::size_t i = 0; i < windows; ++i) {
      const std::uint32_t node = ResolveChild(index, ws.extra_nodes,
                                              ws.level[i], ws.token_ids[i + k - 1]);
      ws.level[i] = node;
      auto [it, inserted] = ws.position.try_emplace(
          node, static_cast<std::uint32_t>(entries.size()));
      if (inserted) {
        entries.emplace_back(node, 1);
      } else {
        ++entries[it->second].second;
      }
    }
    auto& weights = ws.weights[k - 1];
    weights.clear();
    for (const auto& [node, tf] : entries) {
      if (weigh) {
        const double idf =
            node < index.node_count() ? index.Idf(node) : index.unseen_idf();
        const double weight = static_cast<double>(tf) * idf;
        weights.push_back(weight);
        ws.norms[k - 1] += weight * weight;
      }
      if (k == 2) ws.length += tf;
    }
  }
  if (weigh) {
    for (double& norm : ws.norms) norm = std::sqrt(norm);
  }
}

}  // namespace

void FastKernel::BindRefs(std::span<const TokenSequence> refs,
                          Workspace& ws) const {
  const int n = params_.n_max;
  const bool cider = params_.UsesDocFreq();
  ws.extra_tokens.clear();
  ws.extra_nodes.clear();
  ws.slot_of.clear();
  ws.ref_count = refs.size();
  ws.ref_norms.assign(refs.size() * n, 0.0);
  ws.ref_lengths.assign(refs.size(), 0);
  ws.ref_words.resize(refs.size());
  ws.ref_token_lens.assign(refs.size(), 0);
  ws.ref_max_counts.clear();
  ws.staged.clear();
  ws.staged_offsets.assign(1, 0);

  for (std::size_t j = 0; j < refs.size(); ++j) {
    Vectorize(refs[j], index_, n, cider, ws);
    ws.ref_lengths[j] = ws.length;
    ws.ref_token_lens[j] = static_cast<int>(refs[j].size());
    for (int k = 0; k < n; ++k) {
      if (cider) ws.ref_norms[j * n + k] = ws.norms[k];
      for (std::size_t e = 0; e < ws.entries[k].size(); ++e) {
        const auto [node, tf] = ws.entries[k][e];
        auto [it, inserted] = ws.slot_of.try_emplace(
            node, static_cast<std::uint32_t>(ws.slot_of.size()));
        if (cider) {
          ws.staged.emplace_back(it->second, ws.weights[k][e]);
        } else {
          if (inserted) ws.ref_max_counts.push_back(0);
          ws.ref_max_counts[it->second] =
              std::max(ws.ref_max_counts[it->second], tf);
        }
      }
    }
    ws.staged_offsets.push_back(ws.staged.size());
    if (params_.kind == MetricKind::kCiderR) {
      ws.ref_words[j] = detail::CountWords(refs[j].Joined());
    }
  }

  ws.slot_count = ws.slot_of.size();
  if (cider) {
    ws.ref_weights.assign(ws.ref_count * ws.slot_count, 0.0);
    for (std::size_t j = 0; j < ws.ref_count; ++j) {
      for (std::size_t s = ws.staged_offsets[j]; s < ws.staged_offsets[j + 1];
           ++s) {
        ws.ref_weights[j * ws.slot_count + ws.staged[s].first] =
            ws.staged[s].second;
      }
    }
  }
}

double FastKernel::ScoreCider(const TokenSequence& candidate,
                              Workspace& ws) const {
  const int n = params_.n_max;
  Vectorize(candidate, index_, n, true, ws);
  detail::WordCounts cand_words;
  if (params_.kind == MetricKind::kCiderR) {
    cand_words = detail::CountWords(candidate.Joined());
  }

  // Slot of every candidate entry, resolved once for all references.
  thread_local std::vector<std::vector<std::int64_t>> slots;
  slots.resize(n);
  for (int k = 0; k < n; ++k) {
    slots[k].clear();
    for (const auto& [node, tf] : ws.entries[k]) {
      auto it = ws.slot_of.find(node);
      slots[k].push_back(it == ws.slot_of.end()
                             ? std::int64_t{-1}
                             : static_cast<std::int64_t>(it->second));
    }
  }

  double score[kMaxNGramOrder] = {};
  for (std::size_t j = 0; j < ws.ref_count; ++j) {
    const double* ref_weights = ws.ref_weights.data() + j * ws.slot_count;
    const double* ref_norms = ws.ref_norms.data() + j * n;
    double scale = 1.0;
    if (params_.kind == MetricKind::kCiderD) {
      scale = detail::GaussianPenalty(ws.length, ws.ref_lengths[j],
                                      params_.sigma);
    } else if (params_.kind == MetricKind::kCiderR) {
      const double rep =
          detail::RepetitionPenalty(cand_words, ws.ref_words[j]);
      const double len = detail::LengthPenalty(
          ws.length + 1, ws.ref_lengths[j] + 1, params_.alpha);
      scale = std::pow(rep, params_.repeat_coeff) *
              std::pow(len, params_.length_coeff);
    }
    for (int k = 0; k < n; ++k) {
      double val = 0.0;
      const auto& weights = ws.weights[k];
      for (std::size_t e = 0; e < weights.size(); ++e) {
        const std::int64_t slot = slots[k][e];
        const double ref_weight = slot < 0 ? 0.0 : ref_weights[slot];
        if (params_.kind == MetricKind::kCider) {
          val += weights[e] * ref_weight;
        } else {
          val += std::min(weights[e], ref_weight) * ref_weight;
        }
      }
      if (ws.norms[k] != 0.0 && ref_norms[k] != 0.0) {
        val /= ws.norms[k] * ref_norms[k];
      }
      if (params_.kind != MetricKind::kCider) val *= scale;
      score[k] += val;
    }
  }
  double total = 0.0;
  for (int k = 0; k < n; ++k) total += score[k];
  double mean = total / n;
  mean /= static_cast<double>(ws.ref_count);
  return mean * 10.0;
}

double FastKernel::ScoreBleu(const TokenSequence& candidate,
                             Workspace& ws) const {
  const int n = params_.n_max;
  Vectorize(candidate, index_, n, false, ws);
  int matches[kMaxNGramOrder] = {};
  for (int k = 0; k < n; ++k) {
    for (const auto& [node, tf] : ws.entries[k]) {
      auto it = ws.slot_of.find(node);
      if (it != ws.slot_of.end()) {
        matches[k] += std::min(ws.ref_max_counts[it->second], tf);
      }
    }
  }
  const int test_len = static_cast<int>(candidate.size());
  return detail::BleuFromCounts(
      std::span<const int>(matches, n), test_len,
      detail::ClosestRefLength(ws.ref_token_lens, test_len), n);
}

void FastKernel::ScoreGroup(std::span<const TokenSequence> refs,
                            std::span<const TokenSequence> candidates,
                            std::span<double> out) const {
  if (out.size() != candidates.size()) {
    throw Error(ErrorCode::kInvalidConfig, "output size mismatch");
  }
  thread_local Workspace ws;
  BindRefs(refs, ws);
  const bool bleu = params_.kind == MetricKind::kBleu;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const TokenSequence& cand = candidates[i];
    if (cand.empty() || refs.empty() || (!bleu && corpus_size_ == 0)) {
      out[i] = 0.0;
      continue;
    }
    out[i] = bleu ? ScoreBleu(cand, ws) : ScoreCider(cand, ws);
  }
}

}  // namespace eoscore
