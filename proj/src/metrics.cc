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

#include "eoscore/error.h"
#include "eoscore/metrics.h"

namespace eoscore {
namespace {

// tf-idf view of one sentence as the reference scorers build it: raw term
// counts (not normalised) times log(|I|) - log(max(df, 1)).
struct SentenceVector {
  std::vector<std::vector<std::pair<const NGram*, double>>> orders;
  std::vector<std::unordered_map<NGram, double, NGramHash>> lookup;
  std::vector<double> norms;
  int length = 0;
  NGramMultiset grams;
};

SentenceVector Vectorize(const TokenSequence& seq, const DocFreqTable& df,
                         int n_max, double log_images) {
  SentenceVector v;
  v.grams = NGramMultiset(seq, n_max);
  v.orders.resize(n_max);
  v.lookup.resize(n_max);
  v.norms.assign(n_max, 0.0);
  for (int k = 1; k <= n_max; ++k) {
    for (const auto& [gram, tf] : v.grams.order(k)) {
      const double idf =
          std::log(std::max(1.0, static_cast<double>(df.Lookup(gram))));
      const double weight = static_cast<double>(tf) * (log_images - idf);
      v.orders[k - 1].emplace_back(&gram, weight);
      v.lookup[k - 1].emplace(gram, weight);
      v.norms[k - 1] += weight * weight;
      if (k == 2) v.length += tf;
    }
  }
  for (double& norm : v.norms) norm = std::sqrt(norm);
  return v;
}

double CiderFamily(const TokenSequence& candidate,
                   std::span<const TokenSequence> refs,
                   const DocFreqTable& df, const MetricParams& params) {
  if (candidate.empty() || refs.empty() || df.corpus_size() == 0) return 0.0;
  const int n = params.n_max;
  const double log_images = std::log(static_cast<double>(df.corpus_size()));
  const SentenceVector cand = Vectorize(candidate, df, n, log_images);
  detail::WordCounts cand_words;
  if (params.kind == MetricKind::kCiderR) {
    cand_words = detail::CountWords(candidate.Joined());
  }

  std::vector<double> score(n, 0.0);
  for (const auto& ref_seq : refs) {
    const SentenceVector ref = Vectorize(ref_seq, df, n, log_images);
    double scale = 1.0;
    if (params.kind == MetricKind::kCiderD) {
      scale = detail::GaussianPenalty(cand.length, ref.length, params.sigma);
    } else if (params.kind == MetricKind::kCiderR) {
      const double rep = detail::RepetitionPenalty(
          cand_words, detail::CountWords(ref_seq.Joined()));
      const double len = detail::LengthPenalty(cand.length + 1,
                                               ref.length + 1, params.alpha);
      scale = std::pow(rep, params.repeat_coeff) *
              std::pow(len, params.length_coeff);
    }
    for (int k = 0; k < n; ++k) {
      double val = 0.0;
      for (const auto& [gram, weight] : cand.orders[k]) {
        auto it = ref.lookup[k].find(*gram);
        const double ref_weight = it == ref.lookup[k].end() ? 0.0 : it->second;
        if (params.kind == MetricKind::kCider) {
          val += weight * ref_weight;
        } else {
          val += std::min(weight, ref_weight) * ref_weight;
        }
      }
      if (cand.norms[k] != 0.0 && ref.norms[k] != 0.0) {
        val /= cand.norms[k] * ref.norms[k];
      }
      if (params.kind != MetricKind::kCider) val *= scale;
      score[k] += val;
    }
  }
  double total = 0.0;
  for (double s : score) total += s;
  double mean = total / n;
  mean /= static_cast<double>(refs.size());
  return mean * 10.0;
}

void ExpectKind(const MetricParams& params, MetricKind kind) {
  if (params.kind != kind) {
    throw Error(ErrorCode::kInvalidConfig,
                "scorer called with " + std::string(MetricName(params.kind)) +
                    " parameters");
  }
}

}  // namespace

std::string_view MetricName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kCider: return "Cider";
    case MetricKind::kCiderD: return "Cider-D";
    case MetricKind::kCiderR: return "Cider-R";
    case MetricKind::kBleu: return "BLEU";
  }
  return "";
}

void MetricParams::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInvalidConfig, what);
  };
  if (n_max < 1 || n_max > kMaxNGramOrder) {
    fail("n must lie in [1, " + std::to_string(kMaxNGramOrder) + "]");
  }
  if (kind == MetricKind::kCiderD && !(std::isfinite(sigma) && sigma > 0.0)) {
    fail("sigma must be positive");
  }
  if (kind == MetricKind::kCiderR) {
    if (!(std::isfinite(repeat_coeff) && repeat_coeff > 0.0 &&
          std::isfinite(length_coeff) && length_coeff > 0.0)) {
      fail("penalty coefficients must be positive");
    }
    if (std::abs(repeat_coeff + length_coeff - 1.0) > 1e-9) {
      fail("repeat_coeff + length_coeff must equal 1");
    }
    if (!(std::isfinite(alpha) && alpha > 0.0)) fail("alpha must be positive");
  }
}

double Cider(const TokenSequence& candidate,
             std::span<const TokenSequence> refs, const DocFreqTable& df,
             const MetricParams& params) {
  ExpectKind(params, MetricKind::kCider);
  return CiderFamily(candidate, refs, df, params);
}

double CiderD(const TokenSequence& candidate,
              std::span<const TokenSequence> refs, const DocFreqTable& df,
              const MetricParams& params) {
  ExpectKind(params, MetricKind::kCiderD);
  return CiderFamily(candidate, refs, df, params);
}

double CiderR(const TokenSequence& candidate,
              std::span<const TokenSequence> refs, const DocFreqTable& df,
              const MetricParams& params) {
  ExpectKind(params, MetricKind::kCiderR);
  return CiderFamily(candidate, refs, df, params);
}

double Bleu(const TokenSequence& candidate,
            std::span<const TokenSequence> refs, const MetricParams& params) {
  if (candidate.empty() || refs.empty()) return 0.0;
  const int n = params.n_max;
  std::unordered_map<NGram, int, NGramHash> max_counts;
  std::vector<int> ref_lens;
  for (const auto& ref : refs) {
    ref_lens.push_back(static_cast<int>(ref.size()));
    NGramMultiset grams(ref, n);
    for (int k = 1; k <= n; ++k) {
      for (const auto& [gram, count] : grams.order(k)) {
        int& best = max_counts[gram];
        best = std::max(best, count);
      }
    }
  }
  std::vector<int> matches(n, 0);
  NGramMultiset cand(candidate, n);
  for (int k = 1; k <= n; ++k) {
    for (const auto& [gram, count] : cand.order(k)) {
      auto it = max_counts.find(gram);
      if (it != max_counts.end()) matches[k - 1] += std::min(it->second, count);
    }
  }
  const int test_len = static_cast<int>(candidate.size());
  return detail::BleuFromCounts(
      matches, test_len, detail::ClosestRefLength(ref_lens, test_len), n);
}

double PortableScore(const MetricParams& params,
                     const TokenSequence& candidate,
                     std::span<const TokenSequence> refs,
                     const DocFreqTable* df) {
  if (params.kind == MetricKind::kBleu) return Bleu(candidate, refs, params);
  if (df == nullptr) {
    throw Error(ErrorCode::kInvalidConfig,
                std::string(MetricName(params.kind)) +
                    " needs document frequencies");
  }
  return CiderFamily(candidate, refs, *df, params);
}

namespace detail {

WordCounts CountWords(std::string_view sentence) {
  auto is_word = [](unsigned char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
  };
  WordCounts counts;
  std::unordered_map<std::string_view, std::size_t> index;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() &&
           !is_word(static_cast<unsigned char>(sentence[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < sentence.size() &&
           is_word(static_cast<unsigned char>(sentence[i]))) {
      ++i;
    }
    if (i == start) continue;
    const std::string_view word = sentence.substr(start, i - start);
    auto [it, inserted] = index.try_emplace(word, counts.size());
    if (inserted) {
      counts.emplace_back(std::string(word), 1);
    } else {
      ++counts[it->second].second;
    }
  }
  return counts;
}

double RepetitionPenalty(const WordCounts& candidate,
                         const WordCounts& reference) {
  if (candidate.empty()) return 1.0;
  double log_sum = 0.0;
  for (const auto& [word, freq] : candidate) {
    auto it = std::find_if(reference.begin(), reference.end(),
                           [&](const auto& e) { return e.first == word; });
    const int diff =
        it != reference.end() ? std::abs(it->second - freq) : freq - 1;
    log_sum += std::log(1.0 / (1.0 + diff));
  }
  return std::exp(log_sum / static_cast<double>(candidate.size()));
}

double LengthPenalty(double candidate_len, double reference_len,
                     double alpha) {
  const double delta = std::abs(reference_len - candidate_len);
  return std::exp(-(delta * delta) / (alpha * reference_len * reference_len));
}

double GaussianPenalty(int candidate_length, int reference_length,
                       double sigma) {
  const double delta = static_cast<double>(candidate_length - reference_length);
  return std::exp(-(delta * delta) / (2.0 * sigma * sigma));
}

double BleuFromCounts(std::span<const int> matches, int test_len, int ref_len,
                      int n_max) {
  constexpr double kTiny = 1e-15;
  constexpr double kSmall = 1e-9;
  const double ratio = (test_len + kTiny) / (ref_len + kSmall);
  double product = 1.0;
  double refined = 0.0;
  for (int k = 0; k < n_max; ++k) {
    const int guesses = std::max(0, test_len - k);
    product *= (matches[k] + kTiny) / (guesses + kSmall);
    refined = std::pow(product, 1.0 / (k + 1));
    if (ratio < 1.0) refined *= std::exp(1.0 - 1.0 / ratio);
  }
  return refined;
}

int ClosestRefLength(std::span<const int> ref_lens, int test_len) {
  int best = ref_lens.empty() ? 0 : ref_lens.front();
  double best_key = 0.0;
  bool first = true;
  for (int len : ref_lens) {
    const double key = std::abs(len - test_len) +
                       static_cast<double>(len) / static_cast<double>(test_len);
    if (first || key < best_key) {
      best = len;
      best_key = key;
      first = false;
    }
  }
  return best;
}

}  // namespace detail
}  // namespace eoscore
