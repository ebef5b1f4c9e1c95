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

#include "eoscore/scst.h"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include "eoscore/error.h"
#include "eoscore/signature.h"

namespace eoscore {
namespace {

bool EndsWith(const TokenSequence& seq, std::string_view literal) {
  return !seq.empty() && seq.tokens().back() == literal;
}

TokenSequence StripTerminal(const TokenSequence& seq,
                            std::string_view literal) {
  if (!EndsWith(seq, literal)) return seq;
  std::vector<std::string> tokens(seq.tokens().begin(),
                                  seq.tokens().end() - 1);
  return TokenSequence(std::move(tokens), literal);
}

// Appends the literal; an empty sequence becomes the literal alone.
TokenSequence WithEos(const TokenSequence& seq, std::string_view literal) {
  std::vector<std::string> tokens = seq.tokens();
  tokens.emplace_back(literal);
  return TokenSequence(std::move(tokens), literal);
}

void CheckEos(const TokenSequence& seq, std::string_view literal,
              bool allow_terminal, const std::string& image_id,
              std::string_view what) {
  const std::size_t count = seq.CountToken(literal);
  if (count == 0) return;
  if (allow_terminal && count == 1 && EndsWith(seq, literal)) return;
  throw Error(ErrorCode::kEosLiteralMisplaced,
              image_id + ": " + std::string(what) + " '" + seq.Joined() +
                  "' contains " + std::string(literal) +
                  (allow_terminal ? " before its final position"
                                  : " but this class omits EOS"));
}

void RunParallel(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(
      count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

struct ScstEngine::Prepared {
  std::vector<TokenSequence> samples;
  std::vector<TokenSequence> refs;
  // References as they enter batch document frequencies.
  std::vector<TokenSequence> df_refs;
  std::optional<TokenSequence> base;
  std::vector<double> rewards;
  double base_reward = 0.0;
};

ScstEngine ScstEngine::Init(const ScstConfig& config, const Corpus* corpus) {
  return Init(config, corpus, Options());
}

ScstEngine ScstEngine::Init(const ScstConfig& config, const Corpus* corpus,
                            const Options& options) {
  config.Validate(options.allow_mixed);
  if (config.init_mode == InitMode::kCorpus && corpus == nullptr) {
    throw Error(ErrorCode::kMissingCorpus,
                "corpus initialization needs a training corpus");
  }
  if (config.init_mode == InitMode::kBatch && corpus != nullptr) {
    throw Error(ErrorCode::kUnexpectedCorpus,
                "batch initialization computes document frequencies from "
                "each batch; no corpus is accepted");
  }
  ScstEngine engine;
  engine.config_ = config;
  engine.options_ = options;
  if (corpus != nullptr) {
    engine.doc_freq_ = std::make_shared<const DocFreqTable>(BuildDocFreq(
        *corpus, config.InitUsesEos() ? EosMode::kWith : EosMode::kWithout,
        config.metric.n_max, config.eos_literal));
  }
  engine.signature_ = GenerateSignature(config);
  return engine;
}

void ScstEngine::ValidateBatch(std::span<const ImageBatch> batch) const {
  const std::string& literal = config_.eos_literal;
  const bool reward_eos = config_.RewardUsesEos();
  const bool ref_eos = reward_eos || config_.InitUsesEos();
  for (const ImageBatch& image : batch) {
    if (image.refs.empty()) {
      throw Error(ErrorCode::kEmptyRefs, image.image_id + ": no references");
    }
    if (image.samples.size() != static_cast<std::size_t>(config_.nspi)) {
      throw Error(ErrorCode::kSampleCountMismatch,
                  image.image_id + ": " +
                      std::to_string(image.samples.size()) +
                      " samples, expected nspi=" +
                      std::to_string(config_.nspi));
    }
    const bool greedy = config_.base_mode == BaseMode::kGreedy;
    if (greedy && !image.base) {
      throw Error(ErrorCode::kMissingBase,
                  image.image_id + ": greedy base requires a base sequence");
    }
    if (!greedy && image.base) {
      throw Error(ErrorCode::kUnexpectedBase,
                  image.image_id + ": " +
                      std::string(BaseTag(config_.base_mode)) +
                      " base takes no base sequence");
    }
    for (const auto& sample : image.samples) {
      CheckEos(sample, literal, reward_eos, image.image_id, "sample");
    }
    if (image.base) {
      CheckEos(*image.base, literal, reward_eos, image.image_id, "base");
    }
    for (const auto& ref : image.refs) {
      if (ref.empty()) {
        throw Error(ErrorCode::kEmptyRefs,
                    image.image_id + ": empty reference");
      }
      CheckEos(ref, literal, ref_eos, image.image_id, "reference");
    }
  }
}

void ScstEngine::CheckRewardBoundary(const TokenSequence& seq) const {
  const std::string& literal = config_.eos_literal;
  const bool ok = config_.RewardUsesEos()
                      ? EndsWith(seq, literal) && seq.CountToken(literal) == 1
                      : !seq.ContainsToken(literal);
  if (!ok) {
    throw Error(ErrorCode::kEosLiteralMisplaced,
                "reward boundary received '" + seq.Joined() + "'");
  }
}

std::vector<ScstEngine::Prepared> ScstEngine::Prepare(
    std::span<const ImageBatch> batch) const {
  const std::string& literal = config_.eos_literal;
  auto for_reward = [&](const TokenSequence& seq) {
    const TokenSequence plain = StripTerminal(seq, literal);
    TokenSequence out =
        config_.RewardUsesEos() ? WithEos(plain, literal) : plain;
    CheckRewardBoundary(out);
    return out;
  };
  std::vector<Prepared> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const ImageBatch& image = batch[i];
    Prepared& p = out[i];
    for (const auto& s : image.samples) p.samples.push_back(for_reward(s));
    for (const auto& r : image.refs) {
      p.refs.push_back(for_reward(r));
      const TokenSequence plain = StripTerminal(r, literal);
      p.df_refs.push_back(config_.InitUsesEos() ? WithEos(plain, literal)
                                                : plain);
    }
    if (image.base) p.base = for_reward(*image.base);
    p.rewards.assign(p.samples.size(), 0.0);
  }
  return out;
}

AdvantageMatrix ScstEngine::Assemble(
    std::span<const ImageBatch> batch,
    const std::function<void(std::size_t)>& score,
    std::vector<Prepared>& prepared) const {
  RunParallel(prepared.size(), options_.threads, score);
  AdvantageMatrix matrix;
  matrix.signature = signature_;
  matrix.images.reserve(prepared.size());
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    Prepared& p = prepared[i];
    ImageAdvantages row;
    row.image_id = batch[i].image_id;
    row.rewards = std::move(p.rewards);
    const std::size_t count = row.rewards.size();
    double sum = 0.0;
    for (double r : row.rewards) sum += r;
    switch (config_.base_mode) {
      case BaseMode::kGreedy:
        row.base = p.base_reward;
        row.baselines.assign(count, row.base);
        break;
      case BaseMode::kAverage:
        row.base = sum / static_cast<double>(count);
        row.baselines.assign(count, row.base);
        break;
      case BaseMode::kAverageLeaveOneOut:
        row.base = sum / static_cast<double>(count);
        for (double r : row.rewards) {
          row.baselines.push_back((sum - r) / static_cast<double>(count - 1));
        }
        break;
    }
    for (std::size_t s = 0; s < count; ++s) {
      row.advantages.push_back(row.rewards[s] - row.baselines[s]);
    }
    matrix.images.push_back(std::move(row));
  }
  return matrix;
}

AdvantageMatrix ScstEngine::ComputeAdvantages(
    std::span<const ImageBatch> batch) const {
  ValidateBatch(batch);
  std::vector<Prepared> prepared = Prepare(batch);

  const DocFreqTable* df = doc_freq_.get();
  std::optional<DocFreqTable> batch_df;
  if (config_.init_mode == InitMode::kBatch && config_.metric.UsesDocFreq()) {
    DocFreqTable::Builder builder(config_.metric.n_max, config_.eos_literal);
    for (const Prepared& p : prepared) builder.AddImage(p.df_refs);
    batch_df.emplace(std::move(builder).Finish());
    df = &*batch_df;
  }
  const RewardScorer scorer(config_.metric, df, options_.kernel);
  const bool greedy = config_.base_mode == BaseMode::kGreedy;
  return Assemble(
      batch,
      [&](std::size_t i) {
        Prepared& p = prepared[i];
        scorer.ScoreGroup(p.refs, p.samples, p.rewards);
        if (greedy) p.base_reward = scorer.Score(*p.base, p.refs);
      },
      prepared);
}

AdvantageMatrix ScstEngine::ComputeAdvantages(
    std::span<const ImageBatch> batch, const RewardFunction& reward) const {
  ValidateBatch(batch);
  std::vector<Prepared> prepared = Prepare(batch);
  const bool greedy = config_.base_mode == BaseMode::kGreedy;
  return Assemble(
      batch,
      [&](std::size_t i) {
        Prepared& p = prepared[i];
        for (std::size_t s = 0; s < p.samples.size(); ++s) {
          p.rewards[s] = reward(p.samples[s], p.refs);
        }
        if (greedy) p.base_reward = reward(*p.base, p.refs);
      },
      prepared);
}

}  // namespace eoscore
