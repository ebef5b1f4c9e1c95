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

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "eoscore/error.h"
#include "gtest/gtest.h"
#include "oracle_fixture.h"
#include "test_util.h"

namespace eoscore {
namespace {

using oracle::Fixture;
using testing::Seq;
using testing::Seqs;
using testing::SentenceGen;

ScstConfig Config(ScstClass cls, InitMode init, MetricKind kind,
                  BaseMode base, int nspi) {
  ScstConfig c;
  c.scst_class = cls;
  c.init_mode = init;
  c.metric.kind = kind;
  c.base_mode = base;
  c.nspi = nspi;
  return c;
}

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kAborted;
}

std::string MessageOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(ScstEngineInit, SignatureAtInit) {
  const Fixture fx = Fixture::Load();
  const ScstEngine std_engine = ScstEngine::Init(
      Config(ScstClass::kStandard, InitMode::kCorpus, MetricKind::kCiderD,
             BaseMode::kAverage, 5),
      &fx.corpus);
  EXPECT_EQ(std_engine.signature().rfind(
                "STANDARD_wInit+Cider-D[n4,s6.0]+average[nspi5]", 0),
            0u);
  ASSERT_NE(std_engine.doc_freq(), nullptr);
  EXPECT_TRUE(std_engine.doc_freq()->eos_included());
  const ScstEngine no_eos = ScstEngine::Init(
      Config(ScstClass::kNoEos, InitMode::kBatch, MetricKind::kBleu,
             BaseMode::kAverage, 5),
      nullptr);
  EXPECT_EQ(no_eos.signature().rfind("NO<EOS>MODE_w/oInit", 0), 0u);
  EXPECT_EQ(no_eos.doc_freq(), nullptr);
}

TEST(ScstEngineInit, Errors) {
  const Fixture fx = Fixture::Load();
  const ScstConfig corpus_cfg = Config(ScstClass::kStandard, InitMode::kCorpus,
                                       MetricKind::kCiderD, BaseMode::kAverage, 5);
  EXPECT_EQ(CodeOf([&] { ScstEngine::Init(corpus_cfg, nullptr); }),
            ErrorCode::kMissingCorpus);
  ScstConfig batch_cfg = corpus_cfg;
  batch_cfg.init_mode = InitMode::kBatch;
  EXPECT_EQ(CodeOf([&] { ScstEngine::Init(batch_cfg, &fx.corpus); }),
            ErrorCode::kUnexpectedCorpus);
  const Corpus eos_corpus({{"x", Seqs({"a dog <eos>"})}});
  EXPECT_EQ(CodeOf([&] { ScstEngine::Init(corpus_cfg, &eos_corpus); }),
            ErrorCode::kEosConflict);
  ScstConfig mixed = corpus_cfg;
  mixed.scst_class = ScstClass::kMixedInitEos;
  EXPECT_EQ(CodeOf([&] { ScstEngine::Init(mixed, &fx.corpus); }),
            ErrorCode::kNonStandardMixed);
  ScstEngine::Options allow;
  allow.allow_mixed = true;
  EXPECT_EQ(ScstEngine::Init(mixed, &fx.corpus, allow).signature().rfind(
                "MIXED-INIT<EOS>_wInit", 0),
            0u);
  ScstConfig one = corpus_cfg;
  one.nspi = 1;
  EXPECT_EQ(CodeOf([&] { ScstEngine::Init(one, &fx.corpus); }),
            ErrorCode::kInvalidConfig);
  one.base_mode = BaseMode::kGreedy;
  EXPECT_NO_THROW(ScstEngine::Init(one, &fx.corpus));
  ScstConfig bleu = corpus_cfg;
  bleu.metric.kind = MetricKind::kBleu;
  EXPECT_EQ(CodeOf([&] { ScstEngine::Init(bleu, &fx.corpus); }),
            ErrorCode::kInvalidConfig);
}

class ValidateBatchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    batch_ = {{"img_1", Seqs({"a dog", "a cat", "a bird"}), Seqs({"a dog"}),
               std::nullopt},
              {"img_7", Seqs({"a dog", "a cat", "a bird"}), Seqs({"a cat"}),
               std::nullopt}};
  }

  ScstEngine Engine(ScstClass cls, BaseMode base = BaseMode::kAverage) {
    return ScstEngine::Init(
        Config(cls, InitMode::kBatch, MetricKind::kCiderD, base, 3), nullptr);
  }

  std::vector<ImageBatch> batch_;
};

TEST_F(ValidateBatchTest, WellFormed) {
  EXPECT_NO_THROW(Engine(ScstClass::kStandard).ValidateBatch(batch_));
  EXPECT_NO_THROW(Engine(ScstClass::kNoEos).ValidateBatch(batch_));
}

TEST_F(ValidateBatchTest, SampleCountNamesImage) {
  batch_[1].samples.pop_back();
  const auto engine = Engine(ScstClass::kStandard);
  EXPECT_EQ(CodeOf([&] { engine.ValidateBatch(batch_); }),
            ErrorCode::kSampleCountMismatch);
  EXPECT_NE(MessageOf([&] { engine.ValidateBatch(batch_); }).find("img_7"),
            std::string::npos);
}

TEST_F(ValidateBatchTest, EosPlacement) {
  // Terminal EOS is accepted under Standard, rejected under NoEos.
  batch_[0].samples[0] = Seq("a dog <eos>");
  EXPECT_NO_THROW(Engine(ScstClass::kStandard).ValidateBatch(batch_));
  EXPECT_EQ(CodeOf([&] { Engine(ScstClass::kNoEos).ValidateBatch(batch_); }),
            ErrorCode::kEosLiteralMisplaced);
  batch_[0].samples[0] = Seq("a <eos> dog");
  EXPECT_EQ(CodeOf([&] { Engine(ScstClass::kStandard).ValidateBatch(batch_); }),
            ErrorCode::kEosLiteralMisplaced);
  batch_[0].samples[0] = Seq("a dog");
  batch_[1].refs[0] = Seq("a <eos> cat");
  EXPECT_EQ(CodeOf([&] { Engine(ScstClass::kStandard).ValidateBatch(batch_); }),
            ErrorCode::kEosLiteralMisplaced);
}

TEST_F(ValidateBatchTest, BasePresence) {
  EXPECT_EQ(CodeOf([&] {
              Engine(ScstClass::kStandard, BaseMode::kGreedy)
                  .ValidateBatch(batch_);
            }),
            ErrorCode::kMissingBase);
  batch_[0].base = Seq("a dog");
  EXPECT_EQ(CodeOf([&] { Engine(ScstClass::kStandard).ValidateBatch(batch_); }),
            ErrorCode::kUnexpectedBase);
}

TEST_F(ValidateBatchTest, EmptyRefs) {
  batch_[1].refs.clear();
  EXPECT_EQ(CodeOf([&] { Engine(ScstClass::kStandard).ValidateBatch(batch_); }),
            ErrorCode::kEmptyRefs);
}

// Reward read off a lookup table keyed by the candidate's first token.
RewardFunction TableReward(std::map<std::string, double> table,
                           double shift = 0.0) {
  return [table = std::move(table), shift](
             const TokenSequence& cand, std::span<const TokenSequence>) {
    return table.at(cand.tokens().front()) + shift;
  };
}

TEST(ComputeAdvantages, AverageSubtractsMean) {
  const ScstEngine engine = ScstEngine::Init(
      Config(ScstClass::kNoEos, InitMode::kBatch, MetricKind::kCiderD,
             BaseMode::kAverage, 3),
      nullptr);
  const std::vector<ImageBatch> batch = {
      {"img", Seqs({"two", "four", "six"}), Seqs({"ref"}), std::nullopt}};
  const AdvantageMatrix m = engine.ComputeAdvantages(
      batch, TableReward({{"two", 2.0}, {"four", 4.0}, {"six", 6.0}}));
  ASSERT_EQ(m.images.size(), 1u);
  EXPECT_EQ(m.images[0].base, 4.0);
  EXPECT_EQ(m.images[0].advantages, (std::vector<double>{-2.0, 0.0, 2.0}));
  EXPECT_EQ(m.signature, engine.signature());
}

TEST(ComputeAdvantages, LeaveOneOut) {
  const ScstEngine engine = ScstEngine::Init(
      Config(ScstClass::kNoEos, InitMode::kBatch, MetricKind::kCiderD,
             BaseMode::kAverageLeaveOneOut, 3),
      nullptr);
  const std::vector<ImageBatch> batch = {
      {"img", Seqs({"two", "four", "six"}), Seqs({"ref"}), std::nullopt}};
  const AdvantageMatrix m = engine.ComputeAdvantages(
      batch, TableReward({{"two", 2.0}, {"four", 4.0}, {"six", 6.0}}));
  EXPECT_EQ(m.images[0].baselines, (std::vector<double>{5.0, 4.0, 3.0}));
  EXPECT_EQ(m.images[0].advantages, (std::vector<double>{-3.0, 0.0, 3.0}));
}

TEST(ComputeAdvantages, GreedyBaseEqualToBestRef) {
  const Fixture fx = Fixture::Load();
  const ScstEngine engine = ScstEngine::Init(
      Config(ScstClass::kStandard, InitMode::kCorpus, MetricKind::kCiderD,
             BaseMode::kGreedy, 5),
      &fx.corpus);
  auto batch = fx.Batch(true);
  // The base copies a reference; no sample below is a reference copy.
  for (auto& image : batch) {
    image.base = image.refs[0];
    image.samples[0] = image.samples[1];
  }
  const AdvantageMatrix m = engine.ComputeAdvantages(batch);
  for (const auto& row : m.images) {
    const double best = *std::max_element(row.rewards.begin(), row.rewards.end());
    if (best <= row.base) {
      for (double a : row.advantages) EXPECT_LE(a, 0.0) << row.image_id;
    }
  }
}

TEST(ComputeAdvantages, EosAppendedPerClass) {
  // Observe what reaches the reward boundary.
  std::vector<std::string> seen;
  RewardFunction record = [&](const TokenSequence& cand,
                              std::span<const TokenSequence> refs) {
    seen.push_back(cand.Joined() + " | " + refs[0].Joined());
    return 0.0;
  };
  const std::vector<ImageBatch> batch = {
      {"img", {Seq("a dog"), Seq("a cat <eos>"), TokenSequence()},
       Seqs({"a bird"}), std::nullopt}};
  const auto standard = ScstEngine::Init(
      Config(ScstClass::kStandard, InitMode::kBatch, MetricKind::kCiderD,
             BaseMode::kAverage, 3),
      nullptr);
  standard.ComputeAdvantages(batch, record);
  EXPECT_EQ(seen, (std::vector<std::string>{"a dog <eos> | a bird <eos>",
                                            "a cat <eos> | a bird <eos>",
                                            "<eos> | a bird <eos>"}));
  seen.clear();
  std::vector<ImageBatch> plain = batch;
  plain[0].samples[1] = Seq("a cat");
  const auto no_eos = ScstEngine::Init(
      Config(ScstClass::kNoEos, InitMode::kBatch, MetricKind::kCiderD,
             BaseMode::kAverage, 3),
      nullptr);
  no_eos.ComputeAdvantages(plain, record);
  EXPECT_EQ(seen, (std::vector<std::string>{"a dog | a bird", "a cat | a bird",
                                            " | a bird"}));
}

// Random batches for the property sweeps below.
std::vector<ImageBatch> RandomBatch(SentenceGen& gen, int nspi, bool base) {
  std::vector<ImageBatch> batch;
  const int images = gen.Uniform(1, 8);
  for (int i = 0; i < images; ++i) {
    ImageBatch b;
    b.image_id = "img_" + std::to_string(i);
    for (int s = 0; s < nspi; ++s) b.samples.push_back(gen.Next(1, 9));
    const int refs = gen.Uniform(1, 5);
    for (int r = 0; r < refs; ++r) b.refs.push_back(gen.Next(1, 9));
    if (base) b.base = gen.Next(1, 9);
    batch.push_back(std::move(b));
  }
  return batch;
}

TEST(ComputeAdvantagesProperty, AverageSumsToZero) {
  SentenceGen gen(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int nspi = gen.Uniform(2, 7);
    const MetricKind kind = static_cast<MetricKind>(trial % 4);
    const ScstEngine engine = ScstEngine::Init(
        Config(trial % 2 ? ScstClass::kStandard : ScstClass::kNoEos,
               InitMode::kBatch, kind, BaseMode::kAverage, nspi),
        nullptr);
    const AdvantageMatrix m =
        engine.ComputeAdvantages(RandomBatch(gen, nspi, false));
    for (const auto& row : m.images) {
      const double sum =
          std::accumulate(row.advantages.begin(), row.advantages.end(), 0.0);
      EXPECT_NEAR(sum, 0.0, 1e-9);
      for (std::size_t s = 0; s < row.rewards.size(); ++s) {
        EXPECT_EQ(row.advantages[s], row.rewards[s] - row.baselines[s]);
      }
    }
  }
}

TEST(ComputeAdvantagesProperty, ConstantShiftInvariance) {
  SentenceGen gen(103);
  for (BaseMode base : {BaseMode::kGreedy, BaseMode::kAverage,
                        BaseMode::kAverageLeaveOneOut}) {
    const ScstEngine engine = ScstEngine::Init(
        Config(ScstClass::kStandard, InitMode::kBatch, MetricKind::kCiderD,
               base, 4),
        nullptr);
    const auto batch = RandomBatch(gen, 4, base == BaseMode::kGreedy);
    // Stub metric: a deterministic function of the candidate.
    auto stub = [](double shift) {
      return RewardFunction([shift](const TokenSequence& cand,
                                    std::span<const TokenSequence>) {
        return 0.37 * static_cast<double>(cand.size()) +
               0.11 * static_cast<double>(cand.CountToken("a")) + shift;
      });
    };
    const AdvantageMatrix a = engine.ComputeAdvantages(batch, stub(0.0));
    for (double c : {1.0, -3.5, 1000.0}) {
      const AdvantageMatrix b = engine.ComputeAdvantages(batch, stub(c));
      for (std::size_t i = 0; i < a.images.size(); ++i) {
        EXPECT_NEAR(b.images[i].base, a.images[i].base + c, 1e-9);
        for (std::size_t s = 0; s < a.images[i].advantages.size(); ++s) {
          EXPECT_NEAR(b.images[i].advantages[s], a.images[i].advantages[s],
                      1e-9);
        }
      }
    }
  }
}

TEST(ComputeAdvantagesProperty, OrderAndThreadIndependent) {
  SentenceGen gen(107);
  const Fixture fx = Fixture::Load();
  for (KernelKind kernel : {KernelKind::kPortable, KernelKind::kOptimized}) {
    ScstEngine::Options serial;
    serial.kernel = kernel;
    ScstEngine::Options parallel = serial;
    parallel.threads = 4;
    const ScstConfig config =
        Config(ScstClass::kStandard, InitMode::kCorpus, MetricKind::kCiderD,
               BaseMode::kAverage, 5);
    const ScstEngine a = ScstEngine::Init(config, &fx.corpus, serial);
    const ScstEngine b = ScstEngine::Init(config, &fx.corpus, parallel);
    auto batch = fx.Batch(false);
    const AdvantageMatrix ma = a.ComputeAdvantages(batch);
    const AdvantageMatrix mb = b.ComputeAdvantages(batch);
    std::reverse(batch.begin(), batch.end());
    const AdvantageMatrix mc = b.ComputeAdvantages(batch);
    for (std::size_t i = 0; i < ma.images.size(); ++i) {
      EXPECT_EQ(ma.images[i].rewards, mb.images[i].rewards);
      EXPECT_EQ(ma.images[i].advantages, mb.images[i].advantages);
      const auto& rev = mc.images[ma.images.size() - 1 - i];
      EXPECT_EQ(rev.image_id, ma.images[i].image_id);
      EXPECT_EQ(rev.advantages, ma.images[i].advantages);
    }
  }
}

TEST(ComputeAdvantagesProperty, BatchInitOrderIndependent) {
  SentenceGen gen(109);
  for (int trial = 0; trial < 20; ++trial) {
    const ScstEngine engine = ScstEngine::Init(
        Config(ScstClass::kStandard, InitMode::kBatch, MetricKind::kCiderR,
               BaseMode::kAverage, 3),
        nullptr);
    auto batch = RandomBatch(gen, 3, false);
    const AdvantageMatrix a = engine.ComputeAdvantages(batch);
    std::reverse(batch.begin(), batch.end());
    const AdvantageMatrix b = engine.ComputeAdvantages(batch);
    for (std::size_t i = 0; i < a.images.size(); ++i) {
      EXPECT_EQ(a.images[i].rewards,
                b.images[a.images.size() - 1 - i].rewards);
    }
  }
}

}  // namespace
}  // namespace eoscore
