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

#include "eoscore/auditor.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eoscore/error.h"
#include "gtest/gtest.h"
#include "oracle_fixture.h"
#include "test_util.h"

namespace eoscore {
namespace {

using testing::Seq;
using testing::SentenceGen;

const FragmentLexicon& Lexicon() {
  static const FragmentLexicon lexicon = FragmentLexicon::Default();
  return lexicon;
}

TEST(ClassifyEnding, Examples) {
  EXPECT_EQ(ClassifyEnding(Seq("a man sitting on a"), Lexicon()),
            ArtifactClass::kA);
  EXPECT_EQ(ClassifyEnding(Seq("a street with a bus on"), Lexicon()),
            ArtifactClass::kOn);
  EXPECT_EQ(ClassifyEnding(Seq("a dog catching a frisbee"), Lexicon()),
            ArtifactClass::kClean);
  EXPECT_EQ(ClassifyEnding(Seq("a cat on top"), Lexicon()),
            ArtifactClass::kOther);
  EXPECT_EQ(ClassifyEnding(Seq("a man in front of"), Lexicon()),
            ArtifactClass::kOf);
}

TEST(ClassifyEnding, IgnoresTerminalEos) {
  EXPECT_EQ(ClassifyEnding(Seq("a man sitting on a <eos>"), Lexicon()),
            ArtifactClass::kA);
  EXPECT_EQ(ClassifyEnding(Seq("a dog </s>"), Lexicon(), "</s>"),
            ArtifactClass::kClean);
}

TEST(Clean, Examples) {
  EXPECT_EQ(Clean(Seq("a man in front of"), Lexicon()).sequence, Seq("a man"));
  const CleanResult unchanged = Clean(Seq("a dog catching a frisbee"), Lexicon());
  EXPECT_EQ(unchanged.sequence, Seq("a dog catching a frisbee"));
  EXPECT_FALSE(unchanged.unstrippable);
  const CleanResult all = Clean(Seq("a a a"), Lexicon());
  EXPECT_EQ(all.sequence, Seq("a a a"));
  EXPECT_TRUE(all.unstrippable);
  EXPECT_EQ(Clean(Seq("a cat on a <eos>"), Lexicon()).sequence,
            Seq("a cat <eos>"));
}

TEST(CleanProperty, IdempotentShrinkingNonEmpty) {
  SentenceGen gen(61);
  for (int trial = 0; trial < 3000; ++trial) {
    TokenSequence seq = gen.Next(1, 10);
    if (trial % 3 == 0) seq = AppendEos(seq);
    const CleanResult once = Clean(seq, Lexicon());
    const CleanResult twice = Clean(once.sequence, Lexicon());
    EXPECT_EQ(twice.sequence, once.sequence) << seq.Joined();
    EXPECT_EQ(twice.unstrippable, once.unstrippable);
    EXPECT_LE(once.sequence.size(), seq.size());
    EXPECT_FALSE(once.sequence.empty());
    if (!once.unstrippable) {
      EXPECT_EQ(ClassifyEnding(once.sequence, Lexicon()), ArtifactClass::kClean)
          << seq.Joined();
    }
  }
}

TEST(Audit, HalfEndInA) {
  std::vector<TokenSequence> captions;
  for (int i = 0; i < 5; ++i) captions.push_back(Seq("a man sitting on a"));
  for (int i = 0; i < 5; ++i) captions.push_back(Seq("a man on a bench"));
  const AuditReport r = Audit(captions, Lexicon());
  EXPECT_EQ(r.total, 10u);
  EXPECT_EQ(r.artifact_rate, 0.5);
  EXPECT_EQ(r.counts.at(ArtifactClass::kA), r.artifacts);
  EXPECT_EQ(r.bigrams.at(ArtifactClass::kA).at("on a"), 5u);
  EXPECT_EQ(r.trigrams.at(ArtifactClass::kA).at("sitting on a"), 5u);
  EXPECT_EQ(r.lexicon_version, "fragments-1");
}

TEST(Audit, AllClean) {
  const std::vector<TokenSequence> captions = {Seq("a dog"), Seq("two cats")};
  const AuditReport r = Audit(captions, Lexicon());
  EXPECT_EQ(r.artifact_rate, 0.0);
  EXPECT_EQ(r.clean, 2u);
  EXPECT_EQ(Audit({}, Lexicon()).artifact_rate, 0.0);
}

std::vector<TokenSequence> MixCaptions() {
  std::vector<TokenSequence> out;
  for (const auto& r : LoadSamples(oracle::Path("artifact_mix.jsonl"))) {
    out.insert(out.end(), r.samples.begin(), r.samples.end());
  }
  return out;
}

TEST(Audit, KnownMixReportedExactly) {
  const auto captions = MixCaptions();
  const AuditReport r = Audit(captions, Lexicon());
  const nlohmann::json expected = oracle::ReadJson("artifact_mix_expected.json");
  EXPECT_EQ(r.total, expected["total"].get<std::size_t>());
  EXPECT_EQ(r.clean, expected["clean"].get<std::size_t>());
  EXPECT_EQ(r.artifacts, expected["artifacts"].get<std::size_t>());
  std::size_t sum = r.clean;
  for (ArtifactClass c : kArtifactClasses) {
    EXPECT_EQ(r.counts.at(c),
              expected["counts"][std::string(ArtifactLabel(c))].get<std::size_t>())
        << ArtifactLabel(c);
    sum += r.counts.at(c);
    for (const auto& [gram, count] :
         expected["bigrams"][std::string(ArtifactLabel(c))].items()) {
      EXPECT_EQ(r.bigrams.at(c).at(gram), count.get<std::size_t>()) << gram;
    }
  }
  EXPECT_EQ(sum, r.total);
  EXPECT_EQ(r.counts.at(ArtifactClass::kA) * 1000, 898u * r.artifacts);
  EXPECT_EQ(r.artifact_rate, expected["artifact_rate"].get<double>());
}

TEST(AuditProperty, PermutationInvariant) {
  auto captions = MixCaptions();
  const AuditReport a = Audit(captions, Lexicon());
  SentenceGen gen(67);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(captions.begin(), captions.end(), gen.rng());
    const AuditReport b = Audit(captions, Lexicon());
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.bigrams, b.bigrams);
    EXPECT_EQ(a.trigrams, b.trigrams);
    EXPECT_EQ(a.artifact_rate, b.artifact_rate);
  }
}

TEST(FragmentLexicon, ShippedFileMatchesDefault) {
  const FragmentLexicon shipped =
      FragmentLexicon::Load(std::string(EOSCORE_DATA_DIR) +
                            "/fragment_lexicon.txt");
  EXPECT_EQ(shipped.version(), FragmentLexicon::Default().version());
  EXPECT_EQ(shipped.words(), FragmentLexicon::Default().words());
}

TEST(FragmentLexicon, OverrideKeepsClassWords) {
  std::istringstream in("# custom\nversion mine-2\nbeside\n");
  const FragmentLexicon lexicon = FragmentLexicon::Parse(in);
  EXPECT_EQ(lexicon.version(), "mine-2");
  EXPECT_TRUE(lexicon.Contains("beside"));
  EXPECT_TRUE(lexicon.Contains("a"));
  EXPECT_FALSE(lexicon.Contains("top"));
  EXPECT_EQ(ClassifyEnding(Seq("a cat beside"), lexicon), ArtifactClass::kOther);
  std::istringstream missing("beside\n");
  EXPECT_THROW(FragmentLexicon::Parse(missing), Error);
  std::istringstream two("version x\nnext to\n");
  EXPECT_THROW(FragmentLexicon::Parse(two), Error);
}

}  // namespace
}  // namespace eoscore
