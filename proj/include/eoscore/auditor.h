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

#ifndef EOSCORE_AUDITOR_H_
#define EOSCORE_AUDITOR_H_

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "eoscore/corpus.h"

namespace eoscore {

// Trailing-token artifact classes; kOther is the "*" catch-all.
enum class ArtifactClass { kIn, kA, kOf, kThe, kWith, kOn, kAnd, kOther, kClean };

inline constexpr std::array<ArtifactClass, 8> kArtifactClasses = {
    ArtifactClass::kIn,   ArtifactClass::kA,  ArtifactClass::kOf,
    ArtifactClass::kThe,  ArtifactClass::kWith, ArtifactClass::kOn,
    ArtifactClass::kAnd,  ArtifactClass::kOther};

// "in", "a", ..., "*", "clean".
std::string_view ArtifactLabel(ArtifactClass c);

// Words that never end a complete caption. Always contains the seven
// class words; files add to them.
class FragmentLexicon {
 public:
  static constexpr std::string_view kDefaultVersion = "fragments-1";

  // Class words plus "top", "front", "next" and "to".
  static FragmentLexicon Default();
  // Format: '#' comments and blank lines are ignored; the first remaining
  // line is "version <id>", then one word per line. Throws ParseError.
  static FragmentLexicon Parse(std::istream& in);
  static FragmentLexicon Load(const std::filesystem::path& path);

  bool Contains(std::string_view word) const;
  const std::string& version() const { return version_; }
  const std::set<std::string, std::less<>>& words() const { return words_; }

 private:
  std::string version_;
  std::set<std::string, std::less<>> words_;
};

// A terminal EOS literal is ignored.
ArtifactClass ClassifyEnding(const TokenSequence& seq,
                             const FragmentLexicon& lexicon,
                             std::string_view eos_literal = kDefaultEosLiteral);

struct AuditReport {
  std::size_t total = 0;
  std::size_t clean = 0;
  std::size_t artifacts = 0;
  // (total - clean) / total; 0 for an empty input.
  double artifact_rate = 0.0;
  std::map<ArtifactClass, std::size_t> counts;
  // Trailing bigram / trigram frequencies. Every artifact class has an
  // entry in `counts`, `bigrams` and `trigrams`.
  std::map<ArtifactClass, std::map<std::string, std::size_t>> bigrams;
  std::map<ArtifactClass, std::map<std::string, std::size_t>> trigrams;
  std::string lexicon_version;
};

AuditReport Audit(std::span<const TokenSequence> captions,
                  const FragmentLexicon& lexicon,
                  std::string_view eos_literal = kDefaultEosLiteral);

struct CleanResult {
  TokenSequence sequence;
  // Stripping would have emptied the caption; `sequence` is the input.
  bool unstrippable = false;
};

// Drops trailing lexicon words until a non-fragment ends the caption. A
// terminal EOS literal is kept in place.
CleanResult Clean(const TokenSequence& seq, const FragmentLexicon& lexicon,
                  std::string_view eos_literal = kDefaultEosLiteral);

}  // namespace eoscore

#endif  // EOSCORE_AUDITOR_H_
