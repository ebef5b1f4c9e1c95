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

#include <fstream>
#include <sstream>

#include "eoscore/error.h"

namespace eoscore {
namespace {

constexpr std::array<std::string_view, 7> kClassWords = {
    "in", "a", "of", "the", "with", "on", "and"};

std::span<const std::string> Body(const TokenSequence& seq,
                                  std::string_view eos_literal) {
  std::span<const std::string> tokens(seq.tokens());
  if (!tokens.empty() && tokens.back() == eos_literal) {
    tokens = tokens.first(tokens.size() - 1);
  }
  return tokens;
}

std::string JoinTail(std::span<const std::string> tokens, std::size_t n) {
  std::string out;
  for (std::size_t i = tokens.size() - n; i < tokens.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += tokens[i];
  }
  return out;
}

}  // namespace

std::string_view ArtifactLabel(ArtifactClass c) {
  switch (c) {
    case ArtifactClass::kIn: return "in";
    case ArtifactClass::kA: return "a";
    case ArtifactClass::kOf: return "of";
    case ArtifactClass::kThe: return "the";
    case ArtifactClass::kWith: return "with";
    case ArtifactClass::kOn: return "on";
    case ArtifactClass::kAnd: return "and";
    case ArtifactClass::kOther: return "*";
    case ArtifactClass::kClean: return "clean";
  }
  return "";
}

FragmentLexicon FragmentLexicon::Default() {
  FragmentLexicon lexicon;
  lexicon.version_ = std::string(kDefaultVersion);
  for (auto word : kClassWords) lexicon.words_.emplace(word);
  for (auto word : {"top", "front", "next", "to"}) lexicon.words_.emplace(word);
  return lexicon;
}

FragmentLexicon FragmentLexicon::Parse(std::istream& in) {
  FragmentLexicon lexicon;
  for (auto word : kClassWords) lexicon.words_.emplace(word);
  std::string line;
  std::size_t line_no = 0;
  bool have_version = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first) || first[0] == '#') continue;
    std::string extra;
    if (!have_version) {
      std::string version;
      if (first != "version" || !(fields >> version) || (fields >> extra)) {
        throw Error(ErrorCode::kParseError,
                    "line " + std::to_string(line_no) +
                        ": expected 'version <id>'");
      }
      lexicon.version_ = version;
      have_version = true;
      continue;
    }
    if (fields >> extra) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": one word per line");
    }
    lexicon.words_.insert(first);
  }
  if (!have_version) {
    throw Error(ErrorCode::kParseError, "lexicon has no version line");
  }
  return lexicon;
}

FragmentLexicon FragmentLexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return Parse(in);
}

bool FragmentLexicon::Contains(std::string_view word) const {
  return words_.find(word) != words_.end();
}

ArtifactClass ClassifyEnding(const TokenSequence& seq,
                             const FragmentLexicon& lexicon,
                             std::string_view eos_literal) {
  const auto tokens = Body(seq, eos_literal);
  if (tokens.empty()) return ArtifactClass::kClean;
  const std::string& last = tokens.back();
  for (std::size_t i = 0; i < kClassWords.size(); ++i) {
    if (last == kClassWords[i]) return kArtifactClasses[i];
  }
  return lexicon.Contains(last) ? ArtifactClass::kOther : ArtifactClass::kClean;
}

AuditReport Audit(std::span<const TokenSequence> captions,
                  const FragmentLexicon& lexicon,
                  std::string_view eos_literal) {
  AuditReport report;
  report.lexicon_version = lexicon.version();
  for (ArtifactClass c : kArtifactClasses) {
    report.counts[c] = 0;
    report.bigrams[c];
    report.trigrams[c];
  }
  for (const auto& caption : captions) {
    ++report.total;
    const ArtifactClass c = ClassifyEnding(caption, lexicon, eos_literal);
    if (c == ArtifactClass::kClean) {
      ++report.clean;
      continue;
    }
    ++report.artifacts;
    ++report.counts[c];
    const auto tokens = Body(caption, eos_literal);
    if (tokens.size() >= 2) ++report.bigrams[c][JoinTail(tokens, 2)];
    if (tokens.size() >= 3) ++report.trigrams[c][JoinTail(tokens, 3)];
  }
  if (report.total > 0) {
    report.artifact_rate = static_cast<double>(report.artifacts) /
                           static_cast<double>(report.total);
  }
  return report;
}

CleanResult Clean(const TokenSequence& seq, const FragmentLexicon& lexicon,
                  std::string_view eos_literal) {
  const auto body = Body(seq, eos_literal);
  std::size_t keep = body.size();
  while (keep > 0 && lexicon.Contains(body[keep - 1])) --keep;
  if (keep == body.size()) return {seq, false};
  if (keep == 0) return {seq, true};
  std::vector<std::string> tokens(body.begin(), body.begin() + keep);
  if (body.size() < seq.size()) tokens.emplace_back(eos_literal);
  return {TokenSequence(std::move(tokens), eos_literal), false};
}

}  // namespace eoscore
