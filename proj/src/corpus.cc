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

#include "eoscore/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "eoscore/error.h"
#include "json.hpp"

namespace eoscore {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::vector<std::string> SplitWhitespace(std::string_view raw) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && IsSpace(raw[i])) ++i;
    std::size_t start = i;
    while (i < raw.size() && !IsSpace(raw[i])) ++i;
    if (i > start) out.emplace_back(raw.substr(start, i - start));
  }
  return out;
}

void LowerAscii(std::string& s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
}

std::string LinePrefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

TokenSequence ParseSentence(const nlohmann::json& value, std::size_t line,
                            const LoadOptions& options, bool allow_empty) {
  if (!value.is_string()) {
    throw Error(ErrorCode::kParseError,
                LinePrefix(line) + "expected a string sentence");
  }
  const auto& raw = value.get_ref<const std::string&>();
  auto tokens = SplitWhitespace(raw);
  if (tokens.empty()) {
    if (allow_empty) return TokenSequence();
    throw Error(ErrorCode::kParseError, LinePrefix(line) + "empty sentence");
  }
  if (options.scheme == NormalizeScheme::kLower) {
    for (auto& t : tokens) LowerAscii(t);
  }
  return TokenSequence(std::move(tokens), options.eos_literal);
}

std::string ParseImageId(const nlohmann::json& record, std::size_t line) {
  auto it = record.find("image_id");
  if (it == record.end() || !it->is_string()) {
    throw Error(ErrorCode::kParseError,
                LinePrefix(line) + "missing string field \"image_id\"");
  }
  return it->get<std::string>();
}

// Calls `fn(record, line_number)` for every non-blank line.
template <typename Fn>
void ForEachRecord(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (std::all_of(line.begin(), line.end(), IsSpace)) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, LinePrefix(line_number) + e.what());
    }
    if (!record.is_object()) {
      throw Error(ErrorCode::kParseError,
                  LinePrefix(line_number) + "expected a JSON object");
    }
    fn(record, line_number);
  }
}

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

TokenSequence::TokenSequence(std::vector<std::string> tokens,
                             std::string_view eos_literal)
    : tokens_(std::move(tokens)) {
  for (const auto& t : tokens_) {
    if (t.empty() || std::any_of(t.begin(), t.end(), IsSpace)) {
      throw Error(ErrorCode::kParseError,
                  "token \"" + t + "\" is empty or contains whitespace");
    }
  }
  if (!tokens_.empty() && tokens_.back() == eos_literal) {
    eos_state_ = EosState::kPresent;
  }
}

bool TokenSequence::ContainsToken(std::string_view token) const {
  return std::find(tokens_.begin(), tokens_.end(), token) != tokens_.end();
}

std::size_t TokenSequence::CountToken(std::string_view token) const {
  return static_cast<std::size_t>(
      std::count(tokens_.begin(), tokens_.end(), token));
}

std::string TokenSequence::Joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens_[i];
  }
  return out;
}

TokenSequence Normalize(std::string_view raw, NormalizeScheme scheme,
                        std::string_view eos_literal) {
  auto tokens = SplitWhitespace(raw);
  if (tokens.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no tokens in input");
  }
  if (scheme == NormalizeScheme::kLower) {
    for (auto& t : tokens) LowerAscii(t);
  }
  return TokenSequence(std::move(tokens), eos_literal);
}

TokenSequence AppendEos(const TokenSequence& seq,
                        std::string_view eos_literal) {
  if (seq.empty()) {
    throw Error(ErrorCode::kEmptyInput, "cannot terminate an empty sequence");
  }
  if (seq.tokens().back() == eos_literal) {
    throw Error(ErrorCode::kEosAlreadyPresent,
                "sequence already ends with " + std::string(eos_literal));
  }
  auto tokens = seq.tokens();
  tokens.emplace_back(eos_literal);
  return TokenSequence(std::move(tokens), eos_literal);
}

TokenSequence EnsureEos(const TokenSequence& seq,
                        std::string_view eos_literal) {
  if (!seq.empty() && seq.tokens().back() == eos_literal) {
    return TokenSequence(seq.tokens(), eos_literal);
  }
  auto tokens = seq.tokens();
  tokens.emplace_back(eos_literal);
  return TokenSequence(std::move(tokens), eos_literal);
}

std::size_t NGramHash::operator()(const NGram& ngram) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  std::hash<std::string_view> hasher;
  for (const auto& token : ngram) {
    h ^= hasher(token) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

NGramMultiset::NGramMultiset(const TokenSequence& seq, int n_max)
    : orders_(static_cast<std::size_t>(n_max)) {
  const auto& tokens = seq.tokens();
  for (int k = 1; k <= n_max; ++k) {
    auto& entries = orders_[k - 1];
    if (tokens.size() < static_cast<std::size_t>(k)) continue;
    for (std::size_t i = 0; i + k <= tokens.size(); ++i) {
      NGram gram(tokens.begin() + i, tokens.begin() + i + k);
      auto [it, inserted] = index_.try_emplace(gram, entries.size());
      if (inserted) {
        entries.emplace_back(std::move(gram), 1);
      } else {
        ++entries[it->second].second;
      }
    }
  }
}

std::span<const NGramMultiset::Entry> NGramMultiset::order(int n) const {
  if (n < 1 || n > n_max()) return {};
  return orders_[n - 1];
}

int NGramMultiset::Count(const NGram& ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > n_max()) return 0;
  auto it = index_.find(ngram);
  if (it == index_.end()) return 0;
  return orders_[ngram.size() - 1][it->second].second;
}

int NGramMultiset::Total(int n) const {
  int total = 0;
  for (const auto& [gram, count] : order(n)) total += count;
  return total;
}

NGramMultiset ExtractNGrams(const TokenSequence& seq, int n_max) {
  if (n_max < 1 || n_max > kMaxNGramOrder) {
    throw Error(ErrorCode::kInvalidConfig,
                "n-gram order must lie in [1, " +
                    std::to_string(kMaxNGramOrder) + "], got " +
                    std::to_string(n_max));
  }
  return NGramMultiset(seq, n_max);
}

Corpus::Corpus(std::vector<RefGroup> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "corpus has no images");
  }
  for (std::size_t i = 0; i < groups_.size(); ++i) {
    const auto& group = groups_[i];
    if (group.refs.empty()) {
      throw Error(ErrorCode::kEmptyRefs, group.image_id);
    }
    const EosState state = group.refs.front().eos_state();
    for (const auto& ref : group.refs) {
      if (ref.eos_state() != state) {
        throw Error(ErrorCode::kEosConflict,
                    group.image_id + ": references disagree on EOS");
      }
    }
    if (!index_.try_emplace(group.image_id, i).second) {
      throw Error(ErrorCode::kDuplicateImageId, group.image_id);
    }
  }
}

const RefGroup* Corpus::Find(std::string_view image_id) const {
  auto it = index_.find(std::string(image_id));
  return it == index_.end() ? nullptr : &groups_[it->second];
}

Corpus ParseCorpus(std::istream& in, const LoadOptions& options) {
  std::vector<RefGroup> groups;
  std::unordered_map<std::string, std::size_t> seen;
  ForEachRecord(in, [&](const nlohmann::json& record, std::size_t line) {
    RefGroup group;
    group.image_id = ParseImageId(record, line);
    auto refs = record.find("refs");
    if (refs == record.end() || !refs->is_array() || refs->empty()) {
      throw Error(ErrorCode::kParseError,
                  LinePrefix(line) + "\"refs\" must be a non-empty array");
    }
    for (const auto& ref : *refs) {
      group.refs.push_back(ParseSentence(ref, line, options, false));
    }
    if (!seen.try_emplace(group.image_id, line).second) {
      throw Error(ErrorCode::kDuplicateImageId,
                  LinePrefix(line) + group.image_id);
    }
    groups.push_back(std::move(group));
  });
  return Corpus(std::move(groups));
}

Corpus LoadCorpus(const std::filesystem::path& path,
                  const LoadOptions& options) {
  auto in = OpenOrThrow(path);
  return ParseCorpus(in, options);
}

void WriteCorpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& group : corpus.groups()) {
    nlohmann::json record;
    record["image_id"] = group.image_id;
    auto& refs = record["refs"] = nlohmann::json::array();
    for (const auto& ref : group.refs) refs.push_back(ref.Joined());
    out << record.dump() << '\n';
  }
}

std::vector<SampleRecord> ParseSamples(std::istream& in,
                                       const LoadOptions& options) {
  std::vector<SampleRecord> records;
  std::unordered_map<std::string, std::size_t> seen;
  ForEachRecord(in, [&](const nlohmann::json& record, std::size_t line) {
    SampleRecord sample;
    sample.image_id = ParseImageId(record, line);
    auto samples = record.find("samples");
    if (samples == record.end() || !samples->is_array()) {
      throw Error(ErrorCode::kParseError,
                  LinePrefix(line) + "\"samples\" must be an array");
    }
    for (const auto& s : *samples) {
      sample.samples.push_back(ParseSentence(s, line, options, true));
    }
    auto base = record.find("base");
    if (base != record.end() && !base->is_null()) {
      sample.base = ParseSentence(*base, line, options, true);
    }
    if (!seen.try_emplace(sample.image_id, line).second) {
      throw Error(ErrorCode::kDuplicateImageId,
                  LinePrefix(line) + sample.image_id);
    }
    records.push_back(std::move(sample));
  });
  if (records.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no sample records");
  }
  return records;
}

std::vector<SampleRecord> LoadSamples(const std::filesystem::path& path,
                                      const LoadOptions& options) {
  auto in = OpenOrThrow(path);
  return ParseSamples(in, options);
}

}  // namespace eoscore
