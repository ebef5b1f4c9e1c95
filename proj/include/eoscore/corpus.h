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

#ifndef EOSCORE_CORPUS_H_
#define EOSCORE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace eoscore {

inline constexpr std::string_view kDefaultEosLiteral = "<eos>";
inline constexpr int kMaxNGramOrder = 8;

enum class EosState { kAbsent, kPresent };
enum class NormalizeScheme { kAsIs, kLower };

// A whitespace-free token list. eos_state reflects the final token only;
// use ContainsToken / CountToken to find a literal elsewhere.
class TokenSequence {
 public:
  TokenSequence() = default;
  // Throws ParseError if a token is empty or contains whitespace.
  explicit TokenSequence(std::vector<std::string> tokens,
                         std::string_view eos_literal = kDefaultEosLiteral);

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  EosState eos_state() const { return eos_state_; }

  bool ContainsToken(std::string_view token) const;
  std::size_t CountToken(std::string_view token) const;
  // Tokens joined by single spaces.
  std::string Joined() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;

 private:
  std::vector<std::string> tokens_;
  EosState eos_state_ = EosState::kAbsent;
};

// Whitespace split, optionally ASCII-lowercased. Throws EmptyInput when
// `raw` holds no tokens.
TokenSequence Normalize(std::string_view raw, NormalizeScheme scheme,
                        std::string_view eos_literal = kDefaultEosLiteral);

// Throws EmptyInput for an empty sequence and EosAlreadyPresent when the
// final token already is the literal.
TokenSequence AppendEos(const TokenSequence& seq,
                        std::string_view eos_literal = kDefaultEosLiteral);

// Appends the literal unless the sequence already terminates with it.
TokenSequence EnsureEos(const TokenSequence& seq,
                        std::string_view eos_literal = kDefaultEosLiteral);

using NGram = std::vector<std::string>;

struct NGramHash {
  std::size_t operator()(const NGram& ngram) const noexcept;
};

// Sliding-window n-gram counts for orders 1..n_max. Entries of each order
// are kept in first-occurrence order; the scorers rely on that order for
// reproducible floating-point accumulation.
class NGramMultiset {
 public:
  using Entry = std::pair<NGram, int>;

  NGramMultiset() = default;
  NGramMultiset(const TokenSequence& seq, int n_max);

  int n_max() const { return static_cast<int>(orders_.size()); }
  // `n` is 1-based.
  std::span<const Entry> order(int n) const;
  int Count(const NGram& ngram) const;
  // Sum of counts of order n.
  int Total(int n) const;

 private:
  std::vector<std::vector<Entry>> orders_;
  std::unordered_map<NGram, std::size_t, NGramHash> index_;
};

// Throws InvalidConfig unless 1 <= n_max <= kMaxNGramOrder.
NGramMultiset ExtractNGrams(const TokenSequence& seq, int n_max);

struct RefGroup {
  std::string image_id;
  std::vector<TokenSequence> refs;
};

class Corpus {
 public:
  Corpus() = default;
  // Throws EmptyCorpus, DuplicateImageId, EmptyRefs or EosConflict.
  explicit Corpus(std::vector<RefGroup> groups);

  const std::vector<RefGroup>& groups() const { return groups_; }
  std::size_t size() const { return groups_.size(); }
  const RefGroup* Find(std::string_view image_id) const;

 private:
  std::vector<RefGroup> groups_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct LoadOptions {
  NormalizeScheme scheme = NormalizeScheme::kAsIs;
  std::string eos_literal = std::string(kDefaultEosLiteral);
};

// One {"image_id": str, "refs": [str, ...]} object per line. Blank lines
// are skipped. Errors name the 1-based line number.
Corpus ParseCorpus(std::istream& in, const LoadOptions& options = {});
Corpus LoadCorpus(const std::filesystem::path& path,
                  const LoadOptions& options = {});
void WriteCorpus(std::ostream& out, const Corpus& corpus);

// {"image_id": str, "samples": [str, ...], "base": str (optional)}.
// Empty sample strings are kept as empty sequences.
struct SampleRecord {
  std::string image_id;
  std::vector<TokenSequence> samples;
  std::optional<TokenSequence> base;
};

std::vector<SampleRecord> ParseSamples(std::istream& in,
                                       const LoadOptions& options = {});
std::vector<SampleRecord> LoadSamples(const std::filesystem::path& path,
                                      const LoadOptions& options = {});

}  // namespace eoscore

#endif  // EOSCORE_CORPUS_H_
