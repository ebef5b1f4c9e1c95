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

#include "eoscore/signature.h"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include "eoscore/error.h"

namespace eoscore {
namespace {

struct Segment {
  std::string_view text;
  std::size_t offset;
};

[[noreturn]] void Malformed(std::string_view segment, std::size_t offset,
                            const std::string& reason) {
  throw Error(ErrorCode::kMalformedSignature,
              "segment '" + std::string(segment) + "' at position " +
                  std::to_string(offset) + ": " + reason);
}

constexpr std::array<ScstClass, 4> kClasses = {
    ScstClass::kStandard, ScstClass::kNoEos, ScstClass::kMixedInitEos,
    ScstClass::kMixedRewardEos};
constexpr std::array<InitMode, 2> kInits = {InitMode::kCorpus,
                                            InitMode::kBatch};
constexpr std::array<BaseMode, 3> kBases = {
    BaseMode::kGreedy, BaseMode::kAverage, BaseMode::kAverageLeaveOneOut};
constexpr std::array<MetricKind, 4> kMetrics = {
    MetricKind::kCider, MetricKind::kCiderD, MetricKind::kCiderR,
    MetricKind::kBleu};

// Splits on '+' outside brackets. Brackets may not nest.
std::vector<Segment> SplitTopLevel(std::string_view raw) {
  std::vector<Segment> out;
  std::size_t start = 0;
  bool open = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == '[') {
      if (open) Malformed(raw.substr(start, i - start + 1), i, "nested '['");
      open = true;
    } else if (c == ']') {
      if (!open) Malformed(raw.substr(start, i - start + 1), i, "stray ']'");
      open = false;
    } else if (c == '+' && !open) {
      out.push_back({raw.substr(start, i - start), start});
      start = i + 1;
    }
  }
  if (open) Malformed(raw.substr(start), start, "unterminated '['");
  out.push_back({raw.substr(start), start});
  return out;
}

int ParseCount(Segment seg, std::string_view text, std::size_t offset,
               int lo, int hi) {
  int value = 0;
  const bool digits_only =
      !text.empty() && text.find_first_not_of("0123456789") == text.npos;
  if (!digits_only || (text.size() > 1 && text[0] == '0')) {
    Malformed(seg.text, offset, "expected an integer, got '" +
                                    std::string(text) + "'");
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || value < lo || value > hi) {
    Malformed(seg.text, offset,
              "integer out of range [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
  }
  return value;
}

double ParseReal(Segment seg, std::string_view text, std::size_t offset) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value, std::chars_format::fixed);
  if (text.empty() || ec != std::errc() ||
      ptr != text.data() + text.size() || !std::isfinite(value) ||
      FormatReal(value) != text) {
    Malformed(seg.text, offset,
              "expected a canonical decimal, got '" + std::string(text) + "'");
  }
  return value;
}

// Splits "name[a,b]" into name and comma-separated args with offsets.
struct Bracketed {
  std::string_view name;
  std::vector<Segment> args;
};

Bracketed SplitBracketed(Segment seg) {
  const std::size_t open = seg.text.find('[');
  if (open == seg.text.npos || seg.text.empty() || seg.text.back() != ']') {
    Malformed(seg.text, seg.offset, "expected name[args]");
  }
  Bracketed out{seg.text.substr(0, open), {}};
  const std::string_view inner =
      seg.text.substr(open + 1, seg.text.size() - open - 2);
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = inner.find(',', start);
    const std::size_t end = comma == inner.npos ? inner.size() : comma;
    out.args.push_back(
        {inner.substr(start, end - start), seg.offset + open + 1 + start});
    if (comma == inner.npos) break;
    start = comma + 1;
  }
  return out;
}

// Returns the value text of `arg` after `prefix`.
std::string_view ArgValue(Segment seg, Segment arg, std::string_view prefix) {
  if (arg.text.substr(0, prefix.size()) != prefix) {
    Malformed(seg.text, arg.offset,
              "expected argument '" + std::string(prefix) + "', got '" +
                  std::string(arg.text) + "'");
  }
  return arg.text.substr(prefix.size());
}

std::vector<std::string_view> ArgPrefixes(MetricKind kind) {
  switch (kind) {
    case MetricKind::kCider:
    case MetricKind::kBleu: return {"n"};
    case MetricKind::kCiderD: return {"n", "s"};
    case MetricKind::kCiderR: return {"n", "rc", "lc", "a"};
  }
  return {};
}

MetricParams ParseMetric(Segment seg) {
  const Bracketed parts = SplitBracketed(seg);
  MetricParams params;
  bool found = false;
  for (MetricKind kind : kMetrics) {
    if (parts.name == MetricName(kind)) {
      params.kind = kind;
      found = true;
    }
  }
  if (!found) {
    Malformed(seg.text, seg.offset,
              "unknown metric '" + std::string(parts.name) + "'");
  }
  const auto prefixes = ArgPrefixes(params.kind);
  if (parts.args.size() != prefixes.size()) {
    Malformed(seg.text, seg.offset,
              std::string(MetricName(params.kind)) + " takes " +
                  std::to_string(prefixes.size()) + " argument(s)");
  }
  for (std::size_t i = 0; i < prefixes.size(); ++i) {
    const Segment arg = parts.args[i];
    const std::string_view value = ArgValue(seg, arg, prefixes[i]);
    const std::size_t at = arg.offset + prefixes[i].size();
    if (prefixes[i] == "n") {
      params.n_max = ParseCount(seg, value, at, 1, kMaxNGramOrder);
    } else if (prefixes[i] == "s") {
      params.sigma = ParseReal(seg, value, at);
    } else if (prefixes[i] == "rc") {
      params.repeat_coeff = ParseReal(seg, value, at);
    } else if (prefixes[i] == "lc") {
      params.length_coeff = ParseReal(seg, value, at);
    } else {
      params.alpha = ParseReal(seg, value, at);
    }
  }
  return params;
}

}  // namespace

std::string_view ClassTag(ScstClass scst_class) {
  switch (scst_class) {
    case ScstClass::kStandard: return "STANDARD";
    case ScstClass::kNoEos: return "NO<EOS>MODE";
    case ScstClass::kMixedInitEos: return "MIXED-INIT<EOS>";
    case ScstClass::kMixedRewardEos: return "MIXED-REWARD<EOS>";
  }
  return "";
}

std::string_view InitTag(InitMode mode) {
  return mode == InitMode::kCorpus ? "wInit" : "w/oInit";
}

std::string_view BaseTag(BaseMode mode) {
  switch (mode) {
    case BaseMode::kGreedy: return "greedy";
    case BaseMode::kAverage: return "average";
    case BaseMode::kAverageLeaveOneOut: return "average-loo";
  }
  return "";
}

std::string FormatReal(double value) {
  char buf[512];
  auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kInvalidConfig, "value not representable");
  }
  std::string out(buf, ptr);
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

std::string MetricTag(const MetricParams& m) {
  std::string out(MetricName(m.kind));
  out += "[n" + std::to_string(m.n_max);
  if (m.kind == MetricKind::kCiderD) {
    out += ",s" + FormatReal(m.sigma);
  } else if (m.kind == MetricKind::kCiderR) {
    out += ",rc" + FormatReal(m.repeat_coeff) + ",lc" +
           FormatReal(m.length_coeff) + ",a" + FormatReal(m.alpha);
  }
  out += ']';
  return out;
}

std::string GenerateSignature(const ScstConfig& config) {
  config.Validate(/*allow_mixed=*/true);
  const MetricParams& m = config.metric;
  std::string out;
  out += ClassTag(config.scst_class);
  out += '_';
  out += InitTag(config.init_mode);
  out += '+';
  out += MetricTag(m);
  out += '+';
  out += BaseTag(config.base_mode);
  out += "[nspi" + std::to_string(config.nspi) + "]+";
  out += config.version;
  return out;
}

Signature ParseSignature(std::string_view raw) {
  const std::vector<Segment> segments = SplitTopLevel(raw);
  if (segments.size() != 4) {
    Malformed(raw, 0,
              "expected 4 '+'-separated segments, found " +
                  std::to_string(segments.size()));
  }
  ScstConfig config;

  const Segment head = segments[0];
  const std::size_t underscore = head.text.find('_');
  if (underscore == head.text.npos) {
    Malformed(head.text, head.offset, "expected <class>_<init>");
  }
  const std::string_view class_tag = head.text.substr(0, underscore);
  const std::string_view init_tag = head.text.substr(underscore + 1);
  bool found = false;
  for (ScstClass c : kClasses) {
    if (class_tag == ClassTag(c)) {
      config.scst_class = c;
      found = true;
    }
  }
  if (!found) {
    Malformed(head.text, head.offset,
              "unknown class tag '" + std::string(class_tag) + "'");
  }
  found = false;
  for (InitMode mode : kInits) {
    if (init_tag == InitTag(mode)) {
      config.init_mode = mode;
      found = true;
    }
  }
  if (!found) {
    Malformed(head.text, head.offset + underscore + 1,
              "unknown init tag '" + std::string(init_tag) + "'");
  }

  config.metric = ParseMetric(segments[1]);

  const Segment base = segments[2];
  const Bracketed base_parts = SplitBracketed(base);
  found = false;
  for (BaseMode mode : kBases) {
    if (base_parts.name == BaseTag(mode)) {
      config.base_mode = mode;
      found = true;
    }
  }
  if (!found) {
    Malformed(base.text, base.offset,
              "unknown base '" + std::string(base_parts.name) + "'");
  }
  if (base_parts.args.size() != 1) {
    Malformed(base.text, base.offset, "base takes exactly nspi<k>");
  }
  const Segment nspi = base_parts.args[0];
  config.nspi = ParseCount(base, ArgValue(base, nspi, "nspi"),
                           nspi.offset + 4, 1, 1000000);

  const Segment version = segments[3];
  if (!IsStrictSemver(version.text)) {
    Malformed(version.text, version.offset, "version must be X.Y.Z");
  }
  config.version = std::string(version.text);

  try {
    config.Validate(/*allow_mixed=*/true);
  } catch (const Error& e) {
    Malformed(raw, 0, std::string(e.detail()));
  }
  return {std::string(raw), std::move(config)};
}

}  // namespace eoscore
