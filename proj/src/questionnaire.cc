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

#include "eoscore/questionnaire.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "eoscore/error.h"
#include "eoscore/signature.h"

namespace eoscore {
namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == s.npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> Words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Parsed answer or a reason it was rejected.
template <typename T>
struct Parsed {
  std::optional<T> value;
  std::string reason;
};

Parsed<bool> ParseYesNo(const std::string& answer) {
  const std::string a = Lower(answer);
  if (a == "yes" || a == "y") return {true, ""};
  if (a == "no" || a == "n") return {false, ""};
  return {std::nullopt, "answer yes or no"};
}

Parsed<InitMode> ParseInit(const std::string& answer) {
  const std::string a = Lower(answer);
  if (a == "corpus") return {InitMode::kCorpus, ""};
  if (a == "batch") return {InitMode::kBatch, ""};
  return {std::nullopt, "answer corpus or batch"};
}

std::optional<double> ToReal(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value, std::chars_format::fixed);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> ToInt(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

Parsed<MetricParams> ParseMetric(const std::string& answer, InitMode init) {
  std::vector<std::string> words = Words(Lower(answer));
  MetricParams params;
  if (words.empty()) {
    // Default: CIDEr-D, n4, sigma 6.0.
  } else {
    const std::string& name = words[0];
    if (name == "cider") {
      params.kind = MetricKind::kCider;
    } else if (name == "cider-d") {
      params.kind = MetricKind::kCiderD;
    } else if (name == "cider-r") {
      params.kind = MetricKind::kCiderR;
    } else if (name == "bleu") {
      params.kind = MetricKind::kBleu;
    } else {
      return {std::nullopt, "unknown metric '" + name + "'"};
    }
  }
  for (std::size_t i = 1; i < words.size(); ++i) {
    const std::string& w = words[i];
    auto real_arg = [&](std::string_view prefix, MetricKind only,
                        double& field) -> std::optional<std::string> {
      if (params.kind != only) {
        return "argument '" + w + "' does not apply to " +
               std::string(MetricName(params.kind));
      }
      auto value = ToReal(std::string_view(w).substr(prefix.size()));
      if (!value) return "bad number in '" + w + "'";
      field = *value;
      return std::nullopt;
    };
    std::optional<std::string> error;
    if (w.rfind("rc", 0) == 0) {
      error = real_arg("rc", MetricKind::kCiderR, params.repeat_coeff);
    } else if (w.rfind("lc", 0) == 0) {
      error = real_arg("lc", MetricKind::kCiderR, params.length_coeff);
    } else if (w.rfind("a", 0) == 0) {
      error = real_arg("a", MetricKind::kCiderR, params.alpha);
    } else if (w.rfind("s", 0) == 0) {
      error = real_arg("s", MetricKind::kCiderD, params.sigma);
    } else if (w.rfind("n", 0) == 0) {
      auto n = ToInt(std::string_view(w).substr(1));
      if (!n) error = "bad integer in '" + w + "'";
      else params.n_max = *n;
    } else {
      error = "unknown argument '" + w + "'";
    }
    if (error) return {std::nullopt, *error};
  }
  try {
    params.Validate();
  } catch (const Error& e) {
    return {std::nullopt, std::string(e.detail())};
  }
  if (params.kind == MetricKind::kBleu && init == InitMode::kCorpus) {
    return {std::nullopt,
            "BLEU has no document frequencies; it requires batch "
            "initialization"};
  }
  return {params, ""};
}

struct BaseAnswer {
  BaseMode mode;
  int nspi;
};

Parsed<BaseAnswer> ParseBase(const std::string& answer) {
  std::vector<std::string> words = Words(Lower(answer));
  if (words.empty()) return {BaseAnswer{BaseMode::kAverage, 5}, ""};
  BaseAnswer base{BaseMode::kAverage, 5};
  if (words[0] == "greedy") {
    base.mode = BaseMode::kGreedy;
  } else if (words[0] == "average") {
    base.mode = BaseMode::kAverage;
  } else if (words[0] == "average-loo") {
    base.mode = BaseMode::kAverageLeaveOneOut;
  } else {
    return {std::nullopt, "unknown base '" + words[0] + "'"};
  }
  if (words.size() > 2) return {std::nullopt, "expected '<base> <nspi>'"};
  if (words.size() == 2) {
    std::string_view text = words[1];
    if (text.rfind("nspi", 0) == 0) text.remove_prefix(4);
    auto n = ToInt(text);
    if (!n || *n < 1) return {std::nullopt, "nspi must be a positive integer"};
    base.nspi = *n;
  }
  if (base.mode != BaseMode::kGreedy && base.nspi < 2) {
    return {std::nullopt, "an average base needs nspi >= 2"};
  }
  return {base, ""};
}

class Session {
 public:
  Session(std::istream& in, std::ostream& out, AnswerMode mode)
      : in_(in), out_(out), mode_(mode) {}

  template <typename T, typename Fn>
  T Ask(std::string_view prompt, Fn parse) {
    ++question_;
    while (true) {
      out_ << prompt << "> " << std::flush;
      const std::string answer = ReadAnswer();
      const std::string lowered = Lower(answer);
      if (lowered == "x" || lowered == "quit" || lowered == "exit") {
        throw Error(ErrorCode::kAborted, "questionnaire aborted");
      }
      Parsed<T> parsed = parse(answer);
      if (parsed.value) {
        if (mode_ == AnswerMode::kStrict) out_ << answer << "\n";
        return *parsed.value;
      }
      if (mode_ == AnswerMode::kStrict) {
        throw Error(ErrorCode::kMalformedAnswers,
                    "question " + std::to_string(question_) + ": '" + answer +
                        "': " + parsed.reason);
      }
      out_ << "  invalid: " << parsed.reason << "\n";
    }
  }

 private:
  std::string ReadAnswer() {
    std::string line;
    while (true) {
      if (!std::getline(in_, line)) {
        if (mode_ == AnswerMode::kStrict) {
          throw Error(ErrorCode::kMalformedAnswers,
                      "answers end before question " +
                          std::to_string(question_));
        }
        out_ << "\n";
        throw Error(ErrorCode::kAborted, "end of input");
      }
      line = Trim(line);
      if (mode_ == AnswerMode::kStrict && !line.empty() && line[0] == '#') {
        continue;
      }
      return line;
    }
  }

  std::istream& in_;
  std::ostream& out_;
  AnswerMode mode_;
  int question_ = 0;
};

constexpr std::string_view kInitEosPrompt =
    "1. Is the <eos> token part of the references when document "
    "frequencies are initialized? [yes/no]\n"
    "   yes: n-grams that end a caption (e.g. 'frisbee <eos>') get their "
    "own idf.\n"
    "   no:  document frequencies carry no information about where "
    "captions end.\n";

constexpr std::string_view kRewardEosPrompt =
    "2. Is <eos> appended to samples and references when the reward is "
    "computed? [yes/no]\n"
    "   yes: a caption is only rewarded for n-grams that close it, so "
    "truncated captions lose reward.\n"
    "   no:  the reward ignores termination; trailing fragments such as "
    "'with a' can raise it.\n";

constexpr std::string_view kInitPrompt =
    "3. Where do document frequencies come from? [corpus/batch]\n"
    "   corpus: the full training reference corpus, computed once "
    "(signature tag wInit).\n"
    "   batch:  each batch's own references, |I| = images in the batch "
    "(signature tag w/oInit).\n";

constexpr std::string_view kMetricPrompt =
    "4. Reward metric and arguments? [cider | cider-d | cider-r | bleu] "
    "followed by any of n<k> s<sigma> rc<x> lc<x> a<x>\n"
    "   cider:   n-gram tf-idf cosine, no clipping or length penalty.\n"
    "   cider-d: clipped counts and a Gaussian length penalty of width "
    "sigma (default n4 s6.0).\n"
    "   cider-r: clipped counts with repetition and length penalties "
    "(default n4 rc0.8 lc0.2 a1.0).\n"
    "   bleu:    clipped n-gram precision with brevity penalty; batch "
    "init only.\n"
    "   empty answer: cider-d n4 s6.0.\n";

constexpr std::string_view kBasePrompt =
    "5. Baseline and samples per image? [greedy | average | average-loo] "
    "<nspi>\n"
    "   greedy:      the reward of a separately decoded greedy caption.\n"
    "   average:     the mean reward of all nspi samples, self "
    "included.\n"
    "   average-loo: the mean reward of the other nspi - 1 samples.\n"
    "   empty answer: average 5.\n";

}  // namespace

QuestionnaireResult RunQuestionnaire(std::istream& in, std::ostream& out,
                                     AnswerMode mode) {
  Session session(in, out, mode);
  QuestionnaireResult result;
  ScstConfig& config = result.config;

  const bool init_eos = session.Ask<bool>(kInitEosPrompt, ParseYesNo);
  const bool reward_eos = session.Ask<bool>(kRewardEosPrompt, ParseYesNo);
  config.scst_class = ClassFor(init_eos, reward_eos);
  config.init_mode = session.Ask<InitMode>(kInitPrompt, ParseInit);
  config.metric = session.Ask<MetricParams>(
      kMetricPrompt,
      [&](const std::string& a) { return ParseMetric(a, config.init_mode); });
  const BaseAnswer base = session.Ask<BaseAnswer>(kBasePrompt, ParseBase);
  config.base_mode = base.mode;
  config.nspi = base.nspi;

  if (config.IsMixed()) {
    result.warnings.push_back(
        std::string("warning: document frequencies ") +
        (init_eos ? "include" : "exclude") + " <eos> but the reward " +
        (reward_eos ? "includes" : "excludes") +
        " it; the signature is tagged " +
        std::string(ClassTag(config.scst_class)) +
        " and engines need allow_mixed");
  }
  for (const auto& w : result.warnings) out << w << "\n";
  result.signature = GenerateSignature(config);
  return result;
}

}  // namespace eoscore
