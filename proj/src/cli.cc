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

#include "eoscore/cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eoscore/auditor.h"
#include "eoscore/config.h"
#include "eoscore/corpus.h"
#include "eoscore/metrics.h"
#include "eoscore/questionnaire.h"
#include "eoscore/scorer.h"
#include "eoscore/scst.h"
#include "eoscore/signature.h"
#include "json.hpp"

namespace eoscore {
namespace {

using Json = nlohmann::ordered_json;

// Numbers are written with six decimals so runs diff cleanly.
void WriteJson(const Json& value, std::ostream& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close_pad(2 * depth, ' ');
  switch (value.type()) {
    case Json::value_t::number_float: {
      const double v = value.get<double>();
      if (!std::isfinite(v)) {
        out << "null";
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      out << buf;
      return;
    }
    case Json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(key).dump() << ": ";
        WriteJson(item, out, depth + 1);
      }
      out << "\n" << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = !value.front().is_structured();
      out << (flat ? "[" : "[\n");
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i > 0) out << (flat ? ", " : ",\n");
        if (!flat) out << pad;
        WriteJson(value[i], out, depth + 1);
      }
      if (!flat) out << "\n" << close_pad;
      out << "]";
      return;
    }
    default:
      out << value.dump();
  }
}

void Emit(const Json& value, std::ostream& out) {
  WriteJson(value, out, 0);
  out << "\n";
}

Json Doubles(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(v);
  return out;
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

KernelKind ResolveKernel() {
  try {
    return KernelFromEnvironment();
  } catch (const Error& e) {
    // A bad environment value is a usage problem, not a metric failure.
    throw Error(ErrorCode::kIoError, e.detail());
  }
}

MetricKind ParseMetricName(const std::string& name) {
  if (name == "cider") return MetricKind::kCider;
  if (name == "cider-d") return MetricKind::kCiderD;
  if (name == "cider-r") return MetricKind::kCiderR;
  if (name == "bleu") return MetricKind::kBleu;
  throw CLI::ValidationError("--metric", "unknown metric '" + name + "'");
}

struct MetricFlags {
  std::string metric = "cider-d";
  int n = 4;
  double sigma = 6.0;
  double rc = 0.8;
  double lc = 0.2;
  double alpha = 1.0;

  std::vector<CLI::Option*> Register(CLI::App* app) {
    return {
        app->add_option("--metric", metric,
                        "cider | cider-d | cider-r | bleu")
            ->check(CLI::IsMember({"cider", "cider-d", "cider-r", "bleu"})),
        app->add_option("--n", n, "Maximum n-gram order"),
        app->add_option("--sigma", sigma, "CIDEr-D length penalty scale"),
        app->add_option("--rc", rc, "CIDEr-R repetition exponent"),
        app->add_option("--lc", lc, "CIDEr-R length exponent"),
        app->add_option("--alpha", alpha, "CIDEr-R length deviance"),
    };
  }

  MetricParams Params() const {
    MetricParams p;
    p.kind = ParseMetricName(metric);
    p.n_max = n;
    p.sigma = sigma;
    p.repeat_coeff = rc;
    p.length_coeff = lc;
    p.alpha = alpha;
    return p;
  }
};

struct TextFlags {
  std::string eos_literal = std::string(kDefaultEosLiteral);
  bool lower = false;

  void Register(CLI::App* app) {
    app->add_option("--eos-literal", eos_literal, "EOS token text");
    app->add_flag("--lower", lower, "Lowercase text before tokenizing");
  }

  LoadOptions Options() const {
    LoadOptions o;
    o.scheme = lower ? NormalizeScheme::kLower : NormalizeScheme::kAsIs;
    o.eos_literal = eos_literal;
    return o;
  }
};

const RefGroup& RefsFor(const Corpus& refs, const std::string& image_id,
                        const std::string& path) {
  const RefGroup* group = refs.Find(image_id);
  if (group == nullptr) {
    throw Error(ErrorCode::kUnknownImageId,
                "image '" + image_id + "' has no references in " + path);
  }
  return *group;
}

// ---- sign -----------------------------------------------------------------

struct SignCommand {
  std::string answers;

  int Run(std::istream& in, std::ostream& out, std::ostream& err) const {
    QuestionnaireResult result;
    if (answers.empty()) {
      result = RunQuestionnaire(in, err, AnswerMode::kInteractive);
    } else {
      std::ifstream file(answers);
      if (!file) {
        throw Error(ErrorCode::kIoError, "cannot open answers file " + answers);
      }
      result = RunQuestionnaire(file, err, AnswerMode::kStrict);
    }
    out << result.signature << "\n";
    return kExitOk;
  }
};

// ---- score ----------------------------------------------------------------

struct ScoreCommand {
  std::string candidates;
  std::string refs;
  MetricFlags metric;
  TextFlags text;
  bool eos = false;

  int Run(std::ostream& out) const {
    const MetricParams params = metric.Params();
    params.Validate();
    const LoadOptions options = text.Options();
    const Corpus corpus = LoadCorpus(refs, options);
    const std::vector<SampleRecord> records = LoadSamples(candidates, options);
    const EosMode mode = eos ? EosMode::kWith : EosMode::kWithout;

    std::optional<DocFreqTable> df;
    if (params.UsesDocFreq()) {
      df = BuildDocFreq(corpus, mode, params.n_max, text.eos_literal);
    }
    const RewardScorer scorer(params, df ? &*df : nullptr, ResolveKernel());

    Json images = Json::array();
    std::vector<double> means;
    for (const SampleRecord& record : records) {
      const RefGroup& group = RefsFor(corpus, record.image_id, refs);
      std::vector<TokenSequence> ref_seqs;
      for (const TokenSequence& r : group.refs) {
        ref_seqs.push_back(eos ? AppendEos(r, text.eos_literal) : r);
      }
      std::vector<TokenSequence> cands;
      for (const TokenSequence& s : record.samples) {
        if (eos) {
          cands.push_back(EnsureEos(s, text.eos_literal));
        } else if (s.ContainsToken(text.eos_literal)) {
          throw Error(ErrorCode::kEosLiteralMisplaced,
                      "image '" + record.image_id + "': sample contains '" +
                          text.eos_literal + "' but --eos is not set");
        } else {
          cands.push_back(s);
        }
      }
      std::vector<double> scores(cands.size());
      scorer.ScoreGroup(ref_seqs, cands, scores);
      const double mean = Mean(scores);
      means.push_back(mean);
      Json image;
      image["image_id"] = record.image_id;
      image["scores"] = Doubles(scores);
      image["mean"] = mean;
      images.push_back(std::move(image));
    }

    Json report;
    report["signature"] = MetricTag(params) + "+" + (eos ? "eos" : "noeos") +
                          "+" + std::string(kVersion);
    report["metric"] = std::string(MetricName(params.kind));
    report["eos"] = eos;
    report["images"] = std::move(images);
    report["corpus_mean"] = Mean(means);
    Emit(report, out);
    return kExitOk;
  }
};

// ---- reward ---------------------------------------------------------------

struct RewardCommand {
  std::string batch;
  std::string refs;
  std::string corpus;
  std::string signature;
  std::string scst_class;
  std::string init;
  std::string base;
  int nspi = 5;
  MetricFlags metric;
  TextFlags text;
  bool allow_mixed = false;
  int threads = 1;
  std::vector<CLI::Option*> config_options;

  static ScstClass ParseClass(const std::string& name) {
    if (name == "standard") return ScstClass::kStandard;
    if (name == "no-eos") return ScstClass::kNoEos;
    if (name == "mixed-init-eos") return ScstClass::kMixedInitEos;
    return ScstClass::kMixedRewardEos;
  }

  ScstConfig ResolveConfig(std::ostream& err) const {
    std::size_t given = 0;
    for (const CLI::Option* opt : config_options) given += opt->count() > 0;
    if (!signature.empty()) {
      if (given > 0) {
        throw CLI::ValidationError(
            "--signature", "cannot be combined with configuration flags");
      }
      ScstConfig config = ParseSignature(signature).config;
      if (config.version != kVersion) {
        err << "warning: signature version " << config.version
            << " differs from this build (" << kVersion << ")\n";
      }
      config.eos_literal = text.eos_literal;
      return config;
    }
    if (scst_class.empty() || init.empty() || base.empty() ||
        metric_option_count() == 0) {
      throw CLI::ValidationError(
          "reward", "needs --signature or --class, --init, --metric, --base");
    }
    ScstConfig config;
    config.scst_class = ParseClass(scst_class);
    config.init_mode = init == "corpus" ? InitMode::kCorpus : InitMode::kBatch;
    config.metric = metric.Params();
    config.base_mode = base == "greedy"    ? BaseMode::kGreedy
                       : base == "average" ? BaseMode::kAverage
                                           : BaseMode::kAverageLeaveOneOut;
    config.nspi = nspi;
    config.eos_literal = text.eos_literal;
    return config;
  }

  std::size_t metric_option_count() const { return metric_option_->count(); }
  CLI::Option* metric_option_ = nullptr;

  int Run(std::ostream& out, std::ostream& err) const {
    const ScstConfig config = ResolveConfig(err);
    const LoadOptions options = text.Options();
    const Corpus ref_corpus = LoadCorpus(refs, options);
    const std::vector<SampleRecord> records = LoadSamples(batch, options);
    std::optional<Corpus> init_corpus;
    if (!corpus.empty()) init_corpus = LoadCorpus(corpus, options);

    std::vector<ImageBatch> images;
    images.reserve(records.size());
    for (const SampleRecord& record : records) {
      const RefGroup& group = RefsFor(ref_corpus, record.image_id, refs);
      images.push_back(
          {record.image_id, record.samples, group.refs, record.base});
    }

    ScstEngine::Options engine_options;
    engine_options.allow_mixed = allow_mixed;
    engine_options.kernel = ResolveKernel();
    engine_options.threads = threads;
    const ScstEngine engine = ScstEngine::Init(
        config, init_corpus ? &*init_corpus : nullptr, engine_options);
    const AdvantageMatrix matrix = engine.ComputeAdvantages(images);

    Json rows = Json::array();
    for (const ImageAdvantages& a : matrix.images) {
      Json row;
      row["image_id"] = a.image_id;
      row["base"] = a.base;
      row["rewards"] = Doubles(a.rewards);
      row["baselines"] = Doubles(a.baselines);
      row["advantages"] = Doubles(a.advantages);
      rows.push_back(std::move(row));
    }
    Json report;
    report["signature"] = matrix.signature;
    report["images"] = std::move(rows);
    Emit(report, out);
    return kExitOk;
  }
};

// ---- audit ----------------------------------------------------------------

struct AuditCommand {
  std::string candidates;
  std::string lexicon;
  std::string clean_path;
  std::string format = "json";
  TextFlags text;

  static Json Counts(const std::map<std::string, std::size_t>& grams) {
    Json out = Json::object();
    for (const auto& [gram, count] : grams) out[gram] = count;
    return out;
  }

  static void WriteTable(const AuditReport& r, std::ostream& out) {
    char line[128];
    out << "lexicon " << r.lexicon_version << "\n";
    std::snprintf(line, sizeof(line), "%-8s %8s %10s\n", "class", "count",
                  "share");
    out << line;
    for (ArtifactClass c : kArtifactClasses) {
      const std::size_t n = r.counts.at(c);
      const double share =
          r.artifacts == 0 ? 0.0 : static_cast<double>(n) / r.artifacts;
      std::snprintf(line, sizeof(line), "%-8s %8zu %10.6f\n",
                    std::string(ArtifactLabel(c)).c_str(), n, share);
      out << line;
    }
    std::snprintf(line, sizeof(line),
                  "total %zu  clean %zu  artifacts %zu  rate %.6f\n", r.total,
                  r.clean, r.artifacts, r.artifact_rate);
    out << line;
  }

  static Json ToJson(const AuditReport& r) {
    Json classes = Json::object();
    for (ArtifactClass c : kArtifactClasses) {
      const std::size_t n = r.counts.at(c);
      Json entry;
      entry["count"] = n;
      entry["share"] =
          r.artifacts == 0 ? 0.0 : static_cast<double>(n) / r.artifacts;
      entry["bigrams"] = Counts(r.bigrams.at(c));
      entry["trigrams"] = Counts(r.trigrams.at(c));
      classes[std::string(ArtifactLabel(c))] = std::move(entry);
    }
    Json report;
    report["lexicon_version"] = r.lexicon_version;
    report["total"] = r.total;
    report["clean"] = r.clean;
    report["artifacts"] = r.artifacts;
    report["artifact_rate"] = r.artifact_rate;
    report["classes"] = std::move(classes);
    return report;
  }

  void WriteCleaned(const std::vector<SampleRecord>& records,
                    const FragmentLexicon& lex, std::ostream& err) const {
    std::ofstream file(clean_path);
    if (!file) {
      throw Error(ErrorCode::kIoError, "cannot write " + clean_path);
    }
    std::size_t unstrippable = 0;
    auto clean = [&](const TokenSequence& seq) {
      CleanResult r = Clean(seq, lex, text.eos_literal);
      unstrippable += r.unstrippable;
      return r.sequence.Joined();
    };
    for (const SampleRecord& record : records) {
      nlohmann::ordered_json line;
      line["image_id"] = record.image_id;
      line["samples"] = nlohmann::ordered_json::array();
      for (const TokenSequence& s : record.samples) {
        line["samples"].push_back(clean(s));
      }
      if (record.base) line["base"] = clean(*record.base);
      file << line.dump() << "\n";
    }
    if (unstrippable > 0) {
      err << "note: " << unstrippable
          << " caption(s) consist only of fragment words and were kept\n";
    }
  }

  int Run(std::ostream& out, std::ostream& err) const {
    const FragmentLexicon lex = lexicon.empty()
                                    ? FragmentLexicon::Default()
                                    : FragmentLexicon::Load(lexicon);
    const std::vector<SampleRecord> records =
        LoadSamples(candidates, text.Options());
    std::vector<TokenSequence> captions;
    for (const SampleRecord& record : records) {
      captions.insert(captions.end(), record.samples.begin(),
                      record.samples.end());
    }
    if (captions.empty()) {
      throw Error(ErrorCode::kEmptyCorpus, "no captions in " + candidates);
    }
    const AuditReport report = Audit(captions, lex, text.eos_literal);
    if (format != "table") Emit(ToJson(report), out);
    if (format != "json") WriteTable(report, out);
    if (!clean_path.empty()) WriteCleaned(records, lex, err);
    return kExitOk;
  }
};

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAborted:
      return kExitAborted;
    case ErrorCode::kEmptyInput:
    case ErrorCode::kParseError:
    case ErrorCode::kDuplicateImageId:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kUnknownImageId:
    case ErrorCode::kMalformedSignature:
    case ErrorCode::kMalformedAnswers:
    case ErrorCode::kIoError:
      return kExitUsage;
    default:
      return kExitValidation;
  }
}

int RunCli(std::span<const std::string> args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"EOS-aware caption metrics, SCST rewards and artifact audits",
               "eoscore"};
  app.require_subcommand(1);

  SignCommand sign;
  CLI::App* sign_app =
      app.add_subcommand("sign", "Build a signature from a questionnaire");
  sign_app->add_option("--answers", sign.answers,
                       "Answers file (one answer per line, '#' comments)");

  ScoreCommand score;
  CLI::App* score_app =
      app.add_subcommand("score", "Score candidates against references");
  score_app->add_option("--candidates", score.candidates)->required();
  score_app->add_option("--refs", score.refs)->required();
  score.metric.Register(score_app);
  score.text.Register(score_app);
  score_app->add_flag("--eos", score.eos,
                      "Append EOS to candidates, references and df");

  RewardCommand reward;
  CLI::App* reward_app =
      app.add_subcommand("reward", "Compute SCST rewards and advantages");
  reward_app->add_option("--batch", reward.batch)->required();
  reward_app->add_option("--refs", reward.refs)->required();
  reward_app->add_option("--corpus", reward.corpus,
                         "Reference corpus for corpus-level df");
  reward_app->add_option("--signature", reward.signature);
  reward.config_options = reward.metric.Register(reward_app);
  reward.metric_option_ = reward.config_options.front();
  reward.config_options.push_back(
      reward_app->add_option("--class", reward.scst_class)
          ->check(CLI::IsMember(
              {"standard", "no-eos", "mixed-init-eos", "mixed-reward-eos"})));
  reward.config_options.push_back(
      reward_app->add_option("--init", reward.init)
          ->check(CLI::IsMember({"corpus", "batch"})));
  reward.config_options.push_back(
      reward_app->add_option("--base", reward.base)
          ->check(CLI::IsMember({"greedy", "average", "average-loo"})));
  reward.config_options.push_back(
      reward_app->add_option("--nspi", reward.nspi, "Samples per image"));
  reward.text.Register(reward_app);
  reward_app->add_flag("--allow-mixed", reward.allow_mixed);
  reward_app->add_option("--threads", reward.threads)
      ->check(CLI::PositiveNumber);

  AuditCommand audit;
  CLI::App* audit_app =
      app.add_subcommand("audit", "Report EOS-omission artifacts");
  audit_app->add_option("--candidates", audit.candidates)->required();
  audit_app->add_option("--lexicon", audit.lexicon, "Fragment lexicon file");
  audit_app->add_option("--clean", audit.clean_path,
                        "Write cleaned captions as JSONL");
  audit_app->add_option("--format", audit.format)
      ->check(CLI::IsMember({"json", "table", "both"}));
  audit.text.Register(audit_app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (sign_app->parsed()) return sign.Run(in, out, err);
    if (score_app->parsed()) return score.Run(out);
    if (reward_app->parsed()) return reward.Run(out, err);
    return audit.Run(out, err);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "eoscore: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "eoscore: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace eoscore
