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

#ifndef EOSCORE_QUESTIONNAIRE_H_
#define EOSCORE_QUESTIONNAIRE_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "eoscore/config.h"

namespace eoscore {

// kInteractive re-asks after an invalid answer; kStrict (answers files)
// throws MalformedAnswers instead. "x", "quit" or "exit" abort in both
// modes; end of input aborts an interactive session.
enum class AnswerMode { kInteractive, kStrict };

struct QuestionnaireResult {
  ScstConfig config;
  std::string signature;
  std::vector<std::string> warnings;
};

// Asks, in order: EOS in document-frequency initialization, EOS in the
// reward, corpus or batch initialization, metric with arguments, base with
// nspi. In kStrict mode lines starting with '#' are skipped. Prompts and
// warnings go to `out`. Throws Aborted or MalformedAnswers.
QuestionnaireResult RunQuestionnaire(std::istream& in, std::ostream& out,
                                     AnswerMode mode);

}  // namespace eoscore

#endif  // EOSCORE_QUESTIONNAIRE_H_
