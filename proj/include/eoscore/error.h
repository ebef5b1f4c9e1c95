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

#ifndef EOSCORE_ERROR_H_
#define EOSCORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eoscore {

// Every failure raised by the library carries one of these codes. The names
// are stable: bindings and CLI messages surface them verbatim.
enum class ErrorCode {
  kEmptyInput,
  kEosAlreadyPresent,
  kParseError,
  kDuplicateImageId,
  kEmptyCorpus,
  kEosConflict,
  kInvalidConfig,
  kNonStandardMixed,
  kMissingCorpus,
  kUnexpectedCorpus,
  kSampleCountMismatch,
  kEosLiteralMisplaced,
  kMissingBase,
  kUnexpectedBase,
  kEmptyRefs,
  kUnknownImageId,
  kMalformedSignature,
  kMalformedAnswers,
  kAborted,
  kIoError,
};

std::string_view ErrorName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorName(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  std::string_view name() const { return ErrorName(code_); }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace eoscore

#endif  // EOSCORE_ERROR_H_
