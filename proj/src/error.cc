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

#include "eoscore/error.h"

namespace eoscore {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEosAlreadyPresent: return "EosAlreadyPresent";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateImageId: return "DuplicateImageId";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEosConflict: return "EosConflict";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kNonStandardMixed: return "NonStandardMixed";
    case ErrorCode::kMissingCorpus: return "MissingCorpus";
    case ErrorCode::kUnexpectedCorpus: return "UnexpectedCorpus";
    case ErrorCode::kSampleCountMismatch: return "SampleCountMismatch";
    case ErrorCode::kEosLiteralMisplaced: return "EosLiteralMisplaced";
    case ErrorCode::kMissingBase: return "MissingBase";
    case ErrorCode::kUnexpectedBase: return "UnexpectedBase";
    case ErrorCode::kEmptyRefs: return "EmptyRefs";
    case ErrorCode::kUnknownImageId: return "UnknownImageId";
    case ErrorCode::kMalformedSignature: return "MalformedSignature";
    case ErrorCode::kMalformedAnswers: return "MalformedAnswers";
    case ErrorCode::kAborted: return "Aborted";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace eoscore
