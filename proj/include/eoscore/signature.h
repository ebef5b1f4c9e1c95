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

#ifndef EOSCORE_SIGNATURE_H_
#define EOSCORE_SIGNATURE_H_

#include <string>
#include <string_view>

#include "eoscore/config.h"

namespace eoscore {

// Signature grammar:
//   <class>_<init>+<metric>[<args>]+<base>[nspi<k>]+<X.Y.Z>
// class:  STANDARD | NO<EOS>MODE | MIXED-INIT<EOS> | MIXED-REWARD<EOS>
// init:   wInit | w/oInit
// metric: Cider[n<k>] | Cider-D[n<k>,s<sigma>]
//         | Cider-R[n<k>,rc<x>,lc<x>,a<x>] | BLEU[n<k>]
// base:   greedy | average | average-loo
// Reals use the shortest decimal form that round-trips, with at least one
// fractional digit ("6.0", "0.25").

std::string_view ClassTag(ScstClass scst_class);
std::string_view InitTag(InitMode mode);
std::string_view BaseTag(BaseMode mode);
std::string FormatReal(double value);
// "Cider-D[n4,s6.0]" and friends; the metric segment of a signature.
std::string MetricTag(const MetricParams& params);

// Throws InvalidConfig when the config is invalid (mixed classes are
// accepted here; whether to allow them is the engine's decision).
std::string GenerateSignature(const ScstConfig& config);

struct Signature {
  std::string raw;
  // eos_literal is not encoded and stays at its default.
  ScstConfig config;
};

// Accepts only canonical strings, so GenerateSignature(parsed.config)
// reproduces `raw` byte for byte. Throws MalformedSignature naming the
// offending segment and its byte offset.
Signature ParseSignature(std::string_view raw);

}  // namespace eoscore

#endif  // EOSCORE_SIGNATURE_H_
