// Copyright 2026 The ftsynth Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ftsynth/rational.hpp"

#include <charconv>

#include "ftsynth/error.hpp"

namespace ftsynth {

namespace {

std::int64_t ParseInt(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorCode::kParse,
                "not a rational number: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = ParseInt(text.substr(slash + 1), text);
    if (den == 0) throw Error(ErrorCode::kParse, "zero denominator");
    return Rational(ParseInt(text.substr(0, slash), text), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    bool neg = !ip.empty() && ip.front() == '-';
    if (neg) ip.remove_prefix(1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    std::int64_t whole = ip.empty() ? 0 : ParseInt(ip, text);
    std::int64_t frac = fp.empty() ? 0 : ParseInt(fp, text);
    Rational r(whole * scale + frac, scale);
    return neg ? -r : r;
  }
  return Rational(ParseInt(text, text));
}

std::string ToString(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kIllegalMove: return "IllegalMove";
    case ErrorCode::kUndeclaredVariable: return "UndeclaredVariable";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kStateCapExceeded: return "StateCapExceeded";
    case ErrorCode::kNonterminatingPeriod: return "NonterminatingPeriod";
    case ErrorCode::kDuplicateMessageIndex: return "DuplicateMessageIndex";
    case ErrorCode::kEmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorCode::kNotConsecutive: return "NotConsecutive";
    case ErrorCode::kMalformedClause: return "MalformedClause";
    case ErrorCode::kPartialStrategy: return "PartialStrategy";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kMalformedDimacs: return "MalformedDimacs";
    case ErrorCode::kAmbiguousSelection: return "AmbiguousSelection";
    case ErrorCode::kMissingWcet: return "MissingWcet";
    case ErrorCode::kRefinementViolation: return "RefinementViolation";
    case ErrorCode::kCanCheckFailed: return "CanCheckFailed";
    case ErrorCode::kEncodingTooLarge: return "EncodingTooLarge";
    case ErrorCode::kSynthesisFailed: return "SynthesisFailed";
    case ErrorCode::kUsage: return "UsageError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

}  // namespace ftsynth
