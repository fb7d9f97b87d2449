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

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace ftsynth {

// Exact time and program-counter values. Everything that is compared with
// strict inequalities (windows, fractional slot indices) goes through this.
using Rational = boost::rational<std::int64_t>;

// Accepts "7", "-3", "3/2" and finite decimals such as "0.25".
Rational ParseRational(std::string_view text);
std::string ToString(const Rational& r);

inline Rational Floor(const Rational& r) {
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() < 0 && q * r.denominator() != r.numerator()) --q;
  return Rational(q);
}
inline Rational Ceil(const Rational& r) {
  Rational f = Floor(r);
  return f == r ? f : f + 1;
}
inline bool IsInteger(const Rational& r) { return r.denominator() == 1; }

struct RationalHash {
  std::size_t operator()(const Rational& r) const {
    return std::hash<std::int64_t>()(r.numerator()) * 31u ^
           std::hash<std::int64_t>()(r.denominator());
  }
};

}  // namespace ftsynth
