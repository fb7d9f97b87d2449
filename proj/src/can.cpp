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

#include "ftsynth/can.hpp"

#include <algorithm>

namespace ftsynth {

namespace {

std::string Msg(const CanMessage& m) {
  return "(priority " + std::to_string(m.priority) + ", size " + std::to_string(m.size) + ")";
}

}  // namespace

CanVerdict CheckCanConditions(const CanBusProfile& profile) {
  CanVerdict v;
  const int k = profile.reserved_priority;
  auto add = [&](int condition, std::string detail) {
    v.safe = false;
    v.violations.push_back({condition, std::move(detail)});
  };
  int existing_at_k = 0;
  int max_size = 0;
  for (const auto& m : profile.existing) {
    if (m.priority == k) ++existing_at_k;
    if (m.priority >= 1 && m.priority < k) max_size = std::max(max_size, m.size);
  }
  if (existing_at_k > 0) {
    add(1, std::to_string(existing_at_k) + " existing message(s) use reserved priority " + std::to_string(k));
  }
  if (profile.reserved_size < max_size) {
    add(2, "reserved size " + std::to_string(profile.reserved_size) + " is below existing size " +
               std::to_string(max_size));
  }
  int bad_ft = 0;
  CanMessage worst;
  for (const auto& m : profile.ft_messages) {
    if (m.priority > k || m.size > profile.reserved_size) {
      ++bad_ft;
      worst.priority = std::max(worst.priority, m.priority);
      worst.size = std::max(worst.size, m.size);
    }
  }
  if (bad_ft > 0) {
    add(3, std::to_string(bad_ft) + " FT message(s) exceed priority " + std::to_string(k) + " or size " +
               std::to_string(profile.reserved_size) + ", largest " + Msg(worst));
  }
  return v;
}

std::string ToString(const CanVerdict& verdict) {
  if (verdict.safe) return "safe";
  std::string s;
  for (const auto& x : verdict.violations) {
    if (!s.empty()) s += "; ";
    s += "condition " + std::to_string(x.condition) + ": " + x.detail;
  }
  return s;
}

}  // namespace ftsynth
