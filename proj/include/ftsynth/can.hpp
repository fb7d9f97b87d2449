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

#include <string>
#include <vector>

#include "ftsynth/model.hpp"

namespace ftsynth {

struct CanViolation {
  int condition = 0;  // 1, 2 or 3
  std::string detail;
};

struct CanVerdict {
  bool safe = true;
  std::vector<CanViolation> violations;
};

// The reserved-priority conditions under which adding FT messages leaves
// the timing of existing CAN traffic unchanged:
//   1. no existing message uses the reserved priority k;
//   2. the reserved size is at least every size used at priorities 1..k-1;
//   3. every FT message has priority <= k and size <= the reserved size.
CanVerdict CheckCanConditions(const CanBusProfile& profile);

std::string ToString(const CanVerdict& verdict);

}  // namespace ftsynth
