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

#include <map>
#include <utility>
#include <vector>

#include "ftsynth/model.hpp"

namespace ftsynth {

// Per-process integer bounds: low[m] <= pc_m < up[m].
struct PcBounds {
  std::vector<int> low;
  std::vector<int> up;
  bool operator==(const PcBounds&) const = default;
};

using MessageKey = std::pair<int, int>;  // (network, message index)

struct PcBoundsMaps {
  std::vector<std::vector<PcBounds>> actions;  // [process][action - 1]
  std::map<MessageKey, PcBounds> messages;
  std::map<MessageKey, int> senders;
};

// Abstracts the timing of every action and message into PC intervals.
// Throws DuplicateMessageIndex if a (network, index) pair is sent twice.
PcBoundsMaps GeneratePreconditionPc(const PisemModel& model);

// The IM of a timed model: integer indices, one candidate per action.
ImModel AbstractTiming(const PisemModel& model);

// Evenly spaced fractional indices strictly between c and c+1.
std::vector<Rational> SlotIndices(int c, int count);

// Number of slots per (process, host action c) implied by a pool.
std::map<std::pair<int, int>, int> SlotPlan(const TemplatePool& pool);

// Box of an FT action at `slot` between consecutive host actions c and d.
// Throws NotConsecutive unless floor(slot) = c, ceil(slot) = d = c + 1 and
// both hosts exist in the IM.
PcBox DecideFtTiming(const ImModel& im, int process, int c, int d, const Rational& slot);

// Inserts one action per pool entry at fractional indices, remaps every
// existing bound so that "host action k done" now means "first index after
// k", and gives each inserted action the box from DecideFtTiming. Inserted sends
// register a message whose box only constrains the sender's dimension.
ImModel InsertFtSlots(const ImModel& im, const TemplatePool& pool);

}  // namespace ftsynth
