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
#include <string>
#include <vector>

#include "ftsynth/game.hpp"
#include "ftsynth/model.hpp"

namespace ftsynth {

// One selectable (pattern, concrete PC tuple) pair at a program position.
// tuple[m] is the required next-index of process m; the own entry is the
// position itself.
struct SdgChoice {
  int candidate = 0;  // index into ImAction::candidates
  ActionPattern pattern;
  std::vector<Rational> tuple;
};

struct SdgProcess {
  std::string name;
  std::vector<Rational> positions;            // IndexSet, End last
  std::vector<std::vector<SdgChoice>> choices;  // per position; empty at End
  std::vector<std::vector<BoundPattern>> bound; // per position, per candidate
};

struct SdgFault {
  std::string name;
  int max_per_period = 0;  // counter domain 0..max
  int network = -1;        // -1: every network
};

// Symbolic distributed game: the IM choice structure plus network and fault
// relations over a flat valuation.
struct SymbolicGame {
  ImModel im;
  VarLayout layout;
  std::vector<SdgProcess> processes;
  std::vector<SdgFault> faults;
  std::string goal_text;
  Expr goal;
  std::vector<int> env_slots;

  std::size_t ChoiceCount() const;
};

struct SdgOptions {
  // Skip the CAN reserved-priority gate for FT sends.
  bool can_override = false;
};

// Throws CanCheckFailed when an inserted candidate sends on a CAN network
// whose profile fails the reserved-priority conditions.
SymbolicGame BuildSdg(const ImModel& im, const FaultModel& faults, const std::string& goal,
                      const SdgOptions& options = {});

// World state: valuation, network contents and fault counters.
struct SdgNet {
  bool occupied = false;
  int source = -1;
  int var = -1;
  int valid = -1;
  std::int64_t content = 0;
  int index = 0;
  bool operator==(const SdgNet&) const = default;
};

struct SdgWorld {
  std::vector<std::int64_t> values;
  std::vector<SdgNet> nets;
  std::vector<int> fault_count;
  bool operator==(const SdgWorld&) const = default;
};

// Local-vertex meaning inside a process component of the expanded game.
struct SdgVertexInfo {
  enum Kind { kControl, kCommitted, kDone } kind = kControl;
  int position = 0;  // index into SdgProcess::positions
  int choice = -1;   // kCommitted only
};

struct ExpandOptions {
  Semantics semantics = Semantics::kSimultaneous;
  std::size_t state_cap = 2'000'000;
};

// Explicit game: components 0..n-1 are the processes, component n is the
// world (w0(s) control, w1(s) environment, one edge each).
struct ExpandedGame {
  DistributedGame game;
  std::vector<std::vector<SdgVertexInfo>> info;  // per process component
  std::vector<SdgWorld> worlds;                  // world id = local vertex / 2
  int world_component = 0;

  const SdgChoice& Choice(const SymbolicGame& sdg, int process, int local_vertex) const;
};

// Throws StateCapExceeded when more than options.state_cap global vertices
// are reachable.
ExpandedGame ExpandSdg(const SymbolicGame& sdg, const ExpandOptions& options = {});

// Choice selected at each reachable control position, per process.
struct SelectedChoice {
  int process = 0;
  Rational position;
  const SdgChoice* choice = nullptr;
};
std::vector<SelectedChoice> SelectedChoices(const SymbolicGame& sdg, const ExpandedGame& eg,
                                            const DistributedStrategy& strategy);

std::string DescribeChoice(const SymbolicGame& sdg, int process, const SdgChoice& c);
std::string DescribeWorld(const SymbolicGame& sdg, const SdgWorld& w);

}  // namespace ftsynth
