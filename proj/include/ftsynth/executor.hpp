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
#include <optional>
#include <string>
#include <vector>

#include "ftsynth/model.hpp"

namespace ftsynth {

struct NetworkState {
  bool occupied = false;
  int source = -1;
  int dest = -1;
  int var = -1;        // destination slot
  int valid = -1;      // destination "<var>_v" slot or -1
  std::int64_t content = 0;
  int index = 0;       // message index
  Rational sent_at;    // transit clock is t - sent_at

  bool operator==(const NetworkState&) const = default;
};

struct PisemConfig {
  std::vector<std::int64_t> values;  // VarLayout order
  std::vector<int> next;             // per process, 1-based; |actions|+1 when done
  std::vector<NetworkState> nets;
  Rational t;
  std::vector<int> faults_used;      // per fault entry, this period
  int period_index = 0;

  bool operator==(const PisemConfig&) const = default;
};

enum class MoveKind {
  kExecuteLocal,    // assign or null-op
  kSendToNetwork,
  kProcessMessage,
  kReceive,
  kRepeatCycle,
  kAdvanceTime,
};

const char* MoveKindName(MoveKind kind);

struct Move {
  MoveKind kind = MoveKind::kExecuteLocal;
  int target = -1;     // process or network
  int fault = -1;      // kProcessMessage: fault entry applied, -1 for normal delivery
  Rational to;         // kAdvanceTime
  std::vector<std::int64_t> env;  // kRepeatCycle: new environment values (may be empty)

  static Move Of(MoveKind kind, int target = -1, int fault = -1) {
    Move m;
    m.kind = kind;
    m.target = target;
    m.fault = fault;
    return m;
  }
};

struct StepResult {
  PisemConfig config;
  bool blocked = false;  // send on a busy network; config is unchanged
};

// Step semantics of a timed model. All methods are pure.
class Executor {
 public:
  Executor(PisemModel model, FaultModel faults);

  const PisemModel& model() const { return model_; }
  const FaultModel& faults() const { return faults_; }
  const VarLayout& layout() const { return layout_; }

  // Initial configuration with the given environment values (one per
  // environment slot, in layout order); empty keeps declared initial values.
  PisemConfig Initial(const std::vector<std::int64_t>& env = {}) const;

  std::vector<int> EnvSlots() const;
  // All combinations of environment variable values.
  std::vector<std::vector<std::int64_t>> EnvChoices() const;

  bool Enabled(const PisemConfig& c, const Move& m) const;
  // Throws IllegalMove when the move is not enabled.
  StepResult Step(const PisemConfig& c, const Move& m) const;

  // Discrete moves enabled at c plus the time advance when allowed. A
  // RepeatCycle is listed once per environment choice.
  std::vector<Move> EnabledMoves(const PisemConfig& c) const;

  // Next instant after c.t where something may change, or nullopt at period end.
  std::optional<Rational> NextInstant(const PisemConfig& c) const;
  bool AllDone(const PisemConfig& c) const;

  std::string Describe(const PisemConfig& c, const Move& m) const;
  std::string Valuation(const PisemConfig& c) const;

 private:
  bool InWindow(const PisemConfig& c, int proc, ActionKind kind) const;
  bool FaultApplies(int entry, int network) const;

  PisemModel model_;
  FaultModel faults_;
  VarLayout layout_;
  std::vector<std::vector<BoundPattern>> bound_;
};

struct SimOptions {
  enum class Mode { kExhaustive, kRandom };
  Mode mode = Mode::kExhaustive;
  std::uint64_t seed = 1;
  int periods = 1;
  int random_runs = 200;
  std::size_t state_cap = 2'000'000;
};

struct SimResult {
  bool always_reached = true;
  std::vector<std::string> trace;  // counterexample play when !always_reached
  std::size_t explored = 0;
};

// Explores interleavings, delivery instants and fault activations; the goal
// is evaluated at every period end.
SimResult SimulateWithFaults(const PisemModel& model, const FaultModel& faults,
                             const std::string& goal, const SimOptions& options);

}  // namespace ftsynth
