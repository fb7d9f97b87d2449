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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftsynth/expr.hpp"
#include "ftsynth/rational.hpp"

namespace ftsynth {

// ---------------------------------------------------------------------------
// Platform-independent system execution model (timed)
// ---------------------------------------------------------------------------

struct Variable {
  std::string name;
  std::int64_t min = 0;
  std::int64_t max = 1;
  std::int64_t init = 0;
  // Restored to `init` at every period start (e.g. message validity flags).
  bool reset_each_period = false;
};

enum class ActionKind { kAssign, kSend, kReceive, kNullOp };

const char* ActionKindName(ActionKind kind);

// An atomic action without timing. Which fields are meaningful depends on
// `kind`; unused fields keep their defaults.
struct ActionPattern {
  ActionKind kind = ActionKind::kNullOp;
  std::string name;  // label used in traces, dumps and WCET lookup
  Expr guard;        // `pre`; constant true when absent

  // assign: target := value
  std::string target;
  Expr value;

  // send(pre, index, network, self, dest, remote_var, content)
  int message_index = 0;  // 1-based
  int network = 0;        // 0-based
  int dest = -1;          // 0-based process
  std::string remote_var;
  std::string content;

  // receive(pre, var)
  std::string var;

  static ActionPattern NullOp(std::string name = "null-op");

  // Local variable names this pattern reads (guard, value, content).
  std::vector<std::string> Reads() const;
  std::string Describe() const;
};

struct TimedAction {
  ActionPattern pattern;
  Rational release;
  Rational deadline;
  std::optional<Rational> wcet;
};

struct PisemProcess {
  std::string name;
  std::vector<Variable> variables;
  std::vector<Variable> env_variables;
  std::vector<TimedAction> actions;
};

// Conditions of a CAN bus configuration under which added messages leave the
// worst-case transmission times of existing messages unchanged.
struct CanMessage {
  int priority = 0;
  int size = 0;
};

struct CanBusProfile {
  int reserved_priority = 0;  // k
  int reserved_size = 0;      // payload size predefined for priority k
  std::vector<CanMessage> existing;
  std::vector<CanMessage> ft_messages;
};

struct Network {
  std::string name;
  int message_count = 0;
  std::map<int, Rational> wcmtt;       // message index -> worst case
  std::map<int, Rational> best_case;   // message index -> best case (default 0)
  std::optional<CanBusProfile> can;

  Rational Wcmtt(int index) const;
  Rational BestCase(int index) const;
};

struct PisemModel {
  Rational period;
  std::vector<PisemProcess> processes;
  std::vector<Network> networks;

  int ProcessIndex(std::string_view name) const;  // -1 if unknown
};

enum class FaultKind { kMessageLoss };

struct FaultEffect {
  FaultKind kind = FaultKind::kMessageLoss;
  int network = -1;  // -1: every network
};

struct FaultEntry {
  std::string type;
  int max_per_period = 0;
  FaultEffect effect;
};

struct FaultModel {
  std::vector<FaultEntry> entries;
};

// A model document: the timed system, its fault hypothesis and the goal that
// must hold at the end of every period.
struct SystemSpec {
  PisemModel model;
  FaultModel faults;
  std::string goal = "true";
};

// ---------------------------------------------------------------------------
// Variable layout shared by the executor, the game builder and the goal.
// ---------------------------------------------------------------------------

class VarLayout {
 public:
  VarLayout() = default;
  explicit VarLayout(const std::vector<PisemProcess>& processes);
  template <typename P>
  static VarLayout Of(const std::vector<P>& processes);

  int size() const { return static_cast<int>(names_.size()); }
  // Slot of `name` as seen from process `owner` (own variables and own
  // environment variables only; qualified "P.x" names are not allowed).
  int Local(int owner, std::string_view name) const;
  // Slot of a qualified "P.x" name.
  int Qualified(std::string_view qualified) const;
  const std::string& Name(int slot) const { return names_[slot]; }
  const Variable& Decl(int slot) const { return decls_[slot]; }
  int Owner(int slot) const { return owners_[slot]; }
  bool IsEnv(int slot) const { return env_[slot]; }
  std::vector<std::int64_t> Initial() const;

 private:
  void Add(int owner, const std::string& pname, const Variable& v, bool env);
  std::vector<std::string> process_names_;
  std::vector<std::string> names_;  // qualified
  std::vector<Variable> decls_;
  std::vector<int> owners_;
  std::vector<bool> env_;
};

template <typename P>
VarLayout VarLayout::Of(const std::vector<P>& processes) {
  std::vector<PisemProcess> shells;
  for (const auto& p : processes) {
    PisemProcess s;
    s.name = p.name;
    s.variables = p.variables;
    s.env_variables = p.env_variables;
    shells.push_back(std::move(s));
  }
  return VarLayout(shells);
}

// A pattern with all of its expressions bound against a layout.
struct BoundPattern {
  ActionPattern pattern;
  Expr guard;
  Expr value;
  int target = -1;       // assign target slot
  int content = -1;      // send content slot
  int remote = -1;       // send destination variable slot
  int remote_valid = -1; // "<remote>_v" in the destination, if declared
};

BoundPattern BindPattern(const ActionPattern& p, int owner, const VarLayout& layout);

// Throws DomainViolation if `value` is outside the declared range of `slot`.
void CheckDomain(const VarLayout& layout, int slot, std::int64_t value);

// ---------------------------------------------------------------------------
// Interleaving model: timing replaced by program-counter preconditions.
// ---------------------------------------------------------------------------

// Half-open interval [low, up) over a process's program-counter values.
struct PcInterval {
  Rational low;
  Rational up;
  bool Contains(const Rational& pc) const { return low <= pc && pc < up; }
  bool operator==(const PcInterval&) const = default;
};
using PcBox = std::vector<PcInterval>;  // one interval per process

struct Candidate {
  ActionPattern pattern;
  std::optional<Rational> wcet;
};

struct ImAction {
  Rational index;                     // integer for original actions
  std::vector<Candidate> candidates;  // exactly one for original actions
  PcBox box;
  bool inserted = false;
};

struct ImProcess {
  std::string name;
  std::vector<Variable> variables;
  std::vector<Variable> env_variables;
  std::vector<ImAction> actions;  // sorted by index
  int original_count = 0;         // |sigma_i| of the original sequence

  Rational End() const { return Rational(original_count + 1); }
  Rational Beyond() const { return Rational(original_count + 2); }
  // Action indices followed by End(), ascending.
  std::vector<Rational> IndexSet() const;
  // min{x in IndexSet | x > pc}; End() when pc is the last action.
  Rational Next(const Rational& pc) const;
  const ImAction* Find(const Rational& index) const;
};

// One FT slot between consecutive host actions c and d = c+1 (1-based) of
// `process`. Slots sharing a host gap are ordered as listed.
struct FtTemplate {
  int process = 0;
  int c = 0;
  int d = 0;
  std::vector<Candidate> candidates;
};
using TemplatePool = std::vector<FtTemplate>;

struct ImMessage {
  int network = 0;
  int index = 0;
  int sender = 0;
  PcBox box;
};

struct ImModel {
  Rational period;
  std::vector<ImProcess> processes;
  std::vector<Network> networks;
  std::vector<ImMessage> messages;

  int ProcessIndex(std::string_view name) const;
};

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct Diagnostic {
  std::string location;
  std::string message;
};

std::vector<Diagnostic> ValidateModel(const PisemModel& model);

}  // namespace ftsynth
