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

// Regression model, template pools and the published timing instance.

#include <algorithm>
#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "ftsynth/executor.hpp"
#include "ftsynth/model_io.hpp"
#include "ftsynth/timing.hpp"
#include "ftsynth/translate.hpp"

namespace ftsynth::testing {

inline std::string ModelPath(const std::string& name) { return std::string(FTSYNTH_MODELS_DIR) + "/" + name; }

inline SystemSpec Regression() { return LoadSpec(ModelPath("two_process.json")); }

inline TemplatePool LoadPool(const SystemSpec& spec, const std::string& name) {
  return ParseTemplates(ReadTextFile(ModelPath(name)), spec.model);
}

inline const std::vector<std::string>& ResendProtocol() {
  static const std::vector<std::string> lines = {
      "A@9/4 RecvMsg(req) when B=7/4", "A@5/2 CondRsp when B=7/4",   "A@11/4 MsgSend(rsp) when B=7/4",
      "B@5/4 CondReq when A=9/4",      "B@3/2 MsgSend(req) when A=9/4", "B@7/4 CondFix when A=3",
  };
  return lines;
}

// Releases of the published timed protocol for the resend pool.
inline const std::vector<std::pair<std::string, Rational>>& ReferenceReleases() {
  static const std::vector<std::pair<std::string, Rational>> r = {
      {"alpha(A@9/4)", Rational(72)},  {"alpha(A@5/2)", Rational(77)}, {"alpha(A@11/4)", Rational(82)},
      {"alpha(B@5/4)", Rational(62)},  {"alpha(B@3/2)", Rational(67)}, {"alpha(B@7/4)", Rational(87)},
  };
  return r;
}

// The system with the reference releases pinned, solved, and the solution
// substituted back. Empty string on success, else what went wrong.
inline std::string CheckReferenceInstance(const TimingSystem& ltm) {
  TimingSystem pinned = ltm;
  for (const auto& [name, value] : ReferenceReleases()) {
    int v = pinned.Find(name);
    if (v < 0) return "no variable " + name;
    pinned.constraints.push_back({v, -1, value, false, 'A', 0});
    pinned.constraints.push_back({-1, v, -value, false, 'A', 0});
  }
  LtmSolution sol = SolveLtm(pinned);
  if (!sol.feasible) {
    std::string why = "infeasible:";
    for (int c : sol.blocking) why += " [" + pinned.Format(pinned.constraints[c]) + "]";
    return why;
  }
  if (FirstViolated(ltm, sol.values) != -1) return "solution violates the system";
  return "";
}

inline bool InsideBounds(const PcBounds& b, const std::vector<int>& pc) {
  for (std::size_t m = 0; m < pc.size(); ++m) {
    if (pc[m] < b.low[m] || pc[m] >= b.up[m]) return false;
  }
  return true;
}

// Walks one period exhaustively and checks that every action and every
// delivery fires inside the box computed for it. Empty string when sound.
inline std::string CheckAbstractionSound(const PisemModel& model, int* checked = nullptr) {
  PcBoundsMaps maps = GeneratePreconditionPc(model);
  Executor ex(model, FaultModel{});
  std::deque<PisemConfig> todo;
  std::vector<PisemConfig> seen;
  for (const auto& env : ex.EnvChoices()) todo.push_back(ex.Initial(env));
  int count = 0;
  while (!todo.empty()) {
    PisemConfig c = todo.front();
    todo.pop_front();
    if (std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
    seen.push_back(c);
    for (const Move& mv : ex.EnabledMoves(c)) {
      if (mv.kind == MoveKind::kRepeatCycle) continue;
      const PcBounds* b = nullptr;
      if (mv.kind == MoveKind::kExecuteLocal || mv.kind == MoveKind::kSendToNetwork ||
          mv.kind == MoveKind::kReceive) {
        b = &maps.actions[mv.target][c.next[mv.target] - 1];
      } else if (mv.kind == MoveKind::kProcessMessage) {
        b = &maps.messages.at({mv.target, c.nets[mv.target].index});
      }
      if (b) {
        if (!InsideBounds(*b, c.next)) return "outside its box: " + ex.Describe(c, mv);
        ++count;
      }
      StepResult r = ex.Step(c, mv);
      if (!r.blocked) todo.push_back(r.config);
    }
  }
  if (checked) *checked = count;
  return "";
}

}  // namespace ftsynth::testing
