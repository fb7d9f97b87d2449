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

#include "ftsynth/executor.hpp"

#include <algorithm>

#include "ftsynth/error.hpp"

namespace ftsynth {

const char* MoveKindName(MoveKind kind) {
  switch (kind) {
    case MoveKind::kExecuteLocal: return "execute";
    case MoveKind::kSendToNetwork: return "send";
    case MoveKind::kProcessMessage: return "deliver";
    case MoveKind::kReceive: return "receive";
    case MoveKind::kRepeatCycle: return "repeat-cycle";
    case MoveKind::kAdvanceTime: return "advance";
  }
  return "?";
}

Executor::Executor(PisemModel model, FaultModel faults)
    : model_(std::move(model)), faults_(std::move(faults)), layout_(model_.processes) {
  for (std::size_t i = 0; i < model_.processes.size(); ++i) {
    std::vector<BoundPattern> row;
    for (const auto& a : model_.processes[i].actions) {
      row.push_back(BindPattern(a.pattern, static_cast<int>(i), layout_));
    }
    bound_.push_back(std::move(row));
  }
}

std::vector<int> Executor::EnvSlots() const {
  std::vector<int> s;
  for (int k = 0; k < layout_.size(); ++k) {
    if (layout_.IsEnv(k)) s.push_back(k);
  }
  return s;
}

std::vector<std::vector<std::int64_t>> Executor::EnvChoices() const {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (int slot : EnvSlots()) {
    const Variable& d = layout_.Decl(slot);
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& prefix : out) {
      for (std::int64_t v = d.min; v <= d.max; ++v) {
        auto row = prefix;
        row.push_back(v);
        next.push_back(std::move(row));
      }
    }
    out = std::move(next);
  }
  return out;
}

PisemConfig Executor::Initial(const std::vector<std::int64_t>& env) const {
  PisemConfig c;
  c.values = layout_.Initial();
  std::vector<int> slots = EnvSlots();
  if (!env.empty()) {
    if (env.size() != slots.size()) {
      throw Error(ErrorCode::kInvalidModel, "environment valuation has wrong arity");
    }
    for (std::size_t k = 0; k < slots.size(); ++k) {
      CheckDomain(layout_, slots[k], env[k]);
      c.values[slots[k]] = env[k];
    }
  }
  c.next.assign(model_.processes.size(), 1);
  c.nets.assign(model_.networks.size(), NetworkState{});
  c.t = 0;
  c.faults_used.assign(faults_.entries.size(), 0);
  return c;
}

bool Executor::AllDone(const PisemConfig& c) const {
  for (std::size_t i = 0; i < model_.processes.size(); ++i) {
    if (c.next[i] <= static_cast<int>(model_.processes[i].actions.size())) return false;
  }
  return true;
}

bool Executor::InWindow(const PisemConfig& c, int proc, ActionKind kind) const {
  if (proc < 0 || proc >= static_cast<int>(model_.processes.size())) return false;
  const auto& acts = model_.processes[proc].actions;
  int n = c.next[proc];
  if (n < 1 || n > static_cast<int>(acts.size())) return false;
  const TimedAction& a = acts[n - 1];
  ActionKind k = a.pattern.kind;
  if (kind == ActionKind::kAssign) {
    if (k != ActionKind::kAssign && k != ActionKind::kNullOp) return false;
  } else if (k != kind) {
    return false;
  }
  return a.release <= c.t && c.t < a.deadline;
}

bool Executor::FaultApplies(int entry, int network) const {
  const FaultEntry& f = faults_.entries[entry];
  return f.effect.kind == FaultKind::kMessageLoss &&
         (f.effect.network < 0 || f.effect.network == network);
}

std::optional<Rational> Executor::NextInstant(const PisemConfig& c) const {
  if (c.t >= model_.period) return std::nullopt;
  Rational best = model_.period;
  auto consider = [&](const Rational& x) {
    if (x > c.t && x < best) best = x;
  };
  for (const auto& p : model_.processes) {
    for (const auto& a : p.actions) {
      consider(a.release);
      consider(a.deadline);
    }
  }
  for (std::size_t j = 0; j < c.nets.size(); ++j) {
    const NetworkState& n = c.nets[j];
    if (!n.occupied) continue;
    consider(n.sent_at + model_.networks[j].Wcmtt(n.index));
    consider(n.sent_at + model_.networks[j].BestCase(n.index));
  }
  return best;
}

bool Executor::Enabled(const PisemConfig& c, const Move& m) const {
  switch (m.kind) {
    case MoveKind::kExecuteLocal:
      return InWindow(c, m.target, ActionKind::kAssign);
    case MoveKind::kSendToNetwork:
      return InWindow(c, m.target, ActionKind::kSend);
    case MoveKind::kReceive:
      return InWindow(c, m.target, ActionKind::kReceive);
    case MoveKind::kProcessMessage: {
      if (m.target < 0 || m.target >= static_cast<int>(c.nets.size())) return false;
      const NetworkState& n = c.nets[m.target];
      if (!n.occupied) return false;
      const Network& net = model_.networks[m.target];
      Rational elapsed = c.t - n.sent_at;
      if (!(elapsed < net.Wcmtt(n.index)) || elapsed < net.BestCase(n.index)) return false;
      if (m.fault >= 0) {
        if (m.fault >= static_cast<int>(faults_.entries.size())) return false;
        if (!FaultApplies(m.fault, m.target)) return false;
        if (c.faults_used[m.fault] >= faults_.entries[m.fault].max_per_period) return false;
      }
      return true;
    }
    case MoveKind::kRepeatCycle:
      return c.t == model_.period;
    case MoveKind::kAdvanceTime: {
      auto next = NextInstant(c);
      if (!next || m.to != *next) return false;
      for (std::size_t i = 0; i < model_.processes.size(); ++i) {
        const auto& acts = model_.processes[i].actions;
        int n = c.next[i];
        if (n <= static_cast<int>(acts.size()) && acts[n - 1].deadline <= *next) return false;
      }
      for (std::size_t j = 0; j < c.nets.size(); ++j) {
        const NetworkState& n = c.nets[j];
        if (n.occupied && n.sent_at + model_.networks[j].Wcmtt(n.index) <= *next) return false;
      }
      return true;
    }
  }
  return false;
}

StepResult Executor::Step(const PisemConfig& c, const Move& m) const {
  if (!Enabled(c, m)) {
    throw Error(ErrorCode::kIllegalMove, Describe(c, m) + " is not enabled");
  }
  StepResult r{c, false};
  PisemConfig& s = r.config;
  switch (m.kind) {
    case MoveKind::kExecuteLocal: {
      const BoundPattern& b = bound_[m.target][c.next[m.target] - 1];
      if (b.pattern.kind == ActionKind::kAssign && b.guard.Holds(c.values)) {
        std::int64_t v = b.value.Eval(c.values);
        CheckDomain(layout_, b.target, v);
        s.values[b.target] = v;
      }
      ++s.next[m.target];
      break;
    }
    case MoveKind::kSendToNetwork: {
      const BoundPattern& b = bound_[m.target][c.next[m.target] - 1];
      if (b.guard.Holds(c.values)) {
        NetworkState& n = s.nets[b.pattern.network];
        if (n.occupied) {
          r.blocked = true;
          return r;
        }
        n.occupied = true;
        n.source = m.target;
        n.dest = b.pattern.dest;
        n.var = b.remote;
        n.valid = b.remote_valid;
        n.content = c.values[b.content];
        n.index = b.pattern.message_index;
        n.sent_at = c.t;
      }
      ++s.next[m.target];
      break;
    }
    case MoveKind::kReceive:
      ++s.next[m.target];
      break;
    case MoveKind::kProcessMessage: {
      NetworkState& n = s.nets[m.target];
      if (m.fault < 0) {
        CheckDomain(layout_, n.var, n.content);
        s.values[n.var] = n.content;
        if (n.valid >= 0) {
          CheckDomain(layout_, n.valid, 1);
          s.values[n.valid] = 1;
        }
      } else {
        ++s.faults_used[m.fault];
      }
      n = NetworkState{};
      break;
    }
    case MoveKind::kRepeatCycle: {
      s.t = 0;
      std::fill(s.next.begin(), s.next.end(), 1);
      std::fill(s.faults_used.begin(), s.faults_used.end(), 0);
      for (int k = 0; k < layout_.size(); ++k) {
        if (layout_.Decl(k).reset_each_period) s.values[k] = layout_.Decl(k).init;
      }
      if (!m.env.empty()) {
        std::vector<int> slots = EnvSlots();
        if (m.env.size() != slots.size()) {
          throw Error(ErrorCode::kIllegalMove, "environment valuation has wrong arity");
        }
        for (std::size_t k = 0; k < slots.size(); ++k) {
          CheckDomain(layout_, slots[k], m.env[k]);
          s.values[slots[k]] = m.env[k];
        }
      }
      ++s.period_index;
      break;
    }
    case MoveKind::kAdvanceTime:
      s.t = m.to;
      break;
  }
  return r;
}

std::vector<Move> Executor::EnabledMoves(const PisemConfig& c) const {
  std::vector<Move> out;
  for (std::size_t i = 0; i < model_.processes.size(); ++i) {
    int p = static_cast<int>(i);
    for (MoveKind k : {MoveKind::kExecuteLocal, MoveKind::kSendToNetwork, MoveKind::kReceive}) {
      Move m = Move::Of(k, p);
      if (!Enabled(c, m)) continue;
      if (k == MoveKind::kSendToNetwork) {
        const BoundPattern& b = bound_[p][c.next[p] - 1];
        if (b.guard.Holds(c.values) && c.nets[b.pattern.network].occupied) continue;
      }
      out.push_back(std::move(m));
    }
  }
  for (std::size_t j = 0; j < c.nets.size(); ++j) {
    Move m = Move::Of(MoveKind::kProcessMessage, static_cast<int>(j));
    if (!Enabled(c, m)) continue;
    out.push_back(m);
    for (std::size_t f = 0; f < faults_.entries.size(); ++f) {
      Move fm = Move::Of(MoveKind::kProcessMessage, static_cast<int>(j), static_cast<int>(f));
      if (Enabled(c, fm)) out.push_back(fm);
    }
  }
  if (c.t == model_.period) {
    for (auto& env : EnvChoices()) {
      Move m = Move::Of(MoveKind::kRepeatCycle);
      m.env = std::move(env);
      out.push_back(std::move(m));
    }
  } else if (auto next = NextInstant(c)) {
    Move m = Move::Of(MoveKind::kAdvanceTime);
    m.to = *next;
    if (Enabled(c, m)) out.push_back(m);
  }
  return out;
}

std::string Executor::Valuation(const PisemConfig& c) const {
  std::string s;
  for (int k = 0; k < layout_.size(); ++k) {
    if (!s.empty()) s += ' ';
    s += layout_.Name(k) + "=" + std::to_string(c.values[k]);
  }
  return s;
}

std::string Executor::Describe(const PisemConfig& c, const Move& m) const {
  std::string who;
  std::string what = MoveKindName(m.kind);
  switch (m.kind) {
    case MoveKind::kExecuteLocal:
    case MoveKind::kSendToNetwork:
    case MoveKind::kReceive: {
      if (m.target < 0 || m.target >= static_cast<int>(model_.processes.size())) {
        who = "?";
        break;
      }
      const auto& p = model_.processes[m.target];
      who = p.name;
      int n = c.next[m.target];
      if (n >= 1 && n <= static_cast<int>(p.actions.size())) {
        what += " " + p.actions[n - 1].pattern.name;
      }
      break;
    }
    case MoveKind::kProcessMessage:
      who = m.target >= 0 && m.target < static_cast<int>(model_.networks.size())
                ? model_.networks[m.target].name
                : "?";
      if (m.fault >= 0 && m.fault < static_cast<int>(faults_.entries.size())) {
        what += " [fault " + faults_.entries[m.fault].type + "]";
      }
      break;
    case MoveKind::kRepeatCycle:
      who = "system";
      break;
    case MoveKind::kAdvanceTime:
      who = "clock";
      what += " " + ToString(m.to);
      break;
  }
  return "t=" + ToString(c.t) + " " + who + " " + what;
}

}  // namespace ftsynth
