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

#include "ftsynth/model.hpp"

#include <algorithm>
#include <set>

#include "ftsynth/error.hpp"

namespace ftsynth {

const char* ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kAssign: return "assign";
    case ActionKind::kSend: return "send";
    case ActionKind::kReceive: return "receive";
    case ActionKind::kNullOp: return "nullop";
  }
  return "?";
}

ActionPattern ActionPattern::NullOp(std::string name) {
  ActionPattern p;
  p.kind = ActionKind::kNullOp;
  p.name = std::move(name);
  return p;
}

std::vector<std::string> ActionPattern::Reads() const {
  std::set<std::string> out;
  for (auto& n : guard.Reads()) out.insert(n);
  if (kind == ActionKind::kAssign) {
    for (auto& n : value.Reads()) out.insert(n);
  }
  if (kind == ActionKind::kSend) out.insert(content);
  return {out.begin(), out.end()};
}

std::string ActionPattern::Describe() const {
  std::string pre = guard.IsTrivialTrue() ? "" : "if (" + guard.ToString() + ") ";
  switch (kind) {
    case ActionKind::kAssign:
      return pre + target + " := " + value.ToString();
    case ActionKind::kSend:
      return pre + "send(#" + std::to_string(message_index) + ", net " +
             std::to_string(network + 1) + ", ->" + std::to_string(dest + 1) + "." +
             remote_var + ", " + content + ")";
    case ActionKind::kReceive:
      return pre + "receive(" + var + ")";
    case ActionKind::kNullOp:
      return "null-op";
  }
  return "?";
}

Rational Network::Wcmtt(int index) const {
  auto it = wcmtt.find(index);
  if (it == wcmtt.end()) {
    throw Error(ErrorCode::kInvalidModel,
                "network '" + name + "' has no WCMTT for message " + std::to_string(index));
  }
  return it->second;
}

Rational Network::BestCase(int index) const {
  auto it = best_case.find(index);
  return it == best_case.end() ? Rational(0) : it->second;
}

int PisemModel::ProcessIndex(std::string_view name) const {
  for (std::size_t i = 0; i < processes.size(); ++i) {
    if (processes[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int ImModel::ProcessIndex(std::string_view name) const {
  for (std::size_t i = 0; i < processes.size(); ++i) {
    if (processes[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

// --- VarLayout -------------------------------------------------------------

VarLayout::VarLayout(const std::vector<PisemProcess>& processes) {
  for (std::size_t i = 0; i < processes.size(); ++i) {
    const auto& p = processes[i];
    process_names_.push_back(p.name);
    for (const auto& v : p.variables) Add(static_cast<int>(i), p.name, v, false);
    for (const auto& v : p.env_variables) Add(static_cast<int>(i), p.name, v, true);
  }
}

void VarLayout::Add(int owner, const std::string& pname, const Variable& v, bool env) {
  names_.push_back(pname + "." + v.name);
  decls_.push_back(v);
  owners_.push_back(owner);
  env_.push_back(env);
}

int VarLayout::Local(int owner, std::string_view name) const {
  if (owner < 0 || owner >= static_cast<int>(process_names_.size())) return -1;
  std::string q = process_names_[owner] + "." + std::string(name);
  return Qualified(q);
}

int VarLayout::Qualified(std::string_view qualified) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == qualified) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::int64_t> VarLayout::Initial() const {
  std::vector<std::int64_t> v;
  v.reserve(decls_.size());
  for (const auto& d : decls_) v.push_back(d.init);
  return v;
}

void CheckDomain(const VarLayout& layout, int slot, std::int64_t value) {
  const Variable& d = layout.Decl(slot);
  if (value < d.min || value > d.max) {
    throw Error(ErrorCode::kDomainViolation,
                layout.Name(slot) + " := " + std::to_string(value) + " outside [" +
                    std::to_string(d.min) + ", " + std::to_string(d.max) + "]");
  }
}

BoundPattern BindPattern(const ActionPattern& p, int owner, const VarLayout& layout) {
  auto local = [&](std::string_view n) { return layout.Local(owner, n); };
  auto need = [&](const std::string& n) {
    int s = local(n);
    if (s < 0) {
      throw Error(ErrorCode::kUndeclaredVariable,
                  "action '" + p.name + "' refers to unknown variable '" + n + "'");
    }
    return s;
  };
  BoundPattern b;
  b.pattern = p;
  b.guard = p.guard.Bind(local);
  switch (p.kind) {
    case ActionKind::kAssign:
      b.target = need(p.target);
      if (layout.IsEnv(b.target)) {
        throw Error(ErrorCode::kInvalidModel,
                    "action '" + p.name + "' assigns environment variable '" + p.target + "'");
      }
      b.value = p.value.Bind(local);
      break;
    case ActionKind::kSend:
      b.content = need(p.content);
      b.remote = layout.Local(p.dest, p.remote_var);
      if (b.remote < 0) {
        throw Error(ErrorCode::kUndeclaredVariable,
                    "send '" + p.name + "' targets unknown remote variable '" + p.remote_var + "'");
      }
      b.remote_valid = layout.Local(p.dest, p.remote_var + "_v");
      break;
    case ActionKind::kReceive:
      if (!p.var.empty()) need(p.var);
      break;
    case ActionKind::kNullOp:
      break;
  }
  return b;
}

// --- IM helpers ------------------------------------------------------------

std::vector<Rational> ImProcess::IndexSet() const {
  std::vector<Rational> s;
  s.reserve(actions.size() + 1);
  for (const auto& a : actions) s.push_back(a.index);
  s.push_back(End());
  return s;
}

Rational ImProcess::Next(const Rational& pc) const {
  for (const auto& a : actions) {
    if (a.index > pc) return a.index;
  }
  return End();
}

const ImAction* ImProcess::Find(const Rational& index) const {
  for (const auto& a : actions) {
    if (a.index == index) return &a;
  }
  return nullptr;
}

// --- Validation ------------------------------------------------------------

std::vector<Diagnostic> ValidateModel(const PisemModel& model) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string loc, std::string msg) {
    out.push_back({std::move(loc), std::move(msg)});
  };
  if (model.period <= 0) add("period", "period must be > 0");
  const int n_a = static_cast<int>(model.processes.size());
  const int n_n = static_cast<int>(model.networks.size());

  for (int j = 0; j < n_n; ++j) {
    const auto& net = model.networks[j];
    std::string loc = "network " + std::to_string(j + 1);
    if (net.message_count <= 0) add(loc, "message_count must be positive");
    for (int k = 1; k <= net.message_count; ++k) {
      auto it = net.wcmtt.find(k);
      if (it == net.wcmtt.end()) {
        add(loc, "WCMTT undefined for message " + std::to_string(k));
      } else if (it->second < 0) {
        add(loc, "WCMTT must be >= 0 for message " + std::to_string(k));
      }
    }
    for (const auto& [k, v] : net.wcmtt) {
      if (k < 1 || k > net.message_count) {
        add(loc, "WCMTT defined outside 1..message_count (index " + std::to_string(k) + ")");
      }
    }
  }

  VarLayout layout;
  bool layout_ok = true;
  try {
    layout = VarLayout(model.processes);
  } catch (const Error& e) {
    layout_ok = false;
    add("variables", e.what());
  }

  for (int i = 0; i < n_a; ++i) {
    const auto& proc = model.processes[i];
    std::set<std::string> seen;
    for (const auto* list : {&proc.variables, &proc.env_variables}) {
      for (const auto& v : *list) {
        if (!seen.insert(v.name).second) {
          add(proc.name, "duplicate variable '" + v.name + "'");
        }
        if (v.min > v.max || v.init < v.min || v.init > v.max) {
          add(proc.name + "." + v.name, "initial value outside declared range");
        }
      }
    }
    for (std::size_t k = 0; k < proc.actions.size(); ++k) {
      const auto& a = proc.actions[k];
      std::string loc = proc.name + " action " + std::to_string(k + 1) + " (" + a.pattern.name + ")";
      if (a.release < 0) add(loc, "release must be >= 0");
      if (!(a.release < a.deadline)) add(loc, "release must be < deadline");
      if (!(a.deadline < model.period)) add(loc, "deadline must be < period");
      if (a.pattern.kind == ActionKind::kSend) {
        const auto& p = a.pattern;
        if (p.dest < 0 || p.dest >= n_a) {
          add(loc, "destination process out of range");
          continue;
        }
        if (p.network < 0 || p.network >= n_n) {
          add(loc, "network index out of range");
          continue;
        }
        const auto& net = model.networks[p.network];
        if (p.message_index < 1 || p.message_index > net.message_count) {
          add(loc, "message index out of range");
          continue;
        }
        auto it = net.wcmtt.find(p.message_index);
        if (it != net.wcmtt.end() && !(a.deadline + it->second < model.period)) {
          add(loc, "deadline + WCMTT must be < period (sigma.deadline + T_n(index) < T)");
        }
      }
      if (layout_ok) {
        try {
          BindPattern(a.pattern, i, layout);
        } catch (const Error& e) {
          add(loc, e.what());
        }
      }
    }
  }
  return out;
}

}  // namespace ftsynth
