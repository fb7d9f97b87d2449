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

#include "ftsynth/sdg.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "ftsynth/can.hpp"
#include "ftsynth/error.hpp"

namespace ftsynth {

std::size_t SymbolicGame::ChoiceCount() const {
  std::size_t n = 0;
  for (const auto& p : processes) {
    for (const auto& c : p.choices) n += c.size();
  }
  return n;
}

namespace {

void CheckCanGate(const ImModel& im, const SdgOptions& options) {
  if (options.can_override) return;
  std::vector<char> used(im.networks.size(), 0);
  for (const auto& p : im.processes) {
    for (const auto& a : p.actions) {
      if (!a.inserted) continue;
      for (const auto& c : a.candidates) {
        if (c.pattern.kind == ActionKind::kSend) used.at(c.pattern.network) = 1;
      }
    }
  }
  for (std::size_t j = 0; j < im.networks.size(); ++j) {
    if (!used[j] || !im.networks[j].can) continue;
    CanVerdict v = CheckCanConditions(*im.networks[j].can);
    if (!v.safe) {
      throw Error(ErrorCode::kCanCheckFailed, "network " + im.networks[j].name + ": " + ToString(v));
    }
  }
}

// Position (rational index) of the send in `sender` that writes `var` of `dest`.
std::vector<Rational> PairedSends(const ImModel& im, int sender, int dest, const std::string& var) {
  std::vector<Rational> out;
  for (const auto& a : im.processes[sender].actions) {
    for (const auto& c : a.candidates) {
      if (c.pattern.kind == ActionKind::kSend && c.pattern.dest == dest && c.pattern.remote_var == var) {
        out.push_back(a.index);
        break;
      }
    }
  }
  return out;
}

std::vector<SdgChoice> EnumerateChoices(const ImModel& im, int i, const ImAction& action) {
  const int n = static_cast<int>(im.processes.size());
  std::vector<std::vector<Rational>> domain(n);
  for (int m = 0; m < n; ++m) {
    if (m == i) {
      domain[m] = {action.index};
      continue;
    }
    for (const Rational& q : im.processes[m].IndexSet()) {
      if (action.box[m].Contains(q)) domain[m].push_back(q);
    }
    if (domain[m].empty()) return {};
  }
  struct Keyed {
    SdgChoice choice;
    bool paired;
  };
  std::vector<Keyed> all;
  for (std::size_t c = 0; c < action.candidates.size(); ++c) {
    const ActionPattern& p = action.candidates[c].pattern;
    std::vector<std::vector<Rational>> paired(n);
    if (p.kind == ActionKind::kReceive) {
      for (int m = 0; m < n; ++m) {
        if (m != i) paired[m] = PairedSends(im, m, i, p.var);
      }
    }
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      Keyed k{{static_cast<int>(c), p, {}}, false};
      for (int m = 0; m < n; ++m) k.choice.tuple.push_back(domain[m][pick[m]]);
      for (int m = 0; m < n; ++m) {
        for (const Rational& s : paired[m]) k.paired = k.paired || k.choice.tuple[m] > s;
      }
      all.push_back(std::move(k));
      int m = n - 1;
      while (m >= 0 && ++pick[m] == domain[m].size()) pick[m--] = 0;
      if (m < 0) break;
    }
  }
  // Pattern order, then receives whose paired send already ran, then tuple order.
  std::stable_sort(all.begin(), all.end(), [](const Keyed& a, const Keyed& b) {
    if (a.choice.candidate != b.choice.candidate) return a.choice.candidate < b.choice.candidate;
    return a.paired && !b.paired;
  });
  std::vector<SdgChoice> out;
  for (auto& k : all) out.push_back(std::move(k.choice));
  return out;
}

}  // namespace

SymbolicGame BuildSdg(const ImModel& im, const FaultModel& faults, const std::string& goal,
                      const SdgOptions& options) {
  CheckCanGate(im, options);
  SymbolicGame g;
  g.im = im;
  g.layout = VarLayout::Of(im.processes);
  for (int s = 0; s < g.layout.size(); ++s) {
    if (g.layout.IsEnv(s)) g.env_slots.push_back(s);
  }
  const int n = static_cast<int>(im.processes.size());
  for (int i = 0; i < n; ++i) {
    const ImProcess& ip = im.processes[i];
    SdgProcess sp;
    sp.name = ip.name;
    sp.positions = ip.IndexSet();
    for (const Rational& pos : sp.positions) {
      const ImAction* a = ip.Find(pos);
      if (!a) {
        sp.choices.emplace_back();
        sp.bound.emplace_back();
        continue;
      }
      if (a->candidates.empty()) {
        throw Error(ErrorCode::kEmptyCandidateSet, ip.name + " action " + ToString(pos) + " has no candidates");
      }
      sp.choices.push_back(EnumerateChoices(im, i, *a));
      std::vector<BoundPattern> bound;
      for (const auto& c : a->candidates) bound.push_back(BindPattern(c.pattern, i, g.layout));
      sp.bound.push_back(std::move(bound));
    }
    g.processes.push_back(std::move(sp));
  }
  for (const auto& e : faults.entries) {
    if (e.effect.network >= static_cast<int>(im.networks.size())) {
      throw Error(ErrorCode::kInvalidModel, "fault " + e.type + " names an unknown network");
    }
    g.faults.push_back({e.type, e.max_per_period, e.effect.network});
  }
  g.goal_text = goal;
  g.goal = Expr::Parse(goal).Bind([&](std::string_view name) { return g.layout.Qualified(name); });
  return g;
}

const SdgChoice& ExpandedGame::Choice(const SymbolicGame& sdg, int process, int local_vertex) const {
  const SdgVertexInfo& vi = info.at(process).at(local_vertex);
  return sdg.processes[process].choices[vi.position].at(vi.choice);
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

class Expander {
 public:
  Expander(const SymbolicGame& sdg, const ExpandOptions& opt) : sdg_(sdg), opt_(opt) {
    n_ = static_cast<int>(sdg.processes.size());
    eg_.world_component = n_;
    eg_.game.semantics = opt.semantics;
    eg_.info.resize(n_);
    for (int i = 0; i < n_; ++i) BuildProcessGame(i);
    LocalGame world;
    world.name = "world";
    eg_.game.locals.push_back(std::move(world));
    for (const auto& im : sdg.im.messages) boxes_[{im.network, im.index}] = &im.box;
  }

  ExpandedGame Run() {
    for (const SdgWorld& w : InitialWorlds()) {
      std::vector<int> t(n_ + 1);
      for (int i = 0; i < n_; ++i) t[i] = ctrl_[i][0];
      t[n_] = 2 * WorldId(w);
      int id = Visit(t);
      eg_.game.init.push_back(id);
    }
    while (!queue_.empty()) {
      int id = queue_.front();
      queue_.pop_front();
      Expand(id);
    }
    return std::move(eg_);
  }

 private:
  void BuildProcessGame(int i) {
    const SdgProcess& p = sdg_.processes[i];
    LocalGame g;
    g.name = p.name;
    auto& info = eg_.info[i];
    std::vector<int> ctrl;
    for (std::size_t k = 0; k < p.positions.size(); ++k) {
      ctrl.push_back(g.AddVertex(p.name + "@" + ToString(p.positions[k]), 0));
      info.push_back({SdgVertexInfo::kControl, static_cast<int>(k), -1});
    }
    const int end = static_cast<int>(p.positions.size()) - 1;
    for (int k = 0; k < end; ++k) {
      for (std::size_t c = 0; c < p.choices[k].size(); ++c) {
        int v = g.AddVertex(p.name + "@" + ToString(p.positions[k]) + ":" + DescribeChoice(sdg_, i, p.choices[k][c]), 1);
        info.push_back({SdgVertexInfo::kCommitted, k, static_cast<int>(c)});
        g.AddEdge(ctrl[k], v);
      }
    }
    int done = g.AddVertex(p.name + "@done", 1);
    info.push_back({SdgVertexInfo::kDone, end, -1});
    g.AddEdge(ctrl[end], done);
    ctrl_.push_back(std::move(ctrl));
    done_.push_back(done);
    eg_.game.locals.push_back(std::move(g));
  }

  std::vector<SdgWorld> InitialWorlds() const {
    SdgWorld base;
    base.values = sdg_.layout.Initial();
    base.nets.resize(sdg_.im.networks.size());
    base.fault_count.assign(sdg_.faults.size(), 0);
    std::vector<SdgWorld> out;
    std::vector<std::int64_t> pick;
    for (int s : sdg_.env_slots) pick.push_back(sdg_.layout.Decl(s).min);
    while (true) {
      SdgWorld w = base;
      for (std::size_t k = 0; k < pick.size(); ++k) w.values[sdg_.env_slots[k]] = pick[k];
      out.push_back(std::move(w));
      std::size_t k = pick.size();
      while (k > 0) {
        int slot = sdg_.env_slots[k - 1];
        if (++pick[k - 1] <= sdg_.layout.Decl(slot).max) break;
        pick[k - 1] = sdg_.layout.Decl(slot).min;
        --k;
      }
      if (k == 0) break;
    }
    return out;
  }

  static std::vector<std::int64_t> Key(const SdgWorld& w) {
    std::vector<std::int64_t> k = w.values;
    for (const auto& n : w.nets) {
      k.insert(k.end(), {n.occupied, n.source, n.var, n.valid, n.content, n.index});
    }
    k.insert(k.end(), w.fault_count.begin(), w.fault_count.end());
    return k;
  }

  int WorldId(const SdgWorld& w) {
    auto [it, fresh] = world_ids_.emplace(Key(w), static_cast<int>(eg_.worlds.size()));
    if (fresh) {
      eg_.worlds.push_back(w);
      LocalGame& g = eg_.game.locals[n_];
      std::string id = std::to_string(it->second);
      int a = g.AddVertex("s" + id, 0);
      int b = g.AddVertex("s" + id + "'", 1);
      g.AddEdge(a, b);
    }
    return it->second;
  }

  int Visit(const std::vector<int>& t) {
    int before = eg_.game.size();
    int id = eg_.game.Intern(t);
    if (id == before) {
      if (static_cast<std::size_t>(eg_.game.size()) > opt_.state_cap) {
        throw Error(ErrorCode::kStateCapExceeded,
                    "game expansion exceeded " + std::to_string(opt_.state_cap) + " vertices");
      }
      if (IsGoal(t)) {
        eg_.game.goal.push_back(id);
      } else {
        queue_.push_back(id);
      }
    }
    return id;
  }

  Rational Position(int i, int local) const {
    return sdg_.processes[i].positions[eg_.info[i][local].position];
  }

  bool IsGoal(const std::vector<int>& t) const {
    if (t[n_] % 2 == 0) return false;
    for (int i = 0; i < n_; ++i) {
      if (t[i] != done_[i]) return false;
    }
    const SdgWorld& w = eg_.worlds[t[n_] / 2];
    for (const auto& net : w.nets) {
      if (net.occupied) return false;
    }
    return sdg_.goal.Holds(w.values);
  }

  void Expand(int id) {
    std::vector<int> t(eg_.game.Tuple(id).begin(), eg_.game.Tuple(id).end());
    if (!eg_.game.IsEnv(id)) {
      ExpandControl(t);
    } else {
      ExpandEnv(id, t);
    }
  }

  void ExpandControl(const std::vector<int>& t) {
    std::vector<int> movers;
    for (int i = 0; i <= n_; ++i) {
      if (eg_.game.locals[i].IsControl(t[i])) movers.push_back(i);
    }
    std::vector<int> next = t;
    if (opt_.semantics == Semantics::kInterleaved) {
      for (int i : movers) {
        for (int x : eg_.game.locals[i].edges[t[i]]) {
          next[i] = x;
          Visit(next);
        }
        next[i] = t[i];
      }
      return;
    }
    for (int i : movers) {
      if (eg_.game.locals[i].edges[t[i]].empty()) return;
    }
    std::vector<std::size_t> pick(movers.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < movers.size(); ++k) {
        next[movers[k]] = eg_.game.locals[movers[k]].edges[t[movers[k]]][pick[k]];
      }
      Visit(next);
      std::size_t k = movers.size();
      while (k > 0 && ++pick[k - 1] == eg_.game.locals[movers[k - 1]].edges[t[movers[k - 1]]].size()) {
        pick[--k] = 0;
      }
      if (k == 0) break;
    }
  }

  bool BoxHolds(const PcBox& box, const std::vector<int>& t) const {
    for (int m = 0; m < n_; ++m) {
      if (!box[m].Contains(Position(m, t[m]))) return false;
    }
    return true;
  }

  void AddEdge(int from, std::vector<int> to, const SdgWorld& w) {
    to[n_] = 2 * WorldId(w);
    eg_.game.AddEnvEdge(from, Visit(to));
  }

  void ExpandEnv(int id, const std::vector<int>& t) {
    const SdgWorld w = eg_.worlds[t[n_] / 2];
    bool delivered = false;
    for (std::size_t j = 0; j < w.nets.size(); ++j) {
      const SdgNet& net = w.nets[j];
      if (!net.occupied) continue;
      auto box = boxes_.find({static_cast<int>(j), net.index});
      if (box != boxes_.end() && !BoxHolds(*box->second, t)) continue;
      delivered = true;
      SdgWorld ok = w;
      CheckDomain(sdg_.layout, net.var, net.content);
      ok.values[net.var] = net.content;
      if (net.valid >= 0) ok.values[net.valid] = 1;
      ok.nets[j] = SdgNet{};
      AddEdge(id, t, ok);
      for (std::size_t f = 0; f < sdg_.faults.size(); ++f) {
        const SdgFault& fault = sdg_.faults[f];
        if (fault.network >= 0 && fault.network != static_cast<int>(j)) continue;
        if (w.fault_count[f] >= fault.max_per_period) continue;
        SdgWorld lost = w;
        lost.nets[j] = SdgNet{};
        ++lost.fault_count[f];
        AddEdge(id, t, lost);
      }
    }
    if (delivered) return;
    for (int i = 0; i < n_; ++i) {
      const SdgVertexInfo& vi = eg_.info[i][t[i]];
      if (vi.kind != SdgVertexInfo::kCommitted) continue;
      const SdgChoice& c = sdg_.processes[i].choices[vi.position][vi.choice];
      bool match = true;
      for (int m = 0; m < n_ && match; ++m) {
        if (m != i) match = Position(m, t[m]) == c.tuple[m];
      }
      if (!match) continue;
      const BoundPattern& b = sdg_.processes[i].bound[vi.position][c.candidate];
      SdgWorld after = w;
      if (!Apply(i, b, after)) continue;
      std::vector<int> to = t;
      to[i] = ctrl_[i][vi.position + 1];
      AddEdge(id, to, after);
    }
  }

  // False when the action is a send blocked on a busy network.
  bool Apply(int i, const BoundPattern& b, SdgWorld& w) const {
    switch (b.pattern.kind) {
      case ActionKind::kAssign:
        if (b.guard.Holds(w.values)) {
          std::int64_t v = b.value.Eval(w.values);
          CheckDomain(sdg_.layout, b.target, v);
          w.values[b.target] = v;
        }
        return true;
      case ActionKind::kSend: {
        if (!b.guard.Holds(w.values)) return true;
        SdgNet& net = w.nets.at(b.pattern.network);
        if (net.occupied) return false;
        net.occupied = true;
        net.source = i;
        net.var = b.remote;
        net.valid = b.remote_valid;
        net.content = w.values[b.content];
        net.index = b.pattern.message_index;
        return true;
      }
      case ActionKind::kReceive:
      case ActionKind::kNullOp:
        return true;
    }
    return true;
  }

  const SymbolicGame& sdg_;
  ExpandOptions opt_;
  int n_ = 0;
  ExpandedGame eg_;
  std::vector<std::vector<int>> ctrl_;
  std::vector<int> done_;
  std::map<std::pair<int, int>, const PcBox*> boxes_;
  std::unordered_map<std::vector<std::int64_t>, int, VecHash> world_ids_;
  std::deque<int> queue_;
};

}  // namespace

ExpandedGame ExpandSdg(const SymbolicGame& sdg, const ExpandOptions& options) {
  return Expander(sdg, options).Run();
}

std::vector<SelectedChoice> SelectedChoices(const SymbolicGame& sdg, const ExpandedGame& eg,
                                            const DistributedStrategy& strategy) {
  const int n = static_cast<int>(sdg.processes.size());
  std::vector<std::vector<char>> seen(n);
  for (int i = 0; i < n; ++i) seen[i].assign(eg.game.locals[i].size(), 0);
  for (int v : Reachable(eg.game, &strategy, Restriction::kStrict)) {
    auto t = eg.game.Tuple(v);
    for (int i = 0; i < n; ++i) seen[i][t[i]] = 1;
  }
  std::vector<SelectedChoice> out;
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < eg.game.locals[i].size(); ++v) {
      if (!seen[i][v] || eg.info[i][v].kind != SdgVertexInfo::kCommitted) continue;
      const SdgVertexInfo& vi = eg.info[i][v];
      out.push_back({i, sdg.processes[i].positions[vi.position],
                     &sdg.processes[i].choices[vi.position][vi.choice]});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SelectedChoice& a, const SelectedChoice& b) {
    return a.process != b.process ? a.process < b.process : a.position < b.position;
  });
  return out;
}

std::string DescribeChoice(const SymbolicGame& sdg, int process, const SdgChoice& c) {
  std::string s = c.pattern.name.empty() ? ActionKindName(c.pattern.kind) : c.pattern.name;
  s += " when ";
  bool first = true;
  for (std::size_t m = 0; m < c.tuple.size(); ++m) {
    if (static_cast<int>(m) == process) continue;
    if (!first) s += ",";
    first = false;
    s += sdg.processes[m].name + "=" + ToString(c.tuple[m]);
  }
  if (first) s += "always";
  return s;
}

std::string DescribeWorld(const SymbolicGame& sdg, const SdgWorld& w) {
  std::string s;
  for (int k = 0; k < sdg.layout.size(); ++k) {
    if (!s.empty()) s += " ";
    s += sdg.layout.Name(k) + "=" + std::to_string(w.values[k]);
  }
  for (std::size_t j = 0; j < w.nets.size(); ++j) {
    const SdgNet& n = w.nets[j];
    s += " " + sdg.im.networks[j].name + "=";
    s += n.occupied ? "[" + std::to_string(n.index) + ":" + std::to_string(n.content) + "->" +
                          sdg.layout.Name(n.var) + "]"
                    : "idle";
  }
  for (std::size_t f = 0; f < w.fault_count.size(); ++f) {
    s += " " + sdg.faults[f].name + "#=" + std::to_string(w.fault_count[f]);
  }
  return s;
}

}  // namespace ftsynth
