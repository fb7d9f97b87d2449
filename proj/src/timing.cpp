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

#include "ftsynth/timing.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ftsynth/error.hpp"

namespace ftsynth {

ImModel SynthesizeIm(const PisemModel& original, const std::vector<FtSelection>& selections) {
  const int n = static_cast<int>(original.processes.size());
  std::vector<const FtSelection*> sorted;
  for (const auto& s : selections) {
    if (s.process < 0 || s.process >= n) {
      throw Error(ErrorCode::kInvalidModel, "selection refers to an unknown process");
    }
    if (static_cast<int>(s.tuple.size()) != n) {
      throw Error(ErrorCode::kInvalidModel, "selection tuple has the wrong arity");
    }
    sorted.push_back(&s);
  }
  std::sort(sorted.begin(), sorted.end(), [](const FtSelection* a, const FtSelection* b) {
    return a->process != b->process ? a->process < b->process : a->index < b->index;
  });
  TemplatePool pool;
  std::map<std::pair<int, int>, std::vector<Rational>> slots;
  for (const FtSelection* s : sorted) {
    int c = static_cast<int>(Floor(s->index).numerator());
    pool.push_back({s->process, c, c + 1, {s->chosen}});
    slots[{s->process, c}].push_back(s->index);
  }
  for (const auto& [key, idx] : slots) {
    if (idx != SlotIndices(key.second, static_cast<int>(idx.size()))) {
      throw Error(ErrorCode::kNotConsecutive, original.processes[key.first].name + ": slot indices after action " +
                                                  std::to_string(key.second) + " are not evenly spaced");
    }
  }
  ImModel im = InsertFtSlots(AbstractTiming(original), pool);
  for (const FtSelection* s : sorted) {
    ImProcess& p = im.processes[s->process];
    auto it = std::find_if(p.actions.begin(), p.actions.end(),
                           [&](const ImAction& a) { return a.index == s->index; });
    for (int m = 0; m < n; ++m) {
      if (m == s->process) continue;
      const ImProcess& other = im.processes[m];
      const Rational& t = s->tuple[m];
      const auto set = other.IndexSet();
      if (std::find(set.begin(), set.end(), t) == set.end() || !it->box[m].Contains(t)) {
        throw Error(ErrorCode::kInvalidModel, p.name + "@" + ToString(s->index) + ": " + other.name + "=" +
                                                  ToString(t) + " is outside the slot's box");
      }
      it->box[m] = {t, t == other.End() ? other.Beyond() : other.Next(t)};
    }
  }
  return im;
}

int TimingSystem::Find(const std::string& name) const {
  for (std::size_t k = 0; k < variables.size(); ++k) {
    if (variables[k].name == name) return static_cast<int>(k);
  }
  return -1;
}

std::string TimingSystem::Format(const TimingConstraint& c) const {
  std::string op = c.strict ? " < " : " <= ";
  std::string rev = c.strict ? " > " : " >= ";
  std::string head = std::string(1, c.tag) + (c.item ? std::to_string(c.item) : std::string("0")) + ": ";
  if (c.lhs >= 0 && c.rhs >= 0) {
    return head + variables[c.lhs].name + " - " + variables[c.rhs].name + op + ToString(c.bound);
  }
  if (c.lhs >= 0) return head + variables[c.lhs].name + op + ToString(c.bound);
  if (c.rhs >= 0) return head + variables[c.rhs].name + rev + ToString(-c.bound);
  return head + "0" + op + ToString(c.bound);
}

std::string TimingSystem::Dump() const {
  std::string out;
  for (const auto& c : constraints) out += Format(c) + "\n";
  return out;
}

namespace {

std::string VarName(TimingVariable::Role role, const std::string& process, const Rational& index) {
  return std::string(role == TimingVariable::kRelease ? "alpha(" : "beta(") + process + "@" +
         ToString(index) + ")";
}

// var + offset; var -1 is a PISEM constant.
struct Term {
  int var = -1;
  Rational c;
};

struct Endpoints {
  Term alpha;
  Term beta;
};

class Builder {
 public:
  explicit Builder(TimingSystem& sys) : sys_(sys) {}

  int Var(TimingVariable::Role role, int process, const std::string& pname, const Rational& index) {
    sys_.variables.push_back({role, process, index, VarName(role, pname, index)});
    return static_cast<int>(sys_.variables.size()) - 1;
  }

  // a + offset (<|<=) b
  void Less(const Term& a, const Rational& offset, const Term& b, bool strict, char tag, int item) {
    sys_.constraints.push_back({a.var, b.var, b.c - a.c - offset, strict, tag, item});
  }
  void Equal(const Term& a, const Term& b, char tag, int item) {
    Less(a, Rational(0), b, false, tag, item);
    Less(b, Rational(0), a, false, tag, item);
  }

 private:
  TimingSystem& sys_;
};

Rational ActionWcet(const WcetTable& t, const ActionPattern& p, const std::optional<Rational>& own) {
  auto it = t.actions.find(p.name);
  if (it != t.actions.end()) return it->second;
  if (own) return *own;
  throw Error(ErrorCode::kMissingWcet, "no WCET for '" + p.name + "'");
}

Rational MessageWcmtt(const WcetTable& t, const ImModel& im, const ActionPattern& p) {
  auto it = t.messages.find({p.network, p.message_index});
  if (it != t.messages.end()) return it->second;
  return im.networks.at(p.network).Wcmtt(p.message_index);
}

Term Const(const Rational& c) { return {-1, c}; }
Term Of(int var) { return {var, Rational(0)}; }

}  // namespace

TimingSystem GenerateLtm(const PisemModel& original, const ImModel& synthesized, const WcetTable& wcet) {
  TimingSystem sys;
  sys.period = original.period;
  Builder b(sys);
  const int n = static_cast<int>(synthesized.processes.size());
  if (n != static_cast<int>(original.processes.size())) {
    throw Error(ErrorCode::kInvalidModel, "synthesized model does not match the original");
  }

  // Endpoints of every action, keyed by (process, index).
  std::vector<std::map<Rational, Endpoints>> ends(n);
  std::vector<std::set<Rational>> modified(n);  // hosts with an adjacent slot
  for (int i = 0; i < n; ++i) {
    const ImProcess& p = synthesized.processes[i];
    const auto& timed = original.processes[i].actions;
    for (const auto& a : p.actions) {
      if (a.inserted) continue;
      const TimedAction& t = timed.at(static_cast<std::size_t>(a.index.numerator()) - 1);
      ends[i][a.index] = {Const(t.release), Const(t.deadline)};
    }
    std::map<Rational, std::vector<const ImAction*>> groups;
    for (const auto& a : p.actions) {
      if (a.inserted) groups[Floor(a.index)].push_back(&a);
    }
    for (const auto& [host, slot] : groups) {
      modified[i].insert(host);
      const TimedAction& h = timed.at(static_cast<std::size_t>(host.numerator()) - 1);
      const TimedAction& next = timed.at(static_cast<std::size_t>(host.numerator()));
      std::vector<Endpoints> fe;
      for (const ImAction* f : slot) {
        int al = b.Var(TimingVariable::kRelease, i, p.name, f->index);
        int be = b.Var(TimingVariable::kDeadline, i, p.name, f->index);
        fe.push_back({Of(al), Of(be)});
        ends[i][f->index] = fe.back();
      }
      if (next.release > h.deadline) {
        // Gap between the host and its successor.
        b.Less(Const(h.deadline), Rational(0), fe.front().alpha, false, 'A', 1);
        b.Less(fe.back().beta, Rational(0), Const(next.release), false, 'A', 3);
      } else {
        int ha = b.Var(TimingVariable::kRelease, i, p.name, host);
        int hb = b.Var(TimingVariable::kDeadline, i, p.name, host);
        ends[i][host] = {Of(ha), Of(hb)};
        b.Equal(fe.front().alpha, Of(hb), 'A', 1);
        b.Equal(Of(ha), Const(h.release), 'A', 2);
        b.Equal(fe.back().beta, Const(h.deadline), 'A', 3);
        b.Less(Of(ha), ActionWcet(wcet, h.pattern, h.wcet), Of(hb), true, 'A', 5);
      }
      for (std::size_t q = 0; q < slot.size(); ++q) {
        const Candidate& cand = slot[q]->candidates.at(0);
        if (q > 0) b.Less(fe[q - 1].beta, Rational(0), fe[q].alpha, false, 'A', 1);
        b.Less(fe[q].alpha, ActionWcet(wcet, cand.pattern, cand.wcet), fe[q].beta, true, 'A', 4);
      }
    }
  }
  // Every variable lives inside the period; inserted sends also deliver in it.
  for (std::size_t v = 0; v < sys.variables.size(); ++v) {
    b.Less(Const(Rational(0)), Rational(0), Of(static_cast<int>(v)), false, 'A', 0);
    b.Less(Of(static_cast<int>(v)), Rational(0), Const(sys.period), true, 'A', 0);
  }
  for (int i = 0; i < n; ++i) {
    for (const auto& f : synthesized.processes[i].actions) {
      const ActionPattern& fp = f.candidates.at(0).pattern;
      if (f.inserted && fp.kind == ActionKind::kSend) {
        b.Less(ends[i][f.index].beta, MessageWcmtt(wcet, synthesized, fp), Const(sys.period), true, 'A', 0);
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (const auto& f : synthesized.processes[i].actions) {
      if (!f.inserted) continue;
      const ActionPattern& fp = f.candidates.at(0).pattern;
      const Endpoints& fe = ends[i][f.index];
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const Rational& at = f.box[j].low;
        for (const auto& d : synthesized.processes[j].actions) {
          const Endpoints& de = ends[j][d.index];
          int base = (!d.inserted && !modified[j].count(d.index)) ? 6 : 9;
          if (d.index < at) {
            b.Less(de.beta, Rational(0), fe.alpha, true, 'B', base);
          } else {
            b.Less(fe.beta, Rational(0), de.alpha, true, 'B', base + 1);
            if (fp.kind == ActionKind::kSend) {
              b.Less(fe.beta, MessageWcmtt(wcet, synthesized, fp), de.alpha, true, 'B', base + 2);
            }
          }
        }
      }
    }
  }

  for (int i = 0; i < n; ++i) {
    for (const auto& f : synthesized.processes[i].actions) {
      if (!f.inserted) continue;
      std::vector<std::string> reads = f.candidates.at(0).pattern.Reads();
      auto reads_var = [&](const std::string& v) {
        return std::find(reads.begin(), reads.end(), v) != reads.end() ||
               std::find(reads.begin(), reads.end(), v + "_v") != reads.end();
      };
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        for (const auto& d : synthesized.processes[j].actions) {
          const ActionPattern& dp = d.candidates.at(0).pattern;
          if (dp.kind != ActionKind::kSend || dp.dest != i || !reads_var(dp.remote_var)) continue;
          if (!(d.index < f.box[j].low)) continue;
          b.Less(ends[j][d.index].beta, MessageWcmtt(wcet, synthesized, dp), ends[i][f.index].alpha, true, 'C',
                 12);
        }
      }
    }
  }
  return sys;
}

namespace {

// a - k*eps
struct Weight {
  Rational a;
  std::int64_t k = 0;
  bool operator<(const Weight& o) const { return a != o.a ? a < o.a : k > o.k; }
};

}  // namespace

LtmSolution SolveLtm(const TimingSystem& system) {
  LtmSolution sol;
  const int nv = static_cast<int>(system.variables.size()) + 1;  // node 0 is the constant 0
  auto node = [](int var) { return var + 1; };
  for (std::size_t c = 0; c < system.constraints.size(); ++c) {
    const auto& k = system.constraints[c];
    if (k.lhs == k.rhs && (k.bound < Rational(0) || (k.strict && k.bound == Rational(0)))) {
      sol.blocking = {static_cast<int>(c)};
      return sol;
    }
  }
  // Edges rhs -> lhs. A variable the constant cannot reach is unbounded
  // above; it gets an artificial bound larger than any real path, which can
  // never close a negative cycle and is not part of the system.
  struct Edge {
    int from;
    int to;
    Rational bound;
    bool strict;
    int constraint;  // -1 for an artificial bound
  };
  std::vector<Edge> edges;
  Rational span(1);
  for (std::size_t c = 0; c < system.constraints.size(); ++c) {
    const auto& k = system.constraints[c];
    if (node(k.lhs) == node(k.rhs)) continue;
    edges.push_back({node(k.rhs), node(k.lhs), k.bound, k.strict, static_cast<int>(c)});
    span += k.bound < Rational(0) ? -k.bound : k.bound;
  }
  std::vector<bool> reached(nv, false);
  reached[0] = true;
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& e : edges) {
      if (reached[e.from] && !reached[e.to]) reached[e.to] = grew = true;
    }
  }
  for (int v = 1; v < nv; ++v) {
    if (!reached[v]) edges.push_back({0, v, Rational(3) * span, false, -1});
  }

  std::vector<std::optional<Weight>> dist(nv);
  std::vector<int> parent(nv, -1);  // index into edges
  dist[0] = Weight{Rational(0), 0};
  int last = -1;
  for (int round = 0; round < nv; ++round) {
    last = -1;
    for (std::size_t x = 0; x < edges.size(); ++x) {
      const Edge& e = edges[x];
      if (!dist[e.from]) continue;
      Weight cand{dist[e.from]->a + e.bound, dist[e.from]->k + (e.strict ? 1 : 0)};
      if (!dist[e.to] || cand < *dist[e.to]) {
        dist[e.to] = cand;
        parent[e.to] = static_cast<int>(x);
        last = e.to;
      }
    }
    if (last < 0) break;
  }
  if (last >= 0) {
    int v = last;
    for (int s = 0; s < nv; ++s) v = edges[parent[v]].from;
    int u = v;
    do {
      sol.blocking.push_back(edges[parent[u]].constraint);
      u = edges[parent[u]].from;
    } while (u != v);
    std::reverse(sol.blocking.begin(), sol.blocking.end());
    return sol;
  }
  Rational eps(1);
  for (const auto& k : system.constraints) {
    const Weight& x = *dist[node(k.lhs)];
    const Weight& y = *dist[node(k.rhs)];
    Rational a = x.a - y.a - k.bound;
    std::int64_t d = x.k - y.k;
    if (a < Rational(0) && d < 0) eps = std::min(eps, a / Rational(d));
  }
  eps /= 2;
  for (int v = 1; v < nv; ++v) sol.values.push_back(dist[v]->a - Rational(dist[v]->k) * eps);
  sol.feasible = true;
  return sol;
}

int FirstViolated(const TimingSystem& system, const std::vector<Rational>& values) {
  auto val = [&](int var) { return var < 0 ? Rational(0) : values.at(var); };
  for (std::size_t c = 0; c < system.constraints.size(); ++c) {
    const auto& k = system.constraints[c];
    Rational lhs = val(k.lhs) - val(k.rhs);
    if (k.strict ? !(lhs < k.bound) : !(lhs <= k.bound)) return static_cast<int>(c);
  }
  return -1;
}

std::string DumpAssignment(const TimingSystem& system, const std::vector<Rational>& values) {
  std::string out;
  for (std::size_t v = 0; v < system.variables.size(); ++v) {
    out += system.variables[v].name + " = " + ToString(values.at(v)) + "\n";
  }
  return out;
}

PisemModel ApplyTiming(const PisemModel& original, const ImModel& synthesized, const TimingSystem& system,
                       const std::vector<Rational>& values) {
  PisemModel out;
  out.period = original.period;
  out.networks = synthesized.networks;
  for (std::size_t i = 0; i < synthesized.processes.size(); ++i) {
    const ImProcess& ip = synthesized.processes[i];
    PisemProcess p;
    p.name = ip.name;
    p.variables = ip.variables;
    p.env_variables = ip.env_variables;
    for (const auto& a : ip.actions) {
      TimedAction t;
      if (a.inserted) {
        t.pattern = a.candidates.at(0).pattern;
        t.wcet = a.candidates.at(0).wcet;
      } else {
        t = original.processes[i].actions.at(static_cast<std::size_t>(a.index.numerator()) - 1);
      }
      int al = system.Find(VarName(TimingVariable::kRelease, ip.name, a.index));
      int be = system.Find(VarName(TimingVariable::kDeadline, ip.name, a.index));
      if (a.inserted && (al < 0 || be < 0)) {
        throw Error(ErrorCode::kInvalidModel, ip.name + "@" + ToString(a.index) + " has no timing variables");
      }
      if (al >= 0) t.release = values.at(al);
      if (be >= 0) t.deadline = values.at(be);
      p.actions.push_back(std::move(t));
    }
    out.processes.push_back(std::move(p));
  }
  auto diags = ValidateModel(out);
  if (!diags.empty()) {
    throw Error(ErrorCode::kInvalidModel, diags.front().location + ": " + diags.front().message);
  }
  CheckRefinement(out, synthesized);
  return out;
}

void CheckRefinement(const PisemModel& timed, const ImModel& synthesized) {
  PcBoundsMaps pc = GeneratePreconditionPc(timed);
  const int n = static_cast<int>(synthesized.processes.size());
  std::vector<std::vector<Rational>> sets(n);
  for (int m = 0; m < n; ++m) sets[m] = synthesized.processes[m].IndexSet();
  auto rank = [&](int m, const Rational& x) {
    return 1 + static_cast<int>(std::lower_bound(sets[m].begin(), sets[m].end(), x) - sets[m].begin());
  };
  for (int i = 0; i < n; ++i) {
    const ImProcess& ip = synthesized.processes[i];
    for (std::size_t k = 0; k < ip.actions.size(); ++k) {
      const ImAction& a = ip.actions[k];
      const PcBounds& got = pc.actions.at(i).at(k);
      for (int m = 0; m < n; ++m) {
        int lo = rank(m, a.box[m].low);
        int up = rank(m, a.box[m].up);
        if (got.low[m] < lo || got.up[m] > up) {
          throw Error(ErrorCode::kRefinementViolation,
                      ip.name + "@" + ToString(a.index) + " (" + a.candidates.at(0).pattern.name + ") in " +
                          synthesized.processes[m].name + ": timed box [" + std::to_string(got.low[m]) + "," +
                          std::to_string(got.up[m]) + ") exceeds [" + std::to_string(lo) + "," +
                          std::to_string(up) + ")");
        }
      }
    }
  }
}

}  // namespace ftsynth
