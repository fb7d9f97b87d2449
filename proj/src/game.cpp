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

#include "ftsynth/game.hpp"

#include <algorithm>
#include <deque>

#include "ftsynth/error.hpp"

namespace ftsynth {

// --- local games and strategies ---------------------------------------------

int LocalGame::AddVertex(std::string label, int owner_player) {
  labels.push_back(std::move(label));
  owner.push_back(static_cast<std::uint8_t>(owner_player));
  edges.emplace_back();
  return size() - 1;
}

void LocalGame::AddEdge(int from, int to) {
  auto& e = edges.at(from);
  if (to < 0 || to >= size()) throw Error(ErrorCode::kInvalidModel, "edge to unknown vertex");
  if (std::find(e.begin(), e.end(), to) == e.end()) e.push_back(to);
}

int LocalGame::Find(std::string_view label) const {
  for (int v = 0; v < size(); ++v) {
    if (labels[v] == label) return v;
  }
  return -1;
}

bool LocalGame::IsBipartite() const {
  for (int v = 0; v < size(); ++v) {
    for (int w : edges[v]) {
      if (owner[v] == owner[w]) return false;
    }
  }
  return true;
}

int DistributedStrategy::Get(int game, int vertex) const {
  if (game < 0 || game >= static_cast<int>(choice.size())) return -1;
  auto it = choice[game].find(vertex);
  return it == choice[game].end() ? -1 : it->second;
}

// --- distributed games --------------------------------------------------------

std::size_t DistributedGame::TupleHash::operator()(const std::vector<int>& t) const {
  std::size_t h = 1469598103934665603ull;
  for (int x : t) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
  return h;
}

int DistributedGame::Intern(std::span<const int> tuple) {
  if (static_cast<int>(tuple.size()) != components()) {
    throw Error(ErrorCode::kInvalidModel, "vertex arity does not match the number of local games");
  }
  for (int i = 0; i < components(); ++i) {
    if (tuple[i] < 0 || tuple[i] >= locals[i].size()) {
      throw Error(ErrorCode::kInvalidModel, "vertex component out of range");
    }
  }
  std::vector<int> key(tuple.begin(), tuple.end());
  auto [it, fresh] = index_.emplace(std::move(key), size());
  if (fresh) {
    tuples_.insert(tuples_.end(), tuple.begin(), tuple.end());
    env_succ_.emplace_back();
  }
  return it->second;
}

int DistributedGame::Find(std::span<const int> tuple) const {
  auto it = index_.find(std::vector<int>(tuple.begin(), tuple.end()));
  return it == index_.end() ? -1 : it->second;
}

std::string DistributedGame::Label(int id) const {
  std::string s = "(";
  auto t = Tuple(id);
  for (int i = 0; i < components(); ++i) {
    if (i) s += ", ";
    s += locals[i].labels[t[i]];
  }
  return s + ")";
}

void DistributedGame::InternFullProduct() {
  std::vector<int> t(components(), 0);
  if (components() == 0) return;
  for (const auto& g : locals) {
    if (g.size() == 0) return;
  }
  while (true) {
    Intern(t);
    int i = components() - 1;
    while (i >= 0 && ++t[i] == locals[i].size()) t[i--] = 0;
    if (i < 0) break;
  }
  full_product_ = true;
}

bool DistributedGame::IsEnv(int id) const {
  auto t = Tuple(id);
  for (int i = 0; i < components(); ++i) {
    if (locals[i].owner[t[i]] == 0) return false;
  }
  return true;
}

void DistributedGame::AddEnvEdge(int from, int to) {
  if (!IsEnv(from)) {
    throw Error(ErrorCode::kInvalidModel, "environment edge from control vertex " + Label(from));
  }
  if (from == to) throw Error(ErrorCode::kInvalidModel, "environment self-loop at " + Label(from));
  auto a = Tuple(from);
  auto b = Tuple(to);
  for (int i = 0; i < components(); ++i) {
    if (a[i] != b[i] && locals[i].owner[b[i]] != 0) {
      throw Error(ErrorCode::kInvalidModel, "environment edge " + Label(from) + " -> " + Label(to) +
                                                " moves a component into an environment position");
    }
  }
  auto& e = env_succ_[from];
  if (std::find(e.begin(), e.end(), to) == e.end()) e.push_back(to);
}

const std::vector<int>& DistributedGame::EnvSuccessors(int id) const { return env_succ_[id]; }

std::vector<DistributedGame::ControlMove> DistributedGame::ControlMoves(
    int id, const DistributedStrategy* strategy, Restriction mode) const {
  std::vector<ControlMove> out;
  auto t = Tuple(id);
  std::vector<int> movers;
  std::vector<std::vector<int>> options;
  for (int i = 0; i < components(); ++i) {
    if (locals[i].owner[t[i]] != 0) continue;
    std::vector<int> opt;
    int sel = (strategy && mode != Restriction::kNone) ? strategy->Get(i, t[i]) : -1;
    if (sel >= 0) {
      opt.push_back(sel);
    } else if (mode != Restriction::kStrict || !strategy) {
      opt = locals[i].edges[t[i]];
    }
    movers.push_back(i);
    options.push_back(std::move(opt));
  }
  if (movers.empty()) return out;
  std::vector<int> next(t.begin(), t.end());

  if (semantics == Semantics::kInterleaved) {
    for (std::size_t k = 0; k < movers.size(); ++k) {
      for (int x : options[k]) {
        next[movers[k]] = x;
        int target = Find(next);
        if (target >= 0) out.push_back({target, {{movers[k], x}}});
      }
      next[movers[k]] = t[movers[k]];
    }
    return out;
  }

  for (const auto& o : options) {
    if (o.empty()) return out;
  }
  std::vector<std::size_t> pick(movers.size(), 0);
  while (true) {
    ControlMove m;
    for (std::size_t k = 0; k < movers.size(); ++k) {
      next[movers[k]] = options[k][pick[k]];
      m.moves.push_back({movers[k], options[k][pick[k]]});
    }
    m.target = Find(next);
    if (m.target >= 0) out.push_back(std::move(m));
    std::size_t k = movers.size();
    while (k > 0 && ++pick[k - 1] == options[k - 1].size()) pick[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

std::vector<char> DistributedGame::GoalMask() const {
  std::vector<char> mask(size(), 0);
  for (int g : goal) mask.at(g) = 1;
  return mask;
}

std::size_t DistributedGame::LocalControlEdgeCount() const {
  std::size_t n = 0;
  for (const auto& g : locals) {
    for (int v = 0; v < g.size(); ++v) {
      if (g.owner[v] == 0) n += g.edges[v].size();
    }
  }
  return n;
}

// --- arenas and attractors ----------------------------------------------------

Arena BuildArena(const DistributedGame& game, const DistributedStrategy* strategy,
                 Restriction mode, std::span<const int> vertices) {
  Arena a;
  std::vector<int> local_of;
  if (vertices.empty()) {
    a.ids.resize(game.size());
    for (int v = 0; v < game.size(); ++v) a.ids[v] = v;
  } else {
    a.ids.assign(vertices.begin(), vertices.end());
    local_of.assign(game.size(), -1);
    for (int k = 0; k < static_cast<int>(a.ids.size()); ++k) local_of[a.ids[k]] = k;
  }
  auto map = [&](int g) { return local_of.empty() ? g : local_of[g]; };
  a.owner.resize(a.ids.size());
  a.succ.resize(a.ids.size());
  bool adversarial = game.semantics == Semantics::kInterleaved && mode == Restriction::kStrict;
  for (std::size_t k = 0; k < a.ids.size(); ++k) {
    int v = a.ids[k];
    std::vector<int>& s = a.succ[k];
    if (game.IsEnv(v)) {
      a.owner[k] = 1;
      for (int w : game.EnvSuccessors(v)) {
        if (map(w) >= 0) s.push_back(map(w));
      }
    } else {
      a.owner[k] = adversarial ? 1 : 0;
      for (const auto& m : game.ControlMoves(v, strategy, mode)) {
        if (map(m.target) >= 0) s.push_back(map(m.target));
      }
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return a;
}

std::size_t AttractorResult::Count() const {
  return static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
}

AttractorResult Attractor(const Arena& arena, int player, std::span<const int> target) {
  const int n = arena.size();
  AttractorResult r;
  r.in.assign(n, 0);
  r.chosen.assign(n, -1);
  std::vector<std::vector<int>> pred(n);
  std::vector<int> remaining(n);
  for (int v = 0; v < n; ++v) {
    remaining[v] = static_cast<int>(arena.succ[v].size());
    for (int w : arena.succ[v]) pred[w].push_back(v);
  }
  std::deque<int> queue;
  for (int t : target) {
    if (t >= 0 && t < n && !r.in[t]) {
      r.in[t] = 1;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (int v : pred[w]) {
      if (r.in[v]) continue;
      if (arena.owner[v] == player) {
        r.in[v] = 1;
        r.chosen[v] = w;
        queue.push_back(v);
      } else if (--remaining[v] == 0) {
        r.in[v] = 1;
        queue.push_back(v);
      }
    }
  }
  return r;
}

AttractorResult Attractor(const LocalGame& game, int player, std::span<const int> target) {
  Arena a;
  a.owner = game.owner;
  for (const auto& e : game.edges) {
    std::vector<int> s = e;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    a.succ.push_back(std::move(s));
  }
  return Attractor(a, player, target);
}

// --- reachability and verification --------------------------------------------

std::vector<int> Reachable(const DistributedGame& game, const DistributedStrategy* strategy,
                           Restriction mode) {
  std::vector<char> seen(game.size(), 0);
  std::vector<char> goal = game.GoalMask();
  std::vector<int> order;
  std::deque<int> queue;
  for (int v : game.init) {
    if (!seen[v]) {
      seen[v] = 1;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    order.push_back(v);
    if (goal[v]) continue;
    auto visit = [&](int w) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    };
    if (game.IsEnv(v)) {
      for (int w : game.EnvSuccessors(v)) visit(w);
    } else {
      for (const auto& m : game.ControlMoves(v, strategy, mode)) visit(m.target);
    }
  }
  return order;
}

namespace {

bool WinsFromInit(const DistributedGame& game, const DistributedStrategy& strategy,
                  const std::vector<int>& reach) {
  Arena a = BuildArena(game, &strategy, Restriction::kStrict, reach);
  std::vector<int> local_of(game.size(), -1);
  for (int k = 0; k < a.size(); ++k) local_of[a.ids[k]] = k;
  std::vector<int> targets;
  for (int g : game.goal) {
    if (local_of[g] >= 0) targets.push_back(local_of[g]);
  }
  AttractorResult attr = Attractor(a, 0, targets);
  for (int v : game.init) {
    if (!attr.Contains(local_of[v])) return false;
  }
  return true;
}

}  // namespace

bool VerifyStrategy(const DistributedGame& game, const DistributedStrategy& strategy) {
  std::vector<int> reach = Reachable(game, &strategy, Restriction::kStrict);
  std::vector<char> goal = game.GoalMask();
  for (int v : reach) {
    if (goal[v] || game.IsEnv(v)) continue;
    auto t = game.Tuple(v);
    for (int i = 0; i < game.components(); ++i) {
      const LocalGame& g = game.locals[i];
      if (g.owner[t[i]] == 0 && !g.edges[t[i]].empty() && strategy.Get(i, t[i]) < 0) {
        throw Error(ErrorCode::kPartialStrategy,
                    "no choice for " + g.name + ":" + g.labels[t[i]] + " reachable at " +
                        game.Label(v));
      }
    }
  }
  return WinsFromInit(game, strategy, reach);
}

DistributedGame RestrictToReachable(const DistributedGame& game) {
  std::vector<int> reach = Reachable(game, nullptr, Restriction::kNone);
  DistributedGame out;
  out.locals = game.locals;
  out.semantics = game.semantics;
  std::vector<int> map(game.size(), -1);
  for (int v : reach) map[v] = out.Intern(game.Tuple(v));
  for (int v : reach) {
    if (!game.IsEnv(v)) continue;
    for (int w : game.EnvSuccessors(v)) {
      if (map[w] >= 0) out.AddEnvEdge(map[v], map[w]);
    }
  }
  for (int v : game.init) out.init.push_back(map[v]);
  for (int g : game.goal) {
    if (map[g] >= 0) out.goal.push_back(map[g]);
  }
  return out;
}

std::optional<DistributedStrategy> EnumerateStrategies(const DistributedGame& game,
                                                       std::uint64_t cap) {
  struct Slot {
    int game;
    int vertex;
    const std::vector<int>* edges;
  };
  std::vector<Slot> slots;
  std::uint64_t total = 1;
  for (int i = 0; i < game.components(); ++i) {
    const LocalGame& g = game.locals[i];
    for (int v = 0; v < g.size(); ++v) {
      if (g.owner[v] != 0 || g.edges[v].empty()) continue;
      slots.push_back({i, v, &g.edges[v]});
      total *= g.edges[v].size();
      if (total > cap) {
        throw Error(ErrorCode::kStateCapExceeded,
                    "more than " + std::to_string(cap) + " positional strategies to enumerate");
      }
    }
  }
  std::vector<std::size_t> pick(slots.size(), 0);
  while (true) {
    DistributedStrategy s(game.components());
    for (std::size_t k = 0; k < slots.size(); ++k) {
      s.Set(slots[k].game, slots[k].vertex, (*slots[k].edges)[pick[k]]);
    }
    if (WinsFromInit(game, s, Reachable(game, &s, Restriction::kStrict))) return s;
    std::size_t k = slots.size();
    while (k > 0 && ++pick[k - 1] == slots[k - 1].edges->size()) pick[--k] = 0;
    if (k == 0) break;
  }
  return std::nullopt;
}

}  // namespace ftsynth
