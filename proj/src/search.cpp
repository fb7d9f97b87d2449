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

#include <map>
#include <set>
#include <tuple>

#include "ftsynth/error.hpp"
#include "ftsynth/model_io.hpp"
#include "ftsynth/solver.hpp"

namespace ftsynth {

const char* SolveStatusName(SolveStatus s) {
  switch (s) {
    case SolveStatus::kWon: return "won";
    case SolveStatus::kNoStrategy: return "no-strategy";
    case SolveStatus::kUnknown: return "unknown";
  }
  return "?";
}

const char* SolverKindName(SolverKind k) {
  switch (k) {
    case SolverKind::kSearch: return "search";
    case SolverKind::kSatSimultaneous: return "sat-simultaneous";
    case SolverKind::kSatInterleaved: return "sat-interleaved";
  }
  return "?";
}

SolverKind ParseSolverKind(std::string_view name) {
  if (name == "search") return SolverKind::kSearch;
  if (name == "sat-simultaneous" || name == "sat") return SolverKind::kSatSimultaneous;
  if (name == "sat-interleaved") return SolverKind::kSatInterleaved;
  throw Error(ErrorCode::kUsage, "unknown solver '" + std::string(name) +
                                     "' (expected search, sat-simultaneous or sat-interleaved)");
}

namespace {

class Search {
 public:
  Search(const DistributedGame& game, const SearchOptions& opt)
      : game_(game), opt_(opt), strategy_(game.components()) {
    // Single-edge control vertices have nothing to decide.
    for (int i = 0; i < game.components(); ++i) {
      const LocalGame& g = game.locals[i];
      for (int v = 0; v < g.size(); ++v) {
        if (g.IsControl(v) && g.edges[v].size() == 1) strategy_.Set(i, v, g.edges[v][0]);
      }
    }
  }

  SearchResult Run() {
    SearchResult r;
    Outcome o = Node(0);
    r.nodes = nodes_;
    if (o == Outcome::kFound) {
      r.status = SolveStatus::kWon;
      r.strategy = found_;
    } else {
      r.status = cut_ ? SolveStatus::kUnknown : SolveStatus::kNoStrategy;
    }
    return r;
  }

 private:
  enum class Outcome { kFound, kFailed, kBudget };

  Outcome Node(int depth) {
    if (opt_.node_budget && nodes_ >= opt_.node_budget) {
      cut_ = true;
      return Outcome::kBudget;
    }
    ++nodes_;
    std::vector<int> reach = Reachable(game_, &strategy_, Restriction::kOptimistic);
    if (!InitWins(reach, Restriction::kOptimistic)) return Outcome::kFailed;

    // Undecided local control vertex with the fewest edges.
    int best_game = -1, best_vertex = -1;
    std::size_t best_edges = 0;
    std::vector<std::vector<char>> seen(game_.components());
    for (int i = 0; i < game_.components(); ++i) seen[i].assign(game_.locals[i].size(), 0);
    std::vector<char> goal = game_.GoalMask();
    for (int v : reach) {
      if (goal[v] || game_.IsEnv(v)) continue;
      auto t = game_.Tuple(v);
      for (int i = 0; i < game_.components(); ++i) {
        const LocalGame& g = game_.locals[i];
        int x = t[i];
        if (!g.IsControl(x) || seen[i][x] || g.edges[x].empty()) continue;
        seen[i][x] = 1;
        if (strategy_.Get(i, x) >= 0) continue;
        std::size_t e = g.edges[x].size();
        if (best_game < 0 || e < best_edges || (e == best_edges && (i < best_game || (i == best_game && x < best_vertex)))) {
          best_game = i;
          best_vertex = x;
          best_edges = e;
        }
      }
    }
    if (best_game < 0) {
      // Every reachable control vertex is decided: optimistic and strict agree
      // except for the interleaving scheduler.
      if (game_.semantics == Semantics::kInterleaved && !InitWins(reach, Restriction::kStrict)) {
        return Outcome::kFailed;
      }
      DistributedStrategy full = strategy_;
      CompleteStrategy(game_, full);
      if (opt_.accept && !opt_.accept(full)) return Outcome::kFailed;
      found_ = std::move(full);
      return Outcome::kFound;
    }
    if (opt_.depth_cap > 0 && depth >= opt_.depth_cap) {
      cut_ = true;
      return Outcome::kBudget;
    }
    for (int to : game_.locals[best_game].edges[best_vertex]) {
      strategy_.Set(best_game, best_vertex, to);
      Outcome o = Node(depth + 1);
      if (o == Outcome::kFound) return o;
      if (o == Outcome::kBudget) {
        strategy_.choice[best_game].erase(best_vertex);
        return o;
      }
    }
    strategy_.choice[best_game].erase(best_vertex);
    return Outcome::kFailed;
  }

  bool InitWins(const std::vector<int>& reach, Restriction mode) const {
    Arena a = BuildArena(game_, &strategy_, mode, reach);
    std::vector<int> local_of(game_.size(), -1);
    for (int k = 0; k < a.size(); ++k) local_of[a.ids[k]] = k;
    std::vector<int> targets;
    for (int g : game_.goal) {
      if (local_of[g] >= 0) targets.push_back(local_of[g]);
    }
    AttractorResult attr = Attractor(a, 0, targets);
    for (int v : game_.init) {
      if (!attr.Contains(local_of[v])) return false;
    }
    return true;
  }

  const DistributedGame& game_;
  const SearchOptions& opt_;
  DistributedStrategy strategy_;
  DistributedStrategy found_;
  std::uint64_t nodes_ = 0;
  bool cut_ = false;
};

}  // namespace

SearchResult ForwardSearch(const DistributedGame& game, const SearchOptions& options) {
  return Search(game, options).Run();
}

int DefaultDepth(const DistributedGame& game) {
  const int n = game.size();
  std::vector<char> goal(n, 0);
  for (int g : game.goal) goal[g] = 1;
  std::vector<int> longest(n, -1);
  std::vector<char> state(n, 0);  // 0 new, 1 open, 2 done
  std::vector<std::pair<int, std::vector<int>>> stack;
  auto succ = [&](int v) {
    std::vector<int> out;
    if (goal[v]) return out;
    if (game.IsEnv(v)) return game.EnvSuccessors(v);
    for (const auto& m : game.ControlMoves(v, nullptr, Restriction::kNone)) out.push_back(m.target);
    return out;
  };
  // A winning play under a positional strategy never repeats a vertex.
  auto reachable = [&] {
    std::vector<char> seen(n, 0);
    std::vector<int> todo(game.init.begin(), game.init.end());
    for (int v : todo) seen[v] = 1;
    for (std::size_t k = 0; k < todo.size(); ++k) {
      for (int w : succ(todo[k])) {
        if (!seen[w]) {
          seen[w] = 1;
          todo.push_back(w);
        }
      }
    }
    return static_cast<int>(todo.size());
  };
  int best = 0;
  for (int root : game.init) {
    if (state[root]) {
      best = std::max(best, longest[root]);
      continue;
    }
    stack.push_back({root, succ(root)});
    state[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (!next.empty()) {
        int w = next.back();
        next.pop_back();
        if (state[w] == 1) return std::max(1, reachable());
        if (state[w] == 0) {
          state[w] = 1;
          stack.push_back({w, succ(w)});
        }
        continue;
      }
      int len = 1;
      for (int w : succ(v)) len = std::max(len, longest[w] + 1);
      longest[v] = len;
      state[v] = 2;
      stack.pop_back();
    }
    best = std::max(best, longest[root]);
  }
  return std::max(1, best);
}

SolveResult SolveGame(const DistributedGame& game, const SolveOptions& options) {
  SolveResult r;
  if (options.kind == SolverKind::kSearch) {
    SearchOptions so = options.search;
    if (options.accept) so.accept = options.accept;
    SearchResult s = ForwardSearch(game, so);
    r.status = s.status;
    r.nodes = s.nodes;
    r.strategy = std::move(s.strategy);
  } else {
    int depth = options.depth > 0 ? options.depth : DefaultDepth(game);
    r.depth = depth;
    WitnessEncoding enc = options.kind == SolverKind::kSatInterleaved
                              ? EncodeBoundedWitnessInterleaved(game, depth)
                              : EncodeBoundedWitness(game, depth);
    r.cnf_variables = enc.cnf.variables;
    r.cnf_clauses = enc.cnf.clauses.size();
    if (!options.dimacs_path.empty()) {
      WriteTextFile(options.dimacs_path, WriteDimacs(enc.cnf));
      WriteTextFile(options.dimacs_path + ".map", enc.WriteVarMap(game));
    }
    std::map<std::tuple<int, int, int>, int> edge_var;
    for (std::size_t k = 0; k < enc.edges.size(); ++k) {
      edge_var[{enc.edges[k].component, enc.edges[k].from, enc.edges[k].to}] = enc.EdgeVarOf(k);
    }
    while (true) {
      SatResult sat = options.external_command.empty() ? SolveEmbedded(enc.cnf, options.sat)
                                                       : SolveExternal(enc.cnf, options.external_command);
      if (sat.status != SatStatus::kSat) {
        // Bounded: no (acceptable) witness at this depth.
        r.status = SolveStatus::kUnknown;
        r.detail = sat.status == SatStatus::kUnsat ? "no witness at depth " + std::to_string(depth)
                                                   : "SAT backend gave up";
        if (r.rejected) r.detail += " after " + std::to_string(r.rejected) + " rejected";
        break;
      }
      DistributedStrategy s = ExtractStrategy(game, enc, sat.model);
      CompleteStrategy(game, s);
      if (!options.accept || options.accept(s)) {
        r.status = SolveStatus::kWon;
        r.strategy = std::move(s);
        break;
      }
      std::vector<int> block;
      std::set<std::pair<int, int>> seen;
      for (int v : Reachable(game, &s, Restriction::kStrict)) {
        auto t = game.Tuple(v);
        for (int i = 0; i < game.components(); ++i) {
          int to = s.Get(i, t[i]);
          if (to < 0 || !seen.insert({i, t[i]}).second) continue;
          auto it = edge_var.find({i, t[i], to});
          if (it != edge_var.end()) block.push_back(-it->second);
        }
      }
      ++r.rejected;
      if (block.empty() || r.rejected >= options.max_rejections) {
        r.status = SolveStatus::kUnknown;
        r.detail = "every witness rejected (" + std::to_string(r.rejected) + " tried)";
        break;
      }
      enc.cnf.Add(std::move(block));
    }
  }
  if (r.strategy && !VerifyStrategy(game, *r.strategy)) {
    throw Error(ErrorCode::kSynthesisFailed,
                std::string(SolverKindName(options.kind)) + " produced a strategy that does not verify");
  }
  return r;
}

}  // namespace ftsynth
