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

#include <sstream>

#include "ftsynth/error.hpp"
#include "ftsynth/solver.hpp"

namespace ftsynth {

std::size_t Cnf::LiteralCount() const {
  std::size_t n = 0;
  for (const auto& c : clauses) n += c.size();
  return n;
}

std::string WriteDimacs(const Cnf& cnf) {
  std::string out = "p cnf " + std::to_string(cnf.variables) + " " + std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& c : cnf.clauses) {
    for (int lit : c) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

Cnf ReadDimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Cnf cnf;
  long declared = -1;
  std::vector<int> current;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::kMalformedDimacs, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == 'c') continue;
    if (tok[0] == '%') break;
    if (tok == "p") {
      std::string fmt;
      long vars = -1;
      if (declared >= 0) fail("duplicate header");
      if (!(ls >> fmt >> vars >> declared) || fmt != "cnf" || vars < 0 || declared < 0) {
        fail("expected 'p cnf <vars> <clauses>'");
      }
      cnf.variables = static_cast<int>(vars);
      continue;
    }
    if (declared < 0) fail("clause before header");
    ls.clear();
    ls.seekg(0);
    long lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (lit > cnf.variables || -lit > cnf.variables) fail("literal " + std::to_string(lit) + " out of range");
        current.push_back(static_cast<int>(lit));
      }
    }
    if (!ls.eof()) fail("unexpected token");
  }
  if (declared < 0) fail("missing header");
  if (!current.empty()) fail("last clause is not terminated by 0");
  if (static_cast<long>(cnf.clauses.size()) != declared) {
    fail("header declares " + std::to_string(declared) + " clauses, found " + std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

bool Satisfies(const Cnf& cnf, const std::vector<bool>& model) {
  for (const auto& c : cnf.clauses) {
    bool sat = false;
    for (int lit : c) {
      int v = lit > 0 ? lit : -lit;
      if (v < static_cast<int>(model.size()) && model[v] == (lit > 0)) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

// --- bounded witness encodings ----------------------------------------------

namespace {

constexpr std::uint64_t kMaxCombinations = 1u << 16;
constexpr std::uint64_t kMaxVertexLevels = 1u << 24;

struct Common {
  WitnessEncoding enc;
  // Edge variable per (component, local vertex, position in edge list).
  std::vector<std::vector<std::vector<int>>> edge_var;
  std::vector<char> goal;
};

// STEPs 1-5 and 7, shared by both encodings.
Common EncodeCommon(const DistributedGame& game, int depth, bool interleaved) {
  if (depth < 1) throw Error(ErrorCode::kUsage, "unrolling depth must be >= 1");
  if (static_cast<std::uint64_t>(game.size()) * static_cast<std::uint64_t>(depth + 1) > kMaxVertexLevels) {
    throw Error(ErrorCode::kEncodingTooLarge,
                std::to_string(game.size()) + " vertices unrolled to depth " + std::to_string(depth) +
                    " exceed the encoding limit; lower the depth or restrict the game to its reachable part");
  }
  Common c;
  WitnessEncoding& e = c.enc;
  e.depth = depth;
  e.vertices = game.size();
  e.interleaved = interleaved;
  const int n = game.size();

  // STEP 1: d variables per vertex, one per local control edge.
  e.cnf.variables = depth * n;
  c.edge_var.resize(game.components());
  for (int i = 0; i < game.components(); ++i) {
    const LocalGame& g = game.locals[i];
    c.edge_var[i].resize(g.size());
    for (int v = 0; v < g.size(); ++v) {
      if (!g.IsControl(v)) continue;
      for (int w : g.edges[v]) {
        e.edges.push_back({i, v, w});
        c.edge_var[i][v].push_back(e.cnf.NewVar());
      }
    }
  }
  c.goal = game.GoalMask();
  std::vector<char> init(n, 0);
  for (int v : game.init) init[v] = 1;

  for (int v = 0; v < n; ++v) {
    // STEP 2; goal vertices are left free at level 1.
    if (init[v]) {
      e.cnf.Add({e.VertexVar(v, 1)});
    } else if (!c.goal[v]) {
      e.cnf.Add({-e.VertexVar(v, 1)});
    }
    // STEP 3
    if (c.goal[v]) {
      for (int j = 1; j <= depth; ++j) e.cnf.Add({e.VertexVar(v, j)});
    } else {
      e.cnf.Add({-e.VertexVar(v, depth)});
    }
  }
  // STEP 4: at most one selected edge per local control vertex.
  for (const auto& per_game : c.edge_var) {
    for (const auto& vars : per_game) {
      for (std::size_t a = 0; a < vars.size(); ++a) {
        for (std::size_t b = a + 1; b < vars.size(); ++b) e.cnf.Add({-vars[a], -vars[b]});
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (c.goal[v]) continue;
    auto t = game.Tuple(v);
    if (game.IsEnv(v)) {
      // STEP 7; a dead end cannot be part of a witness.
      const auto& succ = game.EnvSuccessors(v);
      if (succ.empty()) {
        for (int j = 1; j <= depth; ++j) e.cnf.Add({-e.VertexVar(v, j)});
        continue;
      }
      for (int j = 1; j < depth; ++j) {
        for (int w : succ) {
          std::vector<int> clause = {-e.VertexVar(v, j)};
          for (int k = j + 1; k <= depth; ++k) clause.push_back(e.VertexVar(w, k));
          e.cnf.Add(std::move(clause));
        }
      }
      continue;
    }
    // STEP 5, per control component.
    for (int i = 0; i < game.components(); ++i) {
      if (!game.locals[i].IsControl(t[i])) continue;
      const auto& vars = c.edge_var[i][t[i]];
      if (vars.empty()) continue;
      for (int j = 1; j <= depth; ++j) {
        std::vector<int> clause = {-e.VertexVar(v, j)};
        clause.insert(clause.end(), vars.begin(), vars.end());
        e.cnf.Add(std::move(clause));
      }
    }
  }
  return c;
}

// Control vertex with no successor in the universe.
bool ControlDeadEnd(const DistributedGame& game, int v) {
  return game.ControlMoves(v, nullptr, Restriction::kNone).empty();
}

}  // namespace

WitnessEncoding EncodeBoundedWitness(const DistributedGame& game, int depth) {
  Common c = EncodeCommon(game, depth, false);
  WitnessEncoding& e = c.enc;
  // STEP 6: every combination of local edges leads to the next level.
  for (int v = 0; v < game.size(); ++v) {
    if (c.goal[v] || game.IsEnv(v)) continue;
    auto t = game.Tuple(v);
    std::vector<int> movers;
    std::uint64_t combos = 1;
    for (int i = 0; i < game.components(); ++i) {
      if (!game.locals[i].IsControl(t[i])) continue;
      movers.push_back(i);
      combos *= std::max<std::size_t>(1, game.locals[i].edges[t[i]].size());
      if (combos > kMaxCombinations) {
        throw Error(ErrorCode::kEncodingTooLarge,
                    "control vertex " + game.Label(v) + " has more than 65536 edge combinations; "
                    "use the interleaved encoding");
      }
    }
    if (ControlDeadEnd(game, v)) {
      for (int j = 1; j <= depth; ++j) e.cnf.Add({-e.VertexVar(v, j)});
      continue;
    }
    std::vector<std::size_t> pick(movers.size(), 0);
    std::vector<int> next(t.begin(), t.end());
    while (true) {
      std::vector<int> sel;
      for (std::size_t k = 0; k < movers.size(); ++k) {
        int i = movers[k];
        next[i] = game.locals[i].edges[t[i]][pick[k]];
        sel.push_back(c.edge_var[i][t[i]][pick[k]]);
      }
      int target = game.Find(next);
      for (int j = 1; j < depth; ++j) {
        std::vector<int> clause = {-e.VertexVar(v, j)};
        for (int s : sel) clause.push_back(-s);
        if (target >= 0) clause.push_back(e.VertexVar(target, j + 1));
        e.cnf.Add(std::move(clause));
      }
      std::size_t k = movers.size();
      while (k > 0 && ++pick[k - 1] == game.locals[movers[k - 1]].edges[t[movers[k - 1]]].size()) {
        pick[--k] = 0;
      }
      if (k == 0) break;
    }
  }
  return std::move(c.enc);
}

WitnessEncoding EncodeBoundedWitnessInterleaved(const DistributedGame& game, int depth) {
  Common c = EncodeCommon(game, depth, true);
  WitnessEncoding& e = c.enc;
  // STEP 6: every selected local edge, taken alone, leads to a later level.
  for (int v = 0; v < game.size(); ++v) {
    if (c.goal[v] || game.IsEnv(v)) continue;
    if (ControlDeadEnd(game, v)) {
      for (int j = 1; j <= depth; ++j) e.cnf.Add({-e.VertexVar(v, j)});
      continue;
    }
    auto t = game.Tuple(v);
    std::vector<int> next(t.begin(), t.end());
    for (int i = 0; i < game.components(); ++i) {
      if (!game.locals[i].IsControl(t[i])) continue;
      const auto& edges = game.locals[i].edges[t[i]];
      for (std::size_t k = 0; k < edges.size(); ++k) {
        next[i] = edges[k];
        int target = game.Find(next);
        for (int j = 1; j < depth; ++j) {
          std::vector<int> clause = {-c.edge_var[i][t[i]][k], -e.VertexVar(v, j)};
          if (target >= 0) {
            for (int l = j + 1; l <= depth; ++l) clause.push_back(e.VertexVar(target, l));
          }
          e.cnf.Add(std::move(clause));
        }
      }
      next[i] = t[i];
    }
  }
  return std::move(c.enc);
}

std::string WitnessEncoding::VarName(const DistributedGame& game, int var) const {
  if (var >= 1 && var <= depth * vertices) {
    int v = (var - 1) % vertices;
    int level = (var - 1) / vertices + 1;
    return "vertex " + std::to_string(v) + " " + std::to_string(level) + " " + game.Label(v);
  }
  std::size_t k = static_cast<std::size_t>(var - depth * vertices - 1);
  const EdgeVar& ev = edges.at(k);
  const LocalGame& g = game.locals[ev.component];
  return "edge " + g.name + " " + std::to_string(ev.from) + " " + std::to_string(ev.to) + " " +
         g.labels[ev.from] + " -> " + g.labels[ev.to];
}

std::string WitnessEncoding::WriteVarMap(const DistributedGame& game) const {
  std::string out;
  for (int var = 1; var <= cnf.variables; ++var) {
    out += std::to_string(var) + " " + VarName(game, var) + "\n";
  }
  return out;
}

DistributedStrategy ExtractStrategy(const DistributedGame& game, const WitnessEncoding& enc,
                                    const std::vector<bool>& model) {
  DistributedStrategy s(game.components());
  for (std::size_t k = 0; k < enc.edges.size(); ++k) {
    int var = enc.EdgeVarOf(k);
    if (var >= static_cast<int>(model.size()) || !model[var]) continue;
    const EdgeVar& ev = enc.edges[k];
    int prev = s.Get(ev.component, ev.from);
    if (prev >= 0 && prev != ev.to) {
      const LocalGame& g = game.locals[ev.component];
      throw Error(ErrorCode::kAmbiguousSelection,
                  g.name + ":" + g.labels[ev.from] + " selects both " + g.labels[prev] + " and " + g.labels[ev.to]);
    }
    s.Set(ev.component, ev.from, ev.to);
  }
  return s;
}

void CompleteStrategy(const DistributedGame& game, DistributedStrategy& strategy) {
  if (strategy.choice.size() < static_cast<std::size_t>(game.components())) {
    strategy.choice.resize(game.components());
  }
  for (int i = 0; i < game.components(); ++i) {
    const LocalGame& g = game.locals[i];
    for (int v = 0; v < g.size(); ++v) {
      if (g.IsControl(v) && !g.edges[v].empty() && strategy.Get(i, v) < 0) strategy.Set(i, v, g.edges[v][0]);
    }
  }
}

}  // namespace ftsynth
