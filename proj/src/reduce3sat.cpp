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

#include <cstdlib>
#include <string>

#include "ftsynth/error.hpp"
#include "ftsynth/game.hpp"

namespace ftsynth {

namespace {

// Vertex ids inside G1..G3: S = 0, then (var_j, T_j, F_j) for j = 1..n.
int VarVertex(int j) { return 1 + 3 * (j - 1); }
int TrueVertex(int j) { return 2 + 3 * (j - 1); }
int FalseVertex(int j) { return 3 + 3 * (j - 1); }

// G4: S, OK0, OK1, NO0, NO1, then (v_j0, v_j1) for j = 1..m+n.
constexpr int kS = 0, kOk0 = 1, kOk1 = 2, kNo0 = 3, kNo1 = 4;
int Check0(int j) { return 5 + 2 * (j - 1); }
int Check1(int j) { return 6 + 2 * (j - 1); }

}  // namespace

Reduction3Sat Reduce3Sat(int variables, const std::vector<Clause3>& clauses) {
  if (variables < 1) throw Error(ErrorCode::kMalformedClause, "need at least one variable");
  for (std::size_t c = 0; c < clauses.size(); ++c) {
    for (int lit : clauses[c]) {
      if (lit == 0 || lit > variables || -lit > variables) {
        throw Error(ErrorCode::kMalformedClause,
                    "clause " + std::to_string(c + 1) + " has literal " + std::to_string(lit) +
                        " outside 1.." + std::to_string(variables));
      }
    }
  }
  const int n = variables;
  const int m = static_cast<int>(clauses.size());
  Reduction3Sat r;
  r.variables = n;
  r.clauses = m;
  DistributedGame& g = r.game;
  for (int i = 1; i <= 3; ++i) {
    LocalGame lg;
    lg.name = "G" + std::to_string(i);
    lg.AddVertex("S", 1);
    for (int j = 1; j <= n; ++j) {
      int v = lg.AddVertex("var" + std::to_string(j), 0);
      int t = lg.AddVertex("T" + std::to_string(j), 1);
      int f = lg.AddVertex("F" + std::to_string(j), 1);
      lg.AddEdge(v, t);
      lg.AddEdge(v, f);
    }
    g.locals.push_back(std::move(lg));
  }
  LocalGame g4;
  g4.name = "G4";
  g4.AddVertex("S", 1);
  g4.AddVertex("OK0", 0);
  g4.AddVertex("OK1", 1);
  g4.AddVertex("NO0", 0);
  g4.AddVertex("NO1", 1);
  g4.AddEdge(kOk0, kOk1);
  g4.AddEdge(kNo0, kNo1);
  for (int j = 1; j <= m + n; ++j) {
    int a = g4.AddVertex("v" + std::to_string(j) + "_0", 0);
    int b = g4.AddVertex("v" + std::to_string(j) + "_1", 1);
    g4.AddEdge(a, b);
  }
  g.locals.push_back(std::move(g4));
  g.InternFullProduct();

  auto id = [&](int a, int b, int c, int d) {
    int t[4] = {a, b, c, d};
    return g.Find(t);
  };
  const int start = id(0, 0, 0, kS);
  const int ok = id(VarVertex(1), VarVertex(1), VarVertex(1), kOk0);
  const int no = id(VarVertex(1), VarVertex(1), VarVertex(1), kNo0);
  auto value_vertex = [](int var, bool value) { return value ? TrueVertex(var) : FalseVertex(var); };

  for (int c = 0; c < m; ++c) {  // type 1
    const Clause3& cl = clauses[c];
    g.AddEnvEdge(start, id(VarVertex(std::abs(cl[0])), VarVertex(std::abs(cl[1])),
                           VarVertex(std::abs(cl[2])), Check0(c + 1)));
  }
  for (int j = 1; j <= n; ++j) {  // type 2
    g.AddEnvEdge(start, id(VarVertex(j), VarVertex(j), VarVertex(j), Check0(m + j)));
  }
  for (int c = 0; c < m; ++c) {  // type 3
    const Clause3& cl = clauses[c];
    for (int bits = 0; bits < 8; ++bits) {
      bool val[3] = {(bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
      bool sat = false;
      for (int k = 0; k < 3; ++k) sat = sat || (cl[k] > 0 ? val[k] : !val[k]);
      int from = id(value_vertex(std::abs(cl[0]), val[0]), value_vertex(std::abs(cl[1]), val[1]),
                    value_vertex(std::abs(cl[2]), val[2]), Check1(c + 1));
      g.AddEnvEdge(from, sat ? ok : no);
    }
  }
  for (int j = 1; j <= n; ++j) {  // types 4 and 5
    for (int bits = 0; bits < 8; ++bits) {
      bool val[3] = {(bits & 4) != 0, (bits & 2) != 0, (bits & 1) != 0};
      bool uniform = val[0] == val[1] && val[1] == val[2];
      int a = value_vertex(j, val[0]), b = value_vertex(j, val[1]), c = value_vertex(j, val[2]);
      g.AddEnvEdge(id(a, b, c, Check1(m + j)), uniform ? ok : no);
      g.AddEnvEdge(id(a, b, c, kOk1), ok);
      g.AddEnvEdge(id(a, b, c, kNo1), no);
    }
  }
  g.init = {start};
  g.goal = {ok};
  return r;
}

std::vector<bool> DecodeAssignment(const Reduction3Sat& r, const DistributedStrategy& s) {
  std::vector<bool> out(r.variables, false);
  for (int j = 1; j <= r.variables; ++j) out[j - 1] = s.Get(0, VarVertex(j)) == TrueVertex(j);
  return out;
}

DistributedStrategy EncodeAssignment(const Reduction3Sat& r, const std::vector<bool>& assignment) {
  DistributedStrategy s(4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 1; j <= r.variables; ++j) {
      s.Set(i, VarVertex(j), assignment.at(j - 1) ? TrueVertex(j) : FalseVertex(j));
    }
  }
  s.Set(3, kOk0, kOk1);
  s.Set(3, kNo0, kNo1);
  for (int j = 1; j <= r.clauses + r.variables; ++j) s.Set(3, Check0(j), Check1(j));
  return s;
}

}  // namespace ftsynth
