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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftsynth/game.hpp"

namespace ftsynth {

// --- CNF and SAT backends -------------------------------------------------

struct Cnf {
  int variables = 0;
  std::vector<std::vector<int>> clauses;  // DIMACS literals

  int NewVar() { return ++variables; }
  void Add(std::vector<int> clause) { clauses.push_back(std::move(clause)); }
  std::size_t LiteralCount() const;
};

std::string WriteDimacs(const Cnf& cnf);
// Throws MalformedDimacs.
Cnf ReadDimacs(std::string_view text);

enum class SatStatus { kSat, kUnsat, kUnknown };

struct SatResult {
  SatStatus status = SatStatus::kUnknown;
  std::vector<bool> model;  // index 1..variables; model[0] unused
};

struct SatOptions {
  std::uint64_t conflict_budget = 0;  // 0: unlimited
  std::uint64_t seed = 1;
};

// Complete CDCL solver (two watched literals, first-UIP learning, VSIDS,
// Luby restarts, phase saving).
SatResult SolveEmbedded(const Cnf& cnf, const SatOptions& options = {});

// Runs `command <file.cnf>` and parses competition output ("s ..." and
// "v ... 0" lines). Throws BackendUnavailable when the command cannot run
// or reports nothing, MalformedDimacs when the output cannot be parsed.
SatResult SolveExternal(const Cnf& cnf, const std::string& command);
SatResult ParseSolverOutput(std::string_view text, int variables);
std::string FormatSolverOutput(const SatResult& result);

bool Satisfies(const Cnf& cnf, const std::vector<bool>& model);

// --- bounded witness encodings --------------------------------------------

struct EdgeVar {
  int component = 0;
  int from = 0;
  int to = 0;
};

struct WitnessEncoding {
  Cnf cnf;
  int depth = 0;
  int vertices = 0;
  bool interleaved = false;
  std::vector<EdgeVar> edges;  // variable d*|V| + k + 1

  // <v>_level, level in 1..depth.
  int VertexVar(int v, int level) const { return (level - 1) * vertices + v + 1; }
  int EdgeVarOf(std::size_t k) const { return depth * vertices + static_cast<int>(k) + 1; }
  std::string VarName(const DistributedGame& game, int var) const;
  // Sidecar text: one "<var> <name>" line per variable.
  std::string WriteVarMap(const DistributedGame& game) const;
};

// Simultaneous-progress encoding. Throws EncodingTooLarge when a control
// vertex has more than 2^16 local edge combinations.
WitnessEncoding EncodeBoundedWitness(const DistributedGame& game, int depth);
// One-local-move encoding for interleaved control.
WitnessEncoding EncodeBoundedWitnessInterleaved(const DistributedGame& game, int depth);

// Reads edge selections off a model. Throws AmbiguousSelection when two
// edges leave the same local vertex.
DistributedStrategy ExtractStrategy(const DistributedGame& game, const WitnessEncoding& enc,
                                    const std::vector<bool>& model);

// Fills every undecided local control vertex with its first edge.
void CompleteStrategy(const DistributedGame& game, DistributedStrategy& strategy);

// --- forward search ---------------------------------------------------------

enum class SolveStatus { kWon, kNoStrategy, kUnknown };

const char* SolveStatusName(SolveStatus s);

struct SearchOptions {
  std::uint64_t node_budget = 5'000'000;
  int depth_cap = 0;  // decisions along one branch; 0: unlimited
  // Extra acceptance test on a winning strategy; rejected ones are skipped.
  std::function<bool(const DistributedStrategy&)> accept;
};

struct SearchResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<DistributedStrategy> strategy;
  std::uint64_t nodes = 0;
};

// Depth-first search over local edge selections on the vertices reachable
// under the partial selection. Exhausting the tree without a budget or depth
// cut means no positional strategy exists.
SearchResult ForwardSearch(const DistributedGame& game, const SearchOptions& options = {});

// --- front door -------------------------------------------------------------

enum class SolverKind { kSearch, kSatSimultaneous, kSatInterleaved };

const char* SolverKindName(SolverKind k);
SolverKind ParseSolverKind(std::string_view name);  // throws Usage

// Number of vertices on the longest play from init when the game graph is
// acyclic there (every witness fits), else the number of reachable vertices.
int DefaultDepth(const DistributedGame& game);

struct SolveOptions {
  SolverKind kind = SolverKind::kSearch;
  int depth = 0;                 // SAT unrolling; 0: DefaultDepth
  std::string external_command;  // empty: embedded CDCL
  SearchOptions search;
  SatOptions sat;
  std::string dimacs_path;       // when set, the CNF and var map are written here
  // Extra acceptance test for every solver. SAT solving blocks the reachable
  // edge selection of a rejected witness and solves again, at most
  // max_rejections times.
  std::function<bool(const DistributedStrategy&)> accept;
  int max_rejections = 256;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kUnknown;
  std::optional<DistributedStrategy> strategy;  // verified when present
  std::uint64_t nodes = 0;
  int cnf_variables = 0;
  std::size_t cnf_clauses = 0;
  int depth = 0;
  int rejected = 0;
  std::string detail;
};

// Every returned strategy has passed VerifyStrategy.
SolveResult SolveGame(const DistributedGame& game, const SolveOptions& options);

}  // namespace ftsynth
