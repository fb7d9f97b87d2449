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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ftsynth {

// How control vertices move: every local game in a control position moves at
// once, or exactly one of them moves per step.
enum class Semantics { kSimultaneous, kInterleaved };

struct LocalGame {
  std::string name;
  std::vector<std::string> labels;
  std::vector<std::uint8_t> owner;  // 0 control, 1 environment
  std::vector<std::vector<int>> edges;

  int AddVertex(std::string label, int owner_player);
  void AddEdge(int from, int to);
  int Find(std::string_view label) const;  // -1 if absent
  int size() const { return static_cast<int>(labels.size()); }
  bool IsControl(int v) const { return owner[v] == 0; }
  // True iff every edge joins a control and an environment vertex.
  bool IsBipartite() const;
};

// Positional distributed strategy: per local game, control vertex -> chosen
// local successor.
struct DistributedStrategy {
  std::vector<std::map<int, int>> choice;

  explicit DistributedStrategy(std::size_t games = 0) : choice(games) {}
  int Get(int game, int vertex) const;
  void Set(int game, int vertex, int successor) { choice.at(game)[vertex] = successor; }
};

// How undecided local control vertices behave when a strategy restricts the
// control moves: any edge (optimistic) or none (strict).
enum class Restriction { kNone, kOptimistic, kStrict };

class DistributedGame {
 public:
  std::vector<LocalGame> locals;
  Semantics semantics = Semantics::kSimultaneous;
  std::vector<int> init;
  std::vector<int> goal;

  int components() const { return static_cast<int>(locals.size()); }
  int size() const { return static_cast<int>(tuples_.size() / std::max(1, components())); }

  // Global vertices are interned tuples of local vertex ids.
  int Intern(std::span<const int> tuple);
  int Find(std::span<const int> tuple) const;
  std::span<const int> Tuple(int id) const {
    return {tuples_.data() + static_cast<std::size_t>(id) * components(),
            static_cast<std::size_t>(components())};
  }
  std::string Label(int id) const;

  // Interns every product vertex (small games only).
  void InternFullProduct();
  bool full_product() const { return full_product_; }

  bool IsEnv(int id) const;
  // Validates the environment-edge rule: from an environment vertex, to a
  // different vertex, every changed component lands in a control position.
  void AddEnvEdge(int from, int to);
  const std::vector<int>& EnvSuccessors(int id) const;

  // Control successors of `id` that exist in the universe. Each result is
  // paired with the local moves that produced it: (component, local target).
  struct ControlMove {
    int target;
    std::vector<std::pair<int, int>> moves;
  };
  std::vector<ControlMove> ControlMoves(int id, const DistributedStrategy* strategy,
                                        Restriction mode) const;

  std::vector<char> GoalMask() const;
  std::size_t LocalControlEdgeCount() const;

 private:
  struct TupleHash {
    std::size_t operator()(const std::vector<int>& t) const;
  };
  std::vector<int> tuples_;
  std::unordered_map<std::vector<int>, int, TupleHash> index_;
  std::vector<std::vector<int>> env_succ_;
  bool full_product_ = false;
};

// Explicit two-player arena. Vertices owned by `universal` players need all
// successors (at least one) inside the target to be attracted.
struct Arena {
  std::vector<std::uint8_t> owner;        // player who picks the move
  std::vector<std::vector<int>> succ;
  std::vector<int> ids;                   // global vertex per arena vertex (game arenas)
  int size() const { return static_cast<int>(owner.size()); }
};

// Arena view of a distributed game under a (possibly partial) strategy,
// over `vertices` (all vertices when empty; successors outside the subset
// are dropped, so pass a successor-closed set). Interleaved control vertices
// under a strict restriction are resolved by an adversarial scheduler and
// therefore owned by player 1.
Arena BuildArena(const DistributedGame& game, const DistributedStrategy* strategy,
                 Restriction mode, std::span<const int> vertices = {});

struct AttractorResult {
  std::vector<char> in;
  std::vector<int> chosen;  // successor used by attracted vertices of `player`; -1 otherwise
  bool Contains(int v) const { return in[v] != 0; }
  std::size_t Count() const;
};

AttractorResult Attractor(const Arena& arena, int player, std::span<const int> target);
// Convenience for local games (owner taken from the local partition).
AttractorResult Attractor(const LocalGame& game, int player, std::span<const int> target);

// Deterministic polynomial check that `strategy` wins from every initial
// vertex. Throws PartialStrategy when a control vertex reachable under the
// strategy lacks a selection.
bool VerifyStrategy(const DistributedGame& game, const DistributedStrategy& strategy);

// Vertices reachable from init under the restriction; goal vertices are not
// expanded.
std::vector<int> Reachable(const DistributedGame& game, const DistributedStrategy* strategy,
                           Restriction mode);

// Keeps only the vertices reachable from init (re-interned in BFS order).
DistributedGame RestrictToReachable(const DistributedGame& game);

// Exhaustive enumeration of positional strategies; throws StateCapExceeded
// when there are more than `cap` combined pointings.
std::optional<DistributedStrategy> EnumerateStrategies(const DistributedGame& game,
                                                       std::uint64_t cap = 1u << 20);

// --- 3SAT reduction -------------------------------------------------------

using Clause3 = std::array<int, 3>;  // literals: +v / -v, variables 1-based

struct Reduction3Sat {
  DistributedGame game;
  int variables = 0;
  int clauses = 0;
};

// Builds G1..G4 and the five environment edge families. Throws
// MalformedClause for literals outside 1..n or zero.
Reduction3Sat Reduce3Sat(int variables, const std::vector<Clause3>& clauses);

// Reads the assignment off G1: var_i is true iff it points to T_i.
std::vector<bool> DecodeAssignment(const Reduction3Sat& r, const DistributedStrategy& s);
DistributedStrategy EncodeAssignment(const Reduction3Sat& r, const std::vector<bool>& assignment);

// --- text formats ---------------------------------------------------------

std::string WriteGame(const DistributedGame& game);
DistributedGame ReadGame(std::string_view text);
std::string WriteStrategy(const DistributedGame& game, const DistributedStrategy& s);
DistributedStrategy ReadStrategy(const DistributedGame& game, std::string_view text);

}  // namespace ftsynth
