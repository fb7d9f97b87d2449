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

#include <random>

#include "doctest.h"
#include "ftsynth/error.hpp"
#include "ftsynth/game.hpp"

using namespace ftsynth;

namespace {

// Naive fixpoint attractor: repeat until stable.
std::vector<char> NaiveAttractor(const Arena& a, int player, const std::vector<int>& target) {
  std::vector<char> in(a.size(), 0);
  for (int t : target) in[t] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < a.size(); ++v) {
      if (in[v]) continue;
      bool any = false, all = !a.succ[v].empty();
      for (int w : a.succ[v]) {
        any = any || in[w];
        all = all && in[w];
      }
      if (a.owner[v] == player ? any : all) {
        in[v] = 1;
        changed = true;
      }
    }
  }
  return in;
}

Arena RandomArena(std::mt19937& rng, int n) {
  Arena a;
  a.owner.resize(n);
  a.succ.resize(n);
  std::uniform_int_distribution<int> vertex(0, n - 1), degree(0, 3), coin(0, 1);
  for (int v = 0; v < n; ++v) {
    a.owner[v] = static_cast<std::uint8_t>(coin(rng));
    int d = degree(rng);
    for (int k = 0; k < d; ++k) a.succ[v].push_back(vertex(rng));
  }
  return a;
}

bool Satisfies(const std::vector<Clause3>& f, const std::vector<bool>& a) {
  for (const auto& c : f) {
    bool sat = false;
    for (int lit : c) sat = sat || (lit > 0 ? a[lit - 1] : !a[-lit - 1]);
    if (!sat) return false;
  }
  return true;
}

std::vector<bool> FromBits(int n, unsigned bits) {
  std::vector<bool> a(n);
  for (int i = 0; i < n; ++i) a[i] = (bits >> i) & 1u;
  return a;
}

std::vector<Clause3> RandomFormula(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> var(1, n), coin(0, 1);
  std::vector<Clause3> f(m);
  for (auto& c : f) {
    for (int& lit : c) lit = coin(rng) ? var(rng) : -var(rng);
  }
  return f;
}

}  // namespace

TEST_CASE("attractor agrees with naive fixpoint on random arenas") {
  std::mt19937 rng(7);
  for (int iter = 0; iter < 300; ++iter) {
    int n = 1 + static_cast<int>(rng() % 25);
    Arena a = RandomArena(rng, n);
    std::vector<int> target;
    for (int v = 0; v < n; ++v) {
      if (rng() % 4 == 0) target.push_back(v);
    }
    for (int player = 0; player < 2; ++player) {
      auto res = Attractor(a, player, target);
      auto expect = NaiveAttractor(a, player, target);
      for (int v = 0; v < n; ++v) {
        REQUIRE(bool(res.Contains(v)) == bool(expect[v]));
        // The chosen successor of an attracted player vertex stays in the attractor.
        if (res.Contains(v) && a.owner[v] == player && res.chosen[v] >= 0) {
          CHECK(res.Contains(res.chosen[v]));
        }
      }
    }
  }
}

TEST_CASE("local attractor on a two-vertex game") {
  LocalGame g;
  int c = g.AddVertex("c", 0);
  int e = g.AddVertex("e", 1);
  g.AddEdge(c, e);
  std::vector<int> target = {e};
  auto res = Attractor(g, 0, target);
  CHECK(res.Contains(c));
  CHECK(res.chosen[c] == e);
  // An environment dead end is not attracted to a target it cannot reach.
  std::vector<int> target_c = {c};
  CHECK_FALSE(Attractor(g, 0, target_c).Contains(e));
}

TEST_CASE("3SAT reduction local game sizes") {
  std::vector<Clause3> f = {{1, -2, 2}, {-1, -1, 2}};
  auto r = Reduce3Sat(2, f);
  REQUIRE(r.game.components() == 4);
  CHECK(r.game.locals[0].size() == 7);
  CHECK(r.game.locals[1].size() == 7);
  CHECK(r.game.locals[2].size() == 7);
  CHECK(r.game.locals[3].size() == 13);
  CHECK(r.game.size() == 7 * 7 * 7 * 13);
  for (const auto& lg : r.game.locals) CHECK(lg.IsBipartite());
}

TEST_CASE("3SAT reduction rejects malformed clauses") {
  CHECK_THROWS_AS(Reduce3Sat(2, {{1, 0, 2}}), Error);
  CHECK_THROWS_AS(Reduce3Sat(2, {{1, 3, 2}}), Error);
  CHECK_THROWS_AS(Reduce3Sat(2, {{-3, 1, 2}}), Error);
}

TEST_CASE("single satisfiable clause has a winning strategy") {
  auto r = Reduce3Sat(1, {{1, 1, 1}});
  auto s = EnumerateStrategies(r.game);
  REQUIRE(s.has_value());
  CHECK(VerifyStrategy(r.game, *s));
  CHECK(DecodeAssignment(r, *s) == std::vector<bool>{true});
}

TEST_CASE("contradiction has no winning strategy") {
  auto r = Reduce3Sat(1, {{1, 1, 1}, {-1, -1, -1}});
  CHECK_FALSE(EnumerateStrategies(r.game).has_value());
}

TEST_CASE("encoded assignment wins iff it satisfies the formula") {
  std::mt19937 rng(11);
  for (int iter = 0; iter < 12; ++iter) {
    int n = 1 + static_cast<int>(rng() % 2);
    int m = 1 + static_cast<int>(rng() % 3);
    auto f = RandomFormula(rng, n, m);
    auto r = Reduce3Sat(n, f);
    bool any = false;
    for (unsigned bits = 0; bits < (1u << n); ++bits) {
      auto a = FromBits(n, bits);
      bool sat = Satisfies(f, a);
      any = any || sat;
      auto s = EncodeAssignment(r, a);
      CHECK(VerifyStrategy(r.game, s) == sat);
      CHECK(DecodeAssignment(r, s) == a);
    }
    auto found = EnumerateStrategies(r.game);
    CHECK(found.has_value() == any);
    if (found) CHECK(Satisfies(f, DecodeAssignment(r, *found)));
  }
}

TEST_CASE("verifying an empty strategy reports a partial strategy") {
  auto r = Reduce3Sat(1, {{1, 1, 1}});
  DistributedStrategy empty(4);
  CHECK_THROWS_AS(VerifyStrategy(r.game, empty), Error);
}

TEST_CASE("game and strategy text round-trip") {
  auto r = Reduce3Sat(2, {{1, -2, 2}});
  auto s = EncodeAssignment(r, {true, false});
  std::string text = WriteGame(r.game);
  DistributedGame back = ReadGame(text);
  CHECK(WriteGame(back) == text);
  CHECK(back.size() == r.game.size());
  auto s2 = ReadStrategy(back, WriteStrategy(r.game, s));
  CHECK(s2.choice == s.choice);
  CHECK(VerifyStrategy(back, s2) == VerifyStrategy(r.game, s));

  auto small = RestrictToReachable(r.game);
  CHECK(small.size() < r.game.size());
  std::string t2 = WriteGame(small);
  CHECK(WriteGame(ReadGame(t2)) == t2);
}

TEST_CASE("game reader reports malformed input") {
  CHECK_THROWS_AS(ReadGame("not a game\n"), Error);
  CHECK_THROWS_AS(ReadGame("ftsynth-game 1\ngames 1\ngame 1 A\nv 0 0 c\nuniverse full\nq 1\n"), Error);
  auto r = Reduce3Sat(1, {{1, 1, 1}});
  CHECK_THROWS_AS(ReadStrategy(r.game, "ftsynth-strategy 1\nG1 0 1\n"), Error);
  CHECK_THROWS_AS(ReadStrategy(r.game, "ftsynth-strategy 1\nG9 1 2\n"), Error);
}
