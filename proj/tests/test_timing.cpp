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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "ftsynth/can.hpp"
#include "ftsynth/error.hpp"
#include "ftsynth/model_io.hpp"
#include "ftsynth/timing.hpp"
#include "generators.hpp"

using namespace ftsynth;

namespace {

TimedAction Assign(const std::string& name, const std::string& target, const std::string& value, int r,
                   int d) {
  TimedAction a;
  a.pattern.kind = ActionKind::kAssign;
  a.pattern.name = name;
  a.pattern.target = target;
  a.pattern.value = Expr::Parse(value);
  a.release = Rational(r);
  a.deadline = Rational(d);
  a.wcet = Rational(1);
  return a;
}

// P: s1 [0,40) s2 [40,99); Q: t1 [0,50) t2 [50,99). An FT send in P between
// s1 and s2 feeds Q.y, read by an FT action in Q between t1 and t2.
PisemModel SendReadModel() {
  PisemModel m;
  m.period = Rational(100);
  PisemProcess p;
  p.name = "P";
  p.variables = {{"x", 0, 3, 0, false}};
  p.actions = {Assign("s1", "x", "1", 0, 40), Assign("s2", "x", "2", 40, 99)};
  PisemProcess q;
  q.name = "Q";
  q.variables = {{"y", 0, 3, 0, false}, {"y_v", 0, 1, 0, true}, {"z", 0, 3, 0, false}};
  q.actions = {Assign("t1", "z", "0", 0, 50), Assign("t2", "z", "1", 50, 99)};
  m.processes = {p, q};
  Network n;
  n.name = "n1";
  n.message_count = 1;
  n.wcmtt[1] = Rational(3);
  m.networks = {n};
  return m;
}

// Same actions with s2 at 60, t1 at [45,50) and t2 at 70: both slots get a gap.
PisemModel GappedModel() {
  PisemModel m = SendReadModel();
  m.processes[0].actions[1].release = Rational(60);
  m.processes[1].actions[0].release = Rational(45);
  m.processes[1].actions[1].release = Rational(70);
  return m;
}

std::vector<FtSelection> SendReadSelections() {
  Candidate fwd;
  fwd.pattern.kind = ActionKind::kSend;
  fwd.pattern.name = "Fwd";
  fwd.pattern.message_index = 1;
  fwd.pattern.network = 0;
  fwd.pattern.dest = 1;
  fwd.pattern.remote_var = "y";
  fwd.pattern.content = "x";
  fwd.wcet = Rational(1);
  Candidate use;
  use.pattern.kind = ActionKind::kAssign;
  use.pattern.name = "Use";
  use.pattern.target = "z";
  use.pattern.value = Expr::Parse("y");
  use.wcet = Rational(1);
  return {{0, Rational(3, 2), fwd, {Rational(3, 2), Rational(1)}},
          {1, Rational(3, 2), use, {Rational(2), Rational(3, 2)}}};
}

std::vector<std::string> Lines(const TimingSystem& sys) {
  std::vector<std::string> out;
  for (const auto& c : sys.constraints) out.push_back(sys.Format(c));
  std::sort(out.begin(), out.end());
  return out;
}

// The cycle's constraints telescope to 0 <(=) sum of bounds, and that sum
// is negative (or zero with a strict member).
bool IsContradiction(const TimingSystem& sys, const std::vector<int>& cycle) {
  if (cycle.empty()) return false;
  std::vector<int> heads;
  std::vector<int> tails;
  Rational sum(0);
  bool strict = false;
  for (int c : cycle) {
    const TimingConstraint& k = sys.constraints.at(c);
    heads.push_back(k.lhs);
    tails.push_back(k.rhs);
    sum += k.bound;
    strict |= k.strict;
  }
  std::sort(heads.begin(), heads.end());
  std::sort(tails.begin(), tails.end());
  return heads == tails && (sum < Rational(0) || (sum == Rational(0) && strict));
}

TimingSystem RandomSystem(std::mt19937_64& rng) {
  TimingSystem sys;
  sys.period = Rational(100);
  int nv = testing::Uniform(rng, 1, 5);
  for (int v = 0; v < nv; ++v) sys.variables.push_back({TimingVariable::kRelease, 0, Rational(v), "v" + std::to_string(v)});
  int nc = testing::Uniform(rng, 1, 10);
  for (int c = 0; c < nc; ++c) {
    int lhs = testing::Uniform(rng, -1, nv - 1);
    int rhs = testing::Uniform(rng, -1, nv - 1);
    if (lhs == rhs) continue;
    Rational bound(testing::Uniform(rng, -6, 6), testing::Uniform(rng, 1, 3));
    sys.constraints.push_back({lhs, rhs, bound, testing::Uniform(rng, 0, 1) == 1, 'A', 0});
  }
  return sys;
}

}  // namespace

TEST_CASE("constraints of one FT send and its reader, rule by rule") {
  PisemModel m = SendReadModel();
  REQUIRE(ValidateModel(m).empty());
  ImModel im = SynthesizeIm(m, SendReadSelections());
  TimingSystem sys = GenerateLtm(m, im, {});
  std::vector<std::string> want = {
      // Both hosts end where their successor starts, so both are split.
      "A1: alpha(P@3/2) - beta(P@1) <= 0", "A1: beta(P@1) - alpha(P@3/2) <= 0",
      "A2: alpha(P@1) <= 0", "A2: alpha(P@1) >= 0",
      "A3: beta(P@3/2) <= 40", "A3: beta(P@3/2) >= 40",
      "A5: alpha(P@1) - beta(P@1) < -1", "A4: alpha(P@3/2) - beta(P@3/2) < -1",
      "A1: alpha(Q@3/2) - beta(Q@1) <= 0", "A1: beta(Q@1) - alpha(Q@3/2) <= 0",
      "A2: alpha(Q@1) <= 0", "A2: alpha(Q@1) >= 0",
      "A3: beta(Q@3/2) <= 50", "A3: beta(Q@3/2) >= 50",
      "A5: alpha(Q@1) - beta(Q@1) < -1", "A4: alpha(Q@3/2) - beta(Q@3/2) < -1",
      "A0: beta(P@3/2) < 97",
      // Fwd happens before Q starts t1: after Q@1, Q@3/2 and t2.
      "B10: beta(P@3/2) - alpha(Q@1) < 0", "B11: beta(P@3/2) - alpha(Q@1) < -3",
      "B10: beta(P@3/2) - alpha(Q@3/2) < 0", "B11: beta(P@3/2) - alpha(Q@3/2) < -3",
      "B7: beta(P@3/2) < 50", "B8: beta(P@3/2) < 47",
      // Use happens with P at s2: after s1 and Fwd, before s2.
      "B9: beta(P@1) - alpha(Q@3/2) < 0", "B9: beta(P@3/2) - alpha(Q@3/2) < 0",
      "B7: beta(Q@3/2) < 40",
      "C12: beta(P@3/2) - alpha(Q@3/2) < -3",
  };
  for (const char* v : {"alpha(P@3/2)", "beta(P@3/2)", "alpha(P@1)", "beta(P@1)", "alpha(Q@3/2)",
                        "beta(Q@3/2)", "alpha(Q@1)", "beta(Q@1)"}) {
    want.push_back(std::string("A0: ") + v + " >= 0");
    want.push_back(std::string("A0: ") + v + " < 100");
  }
  std::sort(want.begin(), want.end());
  CHECK(Lines(sys) == want);

  // Use must run before s2 starts at 40 yet after Fwd's delivery past 43.
  LtmSolution sol = SolveLtm(sys);
  CHECK_FALSE(sol.feasible);
  CHECK(IsContradiction(sys, sol.blocking));
}

TEST_CASE("gaps after both hosts make the system feasible") {
  PisemModel m = GappedModel();
  ImModel im = SynthesizeIm(m, SendReadSelections());
  TimingSystem sys = GenerateLtm(m, im, {});
  LtmSolution sol = SolveLtm(sys);
  REQUIRE(sol.feasible);
  CHECK(FirstViolated(sys, sol.values) == -1);
  PisemModel timed = ApplyTiming(m, im, sys, sol.values);
  CHECK(ValidateModel(timed).empty());
  REQUIRE(timed.processes[0].actions.size() == 3);
  const TimedAction& fwd = timed.processes[0].actions[1];
  CHECK(fwd.release == sol.values[sys.Find("alpha(P@3/2)")]);
  CHECK(fwd.deadline == sol.values[sys.Find("beta(P@3/2)")]);
  CHECK(timed.processes[0].actions[2].release == Rational(60));
}

TEST_CASE("no FT actions means no constraints and an unchanged model") {
  SystemSpec spec = LoadSpec(std::string(FTSYNTH_MODELS_DIR) + "/two_process.json");
  ImModel im = SynthesizeIm(spec.model, {});
  TimingSystem sys = GenerateLtm(spec.model, im, {});
  CHECK(sys.variables.empty());
  CHECK(sys.constraints.empty());
  LtmSolution sol = SolveLtm(sys);
  CHECK(sol.feasible);
  SystemSpec out = spec;
  out.model = ApplyTiming(spec.model, im, sys, sol.values);
  CHECK(DumpSpec(out) == DumpSpec(spec));
}

TEST_CASE("a lone strict lower bound solves") {
  TimingSystem sys;
  sys.period = Rational(10);
  sys.variables.push_back({TimingVariable::kRelease, 0, Rational(1), "x"});
  sys.constraints.push_back({-1, 0, Rational(0), true, 'A', 0});  // 0 - x < 0
  LtmSolution sol = SolveLtm(sys);
  REQUIRE(sol.feasible);
  CHECK(sol.values[0] > Rational(0));
  CHECK(DumpAssignment(sys, sol.values).find("x = ") == 0);
}

TEST_CASE("two stacked unit actions do not fit a unit window") {
  TimingSystem sys;
  sys.period = Rational(10);
  for (const char* n : {"a1", "b1", "a2", "b2"}) sys.variables.push_back({TimingVariable::kRelease, 0, Rational(1), n});
  sys.constraints = {
      {-1, 0, Rational(0), false, 'A', 0},   // a1 >= 0
      {3, -1, Rational(1), false, 'A', 3},   // b2 <= 1
      {1, 2, Rational(0), false, 'A', 1},    // b1 <= a2
      {0, 1, Rational(-1), true, 'A', 4},    // b1 - a1 > 1
      {2, 3, Rational(-1), true, 'A', 4},    // b2 - a2 > 1
  };
  LtmSolution sol = SolveLtm(sys);
  CHECK_FALSE(sol.feasible);
  CHECK(IsContradiction(sys, sol.blocking));
  CHECK(sol.blocking.size() == 5);
}

TEST_CASE("random difference systems: solutions satisfy, refusals are certified") {
  std::mt19937_64 rng(23);
  int feasible = 0;
  for (int round = 0; round < 2000; ++round) {
    TimingSystem sys = RandomSystem(rng);
    LtmSolution sol = SolveLtm(sys);
    if (sol.feasible) {
      ++feasible;
      REQUIRE(sol.values.size() == sys.variables.size());
      CHECK(FirstViolated(sys, sol.values) == -1);
    } else {
      CHECK(IsContradiction(sys, sol.blocking));
    }
  }
  CHECK(feasible > 200);
  CHECK(feasible < 1800);
}

TEST_CASE("random synthesized models time exactly and refine") {
  std::mt19937_64 rng(31);
  int solved = 0;
  for (int round = 0; round < 150; ++round) {
    PisemModel m = testing::RandomPisem(rng);
    std::vector<FtSelection> sel = testing::RandomSelections(rng, m);
    ImModel im = SynthesizeIm(m, sel);
    TimingSystem sys = GenerateLtm(m, im, {});
    LtmSolution sol = SolveLtm(sys);
    if (!sol.feasible) {
      CHECK(IsContradiction(sys, sol.blocking));
      continue;
    }
    ++solved;
    CHECK(FirstViolated(sys, sol.values) == -1);
    PisemModel timed = ApplyTiming(m, im, sys, sol.values);
    CHECK(ValidateModel(timed).empty());
    for (std::size_t i = 0; i < m.processes.size(); ++i) {
      const ImProcess& p = im.processes[i];
      REQUIRE(timed.processes[i].actions.size() == p.actions.size());
      for (std::size_t k = 0; k < p.actions.size(); ++k) {
        const ImAction& a = p.actions[k];
        const TimedAction& t = timed.processes[i].actions[k];
        int alpha = sys.Find("alpha(" + p.name + "@" + ToString(a.index) + ")");
        int beta = sys.Find("beta(" + p.name + "@" + ToString(a.index) + ")");
        if (a.inserted) {
          REQUIRE(alpha >= 0);
          CHECK(t.release == sol.values[alpha]);
          CHECK(t.deadline == sol.values[beta]);
          CHECK(t.deadline - t.release > Rational(1));
        } else if (alpha < 0) {
          const TimedAction& o = m.processes[i].actions[static_cast<std::size_t>(a.index.numerator()) - 1];
          CHECK(t.release == o.release);
          CHECK(t.deadline == o.deadline);
        } else {
          // A split host keeps its release and shrinks from the right.
          const TimedAction& o = m.processes[i].actions[static_cast<std::size_t>(a.index.numerator()) - 1];
          CHECK(t.release == o.release);
          CHECK(t.deadline < o.deadline);
        }
      }
    }
  }
  CHECK(solved > 20);
}

TEST_CASE("refinement catches an inserted action moved out of its box") {
  PisemModel m = GappedModel();
  ImModel im = SynthesizeIm(m, SendReadSelections());
  TimingSystem sys = GenerateLtm(m, im, {});
  LtmSolution sol = SolveLtm(sys);
  REQUIRE(sol.feasible);
  PisemModel timed = ApplyTiming(m, im, sys, sol.values);
  CHECK_NOTHROW(CheckRefinement(timed, im));
  // Use scheduled after s2 started no longer sees P at 2.
  timed.processes[1].actions[1].release = Rational(61);
  timed.processes[1].actions[1].deadline = Rational(63);
  try {
    CheckRefinement(timed, im);
    FAIL("expected RefinementViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRefinementViolation);
  }
}

TEST_CASE("WCET comes from the table, then the pattern") {
  PisemModel m = SendReadModel();
  std::vector<FtSelection> sel = SendReadSelections();
  sel[1].chosen.wcet.reset();
  ImModel im = SynthesizeIm(m, sel);
  try {
    GenerateLtm(m, im, {});
    FAIL("expected MissingWcet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingWcet);
    CHECK(std::string(e.what()).find("Use") != std::string::npos);
  }
  WcetTable t = ParseWcetTable(R"({"format":"ftsynth/wcet/1","actions":{"Use":"2"},
      "messages":[{"network":"n1","index":1,"wcmtt":"5"}]})", m);
  TimingSystem sys = GenerateLtm(m, im, t);
  auto lines = Lines(sys);
  CHECK(std::count(lines.begin(), lines.end(), "A4: alpha(Q@3/2) - beta(Q@3/2) < -2") == 1);
  CHECK(std::count(lines.begin(), lines.end(), "C12: beta(P@3/2) - alpha(Q@3/2) < -5") == 1);
}

TEST_CASE("selection documents round-trip") {
  PisemModel m = SendReadModel();
  std::vector<FtSelection> sel = SendReadSelections();
  std::string text = DumpSelections(sel, m);
  std::vector<FtSelection> back = ParseSelections(text, m);
  REQUIRE(back.size() == sel.size());
  for (std::size_t k = 0; k < sel.size(); ++k) {
    CHECK(back[k].process == sel[k].process);
    CHECK(back[k].index == sel[k].index);
    CHECK(back[k].tuple == sel[k].tuple);
    CHECK(back[k].chosen.wcet == sel[k].chosen.wcet);
    CHECK(back[k].chosen.pattern.Describe() == sel[k].chosen.pattern.Describe());
  }
  CHECK(DumpSelections(back, m) == text);
}

TEST_CASE("a tuple outside the slot box is rejected") {
  PisemModel m = SendReadModel();
  std::vector<FtSelection> sel = SendReadSelections();
  sel[1].tuple[0] = Rational(1, 2);
  CHECK_THROWS_AS(SynthesizeIm(m, sel), Error);
}

TEST_CASE("CAN reserved-priority conditions") {
  CanBusProfile safe;
  safe.reserved_priority = 8;
  safe.reserved_size = 8;
  safe.existing = {{1, 8}, {3, 4}, {12, 8}};
  safe.ft_messages = {{8, 8}, {5, 2}};
  CHECK(CheckCanConditions(safe).safe);

  auto conditions = [](const CanBusProfile& p) {
    std::vector<int> out;
    for (const auto& v : CheckCanConditions(p).violations) out.push_back(v.condition);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  CanBusProfile taken = safe;
  taken.existing.push_back({8, 2});
  CHECK(conditions(taken) == std::vector<int>{1});
  CanBusProfile small = safe;
  small.reserved_size = 4;
  CHECK(conditions(small) == std::vector<int>{2, 3});
  CanBusProfile low = safe;
  low.ft_messages.push_back({9, 1});
  CHECK(conditions(low) == std::vector<int>{3});

  std::mt19937_64 rng(3);
  for (const CanBusProfile& base : {safe, taken, small, low}) {
    std::vector<int> want = conditions(base);
    for (int s = 0; s < 250; ++s) {
      CanBusProfile p = base;
      std::shuffle(p.existing.begin(), p.existing.end(), rng);
      std::shuffle(p.ft_messages.begin(), p.ft_messages.end(), rng);
      CHECK(conditions(p) == want);
      CHECK(CheckCanConditions(p).safe == want.empty());
    }
  }
}
