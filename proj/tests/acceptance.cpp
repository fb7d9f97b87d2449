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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "ftsynth/can.hpp"
#include "ftsynth/error.hpp"
#include "ftsynth/game.hpp"
#include "ftsynth/pipeline.hpp"
#include "ftsynth/solver.hpp"
#include "generators.hpp"

using namespace ftsynth;
namespace t = ftsynth::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

Outcome Fail(std::string why) { return {false, std::move(why)}; }

Outcome AbstractionGolden() {
  PcBoundsMaps maps = GeneratePreconditionPc(t::Regression().model);
  const PcBounds& a1 = maps.actions[0][0];
  if (a1.low != std::vector<int>{1, 1} || a1.up != std::vector<int>{2, 2}) {
    return Fail("first action of A has low/up other than [1,1]/[2,2]");
  }
  return {true, "first action of A: low [1,1], up [2,2]"};
}

Outcome ResendEndToEnd() {
  SystemSpec spec = t::Regression();
  auto start = std::chrono::steady_clock::now();
  PipelineResult r = RunPipeline(spec, t::LoadPool(spec, "pool_resend.json"), {});
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!r.report.success) return Fail("pipeline failed at " + r.report.failed_stage);
  if (r.protocol != t::ResendProtocol()) return Fail("unexpected protocol, first line " + r.protocol.front());
  if (FirstViolated(r.ltm, r.assignment) != -1) return Fail("assignment violates the timing system");
  std::string ref = t::CheckReferenceInstance(r.ltm);
  if (!ref.empty()) return Fail("reference timing instance: " + ref);
  if (!r.simulation || !r.simulation->always_reached) return Fail("timed model misses the goal");
  if (seconds > 10) return Fail("took " + std::to_string(seconds) + " s");
  char buf[160];
  std::snprintf(buf, sizeof buf, "6 FT actions, %zu timing constraints, reference instance feasible, %.2f s",
                r.ltm.constraints.size(), seconds);
  return {true, buf};
}

Outcome InvertedPool() {
  SystemSpec spec = t::Regression();
  TemplatePool pool = t::LoadPool(spec, "pool_inverted.json");
  PipelineResult r = RunPipeline(spec, pool, {});
  if (!r.report.success) return Fail("pipeline failed at " + r.report.failed_stage);
  for (const FtSelection& s : r.selections) {
    if (s.process == 0 && s.tuple[1] != Rational(1)) return Fail("an FT action of A is not at B=1");
  }
  ExpandedGame eg = ExpandSdg(BuildSdg(InsertFtSlots(AbstractTiming(spec.model), pool), spec.faults, spec.goal));
  if (!VerifyStrategy(eg.game, *r.strategy)) return Fail("strategy does not verify");
  SimOptions so;
  so.periods = 2;
  SimResult sim = SimulateWithFaults(*r.timed, spec.faults, spec.goal, so);
  if (!sim.always_reached) return Fail("exhaustive simulation found a counterexample");
  return {true, "A's FT actions at B=1, strategy verified, " + std::to_string(sim.explored) + " states simulated"};
}

Outcome ThreeSat() {
  std::mt19937_64 rng(2024);
  int sat = 0;
  for (int k = 0; k < 200; ++k) {
    int n = t::Uniform(rng, 1, k % 2 ? 2 : 6);
    int m = t::Uniform(rng, std::min(10, 2 * n), 10);
    auto f = t::RandomCnf3(rng, n, m);
    std::vector<std::vector<int>> cnf;
    for (const auto& c : f) cnf.push_back({c[0], c[1], c[2]});
    bool truth = t::BruteForceSat(n, cnf);
    Reduction3Sat red = Reduce3Sat(n, f);
    DistributedGame small = RestrictToReachable(red.game);
    SolveResult search = SolveGame(small, {});
    SolveOptions so;
    so.kind = SolverKind::kSatSimultaneous;
    so.depth = small.size();
    SolveResult bmc = SolveGame(small, so);
    bool won_search = search.status == SolveStatus::kWon;
    bool won_sat = bmc.status == SolveStatus::kWon;
    if (search.status == SolveStatus::kUnknown) return Fail("search gave up on instance " + std::to_string(k));
    if (won_search != truth || won_sat != truth) {
      return Fail("instance " + std::to_string(k) + ": truth table " + std::to_string(truth) + ", search " +
                  std::to_string(won_search) + ", SAT " + std::to_string(won_sat));
    }
    sat += truth;
  }
  return {true, "200 formulas agree (" + std::to_string(sat) + " satisfiable)"};
}

Outcome RandomGames() {
  std::mt19937_64 rng(77);
  int won = 0;
  int brute_checked = 0;
  int largest = 0;
  for (int k = 0; k < 500; ++k) {
    t::GameShape shape;
    shape.max_components = 5;
    shape.max_control = 4;
    shape.max_env = 3;
    shape.semantics = k % 3 == 2 ? Semantics::kInterleaved : Semantics::kSimultaneous;
    DistributedGame g = t::RandomGame(rng, shape);
    if (g.size() > 2000) {
      --k;
      continue;
    }
    largest = std::max(largest, g.size());
    SolveResult s = SolveGame(g, {});
    if (s.status == SolveStatus::kUnknown) return Fail("search gave up on game " + std::to_string(k));
    if (s.strategy && !VerifyStrategy(g, *s.strategy)) return Fail("game " + std::to_string(k) + ": bad strategy");
    won += s.status == SolveStatus::kWon;
    if (t::ControlVertexCount(g) <= 12) {
      ++brute_checked;
      bool brute = EnumerateStrategies(g).has_value();
      if (brute != (s.status == SolveStatus::kWon)) {
        return Fail("game " + std::to_string(k) + ": search disagrees with enumeration");
      }
    }
  }
  return {true, "500 games up to " + std::to_string(largest) + " vertices, " + std::to_string(won) + " won, " +
                    std::to_string(brute_checked) + " cross-checked by enumeration"};
}

Outcome Soundness() {
  std::mt19937_64 rng(4242);
  int firings = 0;
  for (int k = 0; k < 100; ++k) {
    PisemModel m = t::RandomPisem(rng);
    if (!ValidateModel(m).empty()) return Fail("generator produced an invalid model");
    int checked = 0;
    std::string why = t::CheckAbstractionSound(m, &checked);
    if (!why.empty()) return Fail("model " + std::to_string(k) + ": " + why);
    firings += checked;
  }
  return {true, "100 models, " + std::to_string(firings) + " firings inside their boxes"};
}

Outcome TimingPipelines() {
  std::mt19937_64 rng(909);
  int feasible = 0;
  int infeasible = 0;
  // Random tuples often contradict the windows; keep drawing until 100
  // systems are feasible, certifying every refusal on the way.
  while (feasible < 100) {
    if (infeasible > 20000) return Fail("too few feasible instances");
    PisemModel m = t::RandomPisem(rng);
    std::vector<FtSelection> sel = t::RandomSelections(rng, m);
    if (sel.empty()) continue;
    ImModel im = SynthesizeIm(m, sel);
    TimingSystem sys = GenerateLtm(m, im, {});
    LtmSolution sol = SolveLtm(sys);
    if (!sol.feasible) {
      Rational sum(0);
      bool strict = false;
      std::vector<int> heads;
      std::vector<int> tails;
      for (int c : sol.blocking) {
        sum += sys.constraints[c].bound;
        strict |= sys.constraints[c].strict;
        heads.push_back(sys.constraints[c].lhs);
        tails.push_back(sys.constraints[c].rhs);
      }
      std::sort(heads.begin(), heads.end());
      std::sort(tails.begin(), tails.end());
      if (sol.blocking.empty() || heads != tails || sum > Rational(0) || (sum == Rational(0) && !strict)) {
        return Fail("infeasible system without a contradictory cycle");
      }
      ++infeasible;
      continue;
    }
    ++feasible;
    if (FirstViolated(sys, sol.values) != -1) return Fail("solution violates its own system");
    PisemModel timed = ApplyTiming(m, im, sys, sol.values);  // validates and checks refinement
    for (std::size_t i = 0; i < im.processes.size(); ++i) {
      const ImProcess& p = im.processes[i];
      for (std::size_t a = 0; a < p.actions.size(); ++a) {
        if (!p.actions[a].inserted) continue;
        std::string at = p.name + "@" + ToString(p.actions[a].index) + ")";
        if (timed.processes[i].actions[a].release != sol.values[sys.Find("alpha(" + at)] ||
            timed.processes[i].actions[a].deadline != sol.values[sys.Find("beta(" + at)]) {
          return Fail("timed window of " + at + " differs from the assignment");
        }
      }
    }
  }
  return {true, std::to_string(feasible) + " timed and refined, " + std::to_string(infeasible) +
                    " infeasible with a blocking cycle"};
}

Outcome CanClassification() {
  CanBusProfile safe;
  safe.reserved_priority = 8;
  safe.reserved_size = 8;
  safe.existing = {{1, 8}, {3, 4}, {12, 8}};
  safe.ft_messages = {{8, 8}, {5, 2}};
  CanBusProfile taken = safe;
  taken.existing.push_back({8, 2});
  CanBusProfile low = safe;
  low.ft_messages.push_back({9, 1});
  auto classify = [](const CanBusProfile& p) {
    CanVerdict v = CheckCanConditions(p);
    if (v.safe) return 0;
    return v.violations.front().condition;
  };
  if (classify(safe) != 0 || classify(taken) != 1 || classify(low) != 3) return Fail("misclassified profile");
  std::mt19937_64 rng(8);
  for (int s = 0; s < 1000; ++s) {
    const CanBusProfile& base = s % 3 == 0 ? safe : s % 3 == 1 ? taken : low;
    CanBusProfile p = base;
    std::shuffle(p.existing.begin(), p.existing.end(), rng);
    std::shuffle(p.ft_messages.begin(), p.ft_messages.end(), rng);
    if (classify(p) != classify(base)) return Fail("verdict changed under message reordering");
  }
  return {true, "safe / condition 1 / condition 3 classified, stable over 1000 shuffles"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"abstraction golden case", AbstractionGolden},
      {"resend pool end to end", ResendEndToEnd},
      {"inverted pool", InvertedPool},
      {"3SAT reduction agreement", ThreeSat},
      {"random distributed games", RandomGames},
      {"abstraction soundness", Soundness},
      {"timing restoration", TimingPipelines},
      {"CAN conditions", CanClassification},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = Fail(std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
