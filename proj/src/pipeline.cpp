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

#include "ftsynth/pipeline.hpp"

#include <chrono>

#include <json.hpp>

#include "ftsynth/error.hpp"
#include "ftsynth/translate.hpp"

namespace ftsynth {

std::string RunReport::Json(bool timings) const {
  nlohmann::ordered_json j;
  j["success"] = success;
  j["verdict"] = verdict;
  if (!success) j["failed_stage"] = failed_stage;
  auto& arr = j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json e;
    e["name"] = s.name;
    e["ok"] = s.ok;
    if (timings) e["millis"] = s.millis;
    for (const auto& [k, v] : s.facts) e[k] = v;
    if (!s.detail.empty()) e["detail"] = s.detail;
    arr.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::vector<FtSelection> SelectionsOf(const SymbolicGame& sdg, const ExpandedGame& eg,
                                      const DistributedStrategy& strategy) {
  std::vector<FtSelection> out;
  for (const auto& s : SelectedChoices(sdg, eg, strategy)) {
    const ImAction* a = sdg.im.processes[s.process].Find(s.position);
    if (!a || !a->inserted) continue;
    out.push_back({s.process, s.position, a->candidates.at(s.choice->candidate), s.choice->tuple});
  }
  return out;
}

namespace {

class Stages {
 public:
  explicit Stages(RunReport& r) : report_(r) {}

  template <typename F>
  bool Run(const std::string& name, F&& body) {
    StageReport s;
    s.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
      body(s);
      s.ok = true;
    } catch (const Error& e) {
      s.detail = e.what();
      report_.error = e.code();
    }
    s.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    bool ok = s.ok;
    report_.stages.push_back(std::move(s));
    if (!ok) {
      report_.failed_stage = name;
      report_.verdict = "failed at " + name;
    }
    return ok;
  }

  StageReport& Last() { return report_.stages.back(); }

 private:
  RunReport& report_;
};

struct Timed {
  ImModel synthesized;
  TimingSystem ltm;
  LtmSolution solution;
};

Timed TimeSelections(const PisemModel& model, const std::vector<FtSelection>& sel, const WcetTable& wcet) {
  Timed t;
  t.synthesized = SynthesizeIm(model, sel);
  t.ltm = GenerateLtm(model, t.synthesized, wcet);
  t.solution = SolveLtm(t.ltm);
  return t;
}


// Inserted receives that fire before every send feeding their variable.
int EarlyReceives(const ImModel& im) {
  int count = 0;
  const int n = static_cast<int>(im.processes.size());
  for (int i = 0; i < n; ++i) {
    for (const auto& a : im.processes[i].actions) {
      const ActionPattern& p = a.candidates.at(0).pattern;
      if (!a.inserted || p.kind != ActionKind::kReceive) continue;
      bool paired = false;
      bool before = false;
      for (int m = 0; m < n; ++m) {
        if (m == i) continue;
        for (const auto& d : im.processes[m].actions) {
          const ActionPattern& dp = d.candidates.at(0).pattern;
          if (dp.kind != ActionKind::kSend || dp.dest != i || dp.remote_var != p.var) continue;
          paired = true;
          before = before || d.index < a.box[m].low;
        }
      }
      if (paired && !before) ++count;
    }
  }
  return count;
}

// Total shortening of split host deadlines.
Rational Deviation(const PisemModel& model, const Timed& t) {
  Rational dev(0);
  for (std::size_t v = 0; v < t.ltm.variables.size(); ++v) {
    const TimingVariable& tv = t.ltm.variables[v];
    if (tv.role != TimingVariable::kDeadline || !IsInteger(tv.index)) continue;
    const TimedAction& host = model.processes[tv.process].actions.at(tv.index.numerator() - 1);
    dev += host.deadline - t.solution.values[v];
  }
  return dev;
}

}  // namespace

PipelineResult RunPipeline(const SystemSpec& spec, const TemplatePool& pool, const PipelineOptions& options) {
  PipelineResult r;
  Stages st(r.report);
  ImModel im;
  SymbolicGame sdg;
  ExpandedGame eg;
  auto fact = [](StageReport& s, const std::string& k, auto v) { s.facts.emplace_back(k, std::to_string(v)); };

  if (!st.Run("abstract", [&](StageReport& s) {
        im = AbstractTiming(spec.model);
        fact(s, "processes", im.processes.size());
      })) {
    return r;
  }
  if (!st.Run("insert", [&](StageReport& s) {
        im = InsertFtSlots(im, pool);
        fact(s, "slots", pool.size());
      })) {
    return r;
  }
  if (!st.Run("game", [&](StageReport& s) {
        sdg = BuildSdg(im, spec.faults, spec.goal, {options.can_override});
        fact(s, "choices", sdg.ChoiceCount());
      })) {
    return r;
  }
  if (!st.Run("expand", [&](StageReport& s) {
        ExpandOptions eo;
        eo.state_cap = options.state_cap;
        eo.semantics = options.solve.kind == SolverKind::kSatInterleaved ? Semantics::kInterleaved
                                                                         : Semantics::kSimultaneous;
        eg = ExpandSdg(sdg, eo);
        fact(s, "vertices", eg.game.size());
        fact(s, "worlds", eg.worlds.size());
      })) {
    return r;
  }

  SolveResult solved;
  struct Ranked {
    DistributedStrategy strategy;
    std::pair<int, Rational> score;
  };
  std::optional<Ranked> best;
  std::size_t ranked = 0;
  if (!st.Run("solve", [&](StageReport& s) {
        SolveOptions so = options.solve;
        so.sat.seed = options.seed;
        // Only strategies whose timing can be restored count. The search keeps
        // going over such leaves and the least intrusive one wins.
        so.accept = [&](const DistributedStrategy& strat) {
          std::optional<std::pair<int, Rational>> score;
          try {
            auto sel = SelectionsOf(sdg, eg, strat);
            Timed t = TimeSelections(spec.model, sel, options.wcet);
            if (t.solution.feasible) score = std::make_pair(EarlyReceives(t.synthesized), Deviation(spec.model, t));
          } catch (const Error&) {
          }
          if (!score) return false;
          if (so.kind != SolverKind::kSearch) return true;
          ++ranked;
          if (!best || *score < best->score) best = Ranked{strat, *score};
          return ranked >= options.max_ranked;
        };
        solved = SolveGame(eg.game, so);
        fact(s, "nodes", solved.nodes);
        if (so.kind != SolverKind::kSearch) {
          fact(s, "cnf_variables", solved.cnf_variables);
          fact(s, "cnf_clauses", solved.cnf_clauses);
          fact(s, "depth", solved.depth);
          fact(s, "rejected", solved.rejected);
        } else {
          fact(s, "ranked", ranked);
        }
        if (so.kind == SolverKind::kSearch && best) {
          if (!VerifyStrategy(eg.game, best->strategy)) {
            throw Error(ErrorCode::kSynthesisFailed, "selected strategy fails verification");
          }
          solved.strategy = best->strategy;
          solved.status = SolveStatus::kWon;
        }
        s.facts.emplace_back("status", SolveStatusName(solved.status));
        if (!solved.strategy) {
          bool cut = so.kind == SolverKind::kSearch && solved.status == SolveStatus::kUnknown;
          throw Error(cut ? ErrorCode::kStateCapExceeded : ErrorCode::kSynthesisFailed,
                      std::string("no strategy (") + SolveStatusName(solved.status) + ")" +
                          (solved.detail.empty() ? "" : ": " + solved.detail));
        }
      })) {
    return r;
  }
  r.strategy = solved.strategy;
  r.selections = SelectionsOf(sdg, eg, *r.strategy);
  for (const auto& s : SelectedChoices(sdg, eg, *r.strategy)) {
    const ImAction* a = sdg.im.processes[s.process].Find(s.position);
    if (!a || !a->inserted) continue;
    r.protocol.push_back(sdg.processes[s.process].name + "@" + ToString(s.position) + " " +
                         DescribeChoice(sdg, s.process, *s.choice));
  }

  if (!st.Run("ltm", [&](StageReport& s) {
        Timed t = TimeSelections(spec.model, r.selections, options.wcet);
        r.synthesized = std::move(t.synthesized);
        r.ltm = std::move(t.ltm);
        fact(s, "variables", r.ltm.variables.size());
        fact(s, "constraints", r.ltm.constraints.size());
        if (!t.solution.feasible) {
          std::string why;
          for (int c : t.solution.blocking) why += "\n  " + r.ltm.Format(r.ltm.constraints[c]);
          throw Error(ErrorCode::kSynthesisFailed, "timing constraints are infeasible:" + why);
        }
        r.assignment = std::move(t.solution.values);
      })) {
    return r;
  }
  if (!st.Run("timing", [&](StageReport&) {
        r.timed = ApplyTiming(spec.model, r.synthesized, r.ltm, r.assignment);
      })) {
    return r;
  }
  if (options.simulate && !st.Run("simulate", [&](StageReport& s) {
        SimOptions so;
        so.seed = options.seed;
        so.state_cap = options.state_cap;
        r.simulation = SimulateWithFaults(*r.timed, spec.faults, spec.goal, so);
        fact(s, "explored", r.simulation->explored);
        if (!r.simulation->always_reached) {
          throw Error(ErrorCode::kSynthesisFailed, "timed model misses the goal under faults");
        }
      })) {
    return r;
  }
  r.report.success = true;
  r.report.verdict = "synthesized";
  return r;
}

}  // namespace ftsynth
