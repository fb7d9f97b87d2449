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

#include "ftsynth/ftsynth.h"

#include <array>
#include <exception>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ftsynth/error.hpp"
#include "ftsynth/executor.hpp"
#include "ftsynth/game.hpp"
#include "ftsynth/model_io.hpp"
#include "ftsynth/pipeline.hpp"
#include "ftsynth/solver.hpp"
#include "ftsynth/timing.hpp"

struct ftsynth_model {
  ftsynth::SystemSpec spec;
};

struct ftsynth_result {
  std::array<std::string, FTSYNTH_TEXT_COUNT> text;
};

namespace {

using namespace ftsynth;
using json = nlohmann::ordered_json;

thread_local std::string g_error;
thread_local std::string g_kind;

ftsynth_status StatusOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kInvalidModel:
    case ErrorCode::kUndeclaredVariable:
    case ErrorCode::kDuplicateMessageIndex:
    case ErrorCode::kEmptyCandidateSet:
    case ErrorCode::kNotConsecutive:
    case ErrorCode::kMalformedClause:
    case ErrorCode::kMalformedDimacs:
    case ErrorCode::kPartialStrategy:
    case ErrorCode::kMissingWcet:
    case ErrorCode::kBackendUnavailable:
    case ErrorCode::kUsage:
    case ErrorCode::kIo:
      return FTSYNTH_INPUT;
    case ErrorCode::kStateCapExceeded:
    case ErrorCode::kEncodingTooLarge:
      return FTSYNTH_CAP;
    default:
      return FTSYNTH_NEGATIVE;
  }
}

template <typename F>
ftsynth_status Guard(F&& body) {
  g_error.clear();
  g_kind.clear();
  try {
    return body();
  } catch (const Error& e) {
    g_error = e.what();
    g_kind = ErrorCodeName(e.code());
    return StatusOf(e.code());
  } catch (const std::exception& e) {
    g_error = e.what();
    g_kind = "Internal";
    return FTSYNTH_NEGATIVE;
  }
}

void Need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::kUsage, std::string(what) + " must not be null");
}

ftsynth_result* Emit(ftsynth_result** out) {
  *out = new ftsynth_result();
  return *out;
}

SolveOptions SolveOptionsOf(const ftsynth_options& o) {
  SolveOptions so;
  switch (o.solver) {
    case FTSYNTH_SOLVER_SEARCH: so.kind = SolverKind::kSearch; break;
    case FTSYNTH_SOLVER_SAT: so.kind = SolverKind::kSatSimultaneous; break;
    case FTSYNTH_SOLVER_SAT_INTERLEAVED: so.kind = SolverKind::kSatInterleaved; break;
    default: throw Error(ErrorCode::kUsage, "unknown solver");
  }
  if (o.depth < 0) throw Error(ErrorCode::kUsage, "depth must be positive");
  so.depth = o.depth;
  so.sat.seed = o.seed;
  if (o.external_solver) so.external_command = o.external_solver;
  if (o.dimacs_path) so.dimacs_path = o.dimacs_path;
  return so;
}

ftsynth_status Fail(const std::string& message) {
  g_error = message;
  return FTSYNTH_NEGATIVE;
}

}  // namespace

extern "C" {

const char* ftsynth_version(void) { return "1.0.0"; }
const char* ftsynth_last_error(void) { return g_error.c_str(); }
const char* ftsynth_last_error_kind(void) { return g_kind.c_str(); }

void ftsynth_options_init(ftsynth_options* options) {
  if (!options) return;
  *options = ftsynth_options{};
  options->solver = FTSYNTH_SOLVER_SEARCH;
  options->state_cap = 2'000'000;
  options->seed = 1;
  options->simulate = 1;
}

ftsynth_status ftsynth_model_parse(const char* text, ftsynth_model** out) {
  return Guard([&] {
    Need(text, "json");
    Need(out, "out");
    auto m = std::make_unique<ftsynth_model>();
    m->spec = ParseSpec(text);
    *out = m.release();
    return FTSYNTH_OK;
  });
}

ftsynth_status ftsynth_model_load(const char* path, ftsynth_model** out) {
  return Guard([&] {
    Need(path, "path");
    Need(out, "out");
    auto m = std::make_unique<ftsynth_model>();
    m->spec = LoadSpec(path);
    *out = m.release();
    return FTSYNTH_OK;
  });
}

void ftsynth_model_free(ftsynth_model* model) { delete model; }

ftsynth_status ftsynth_model_set_faults(ftsynth_model* model, const char* text) {
  return Guard([&] {
    Need(model, "model");
    Need(text, "json");
    model->spec.faults = ParseFaults(text, model->spec.model);
    return FTSYNTH_OK;
  });
}

size_t ftsynth_model_process_count(const ftsynth_model* model) {
  return model ? model->spec.model.processes.size() : 0;
}

const char* ftsynth_result_text(const ftsynth_result* result, ftsynth_text which) {
  if (!result || which < 0 || which >= FTSYNTH_TEXT_COUNT) return "";
  return result->text[which].c_str();
}

void ftsynth_result_free(ftsynth_result* result) { delete result; }

ftsynth_status ftsynth_synthesize(const ftsynth_model* model, const char* templates_json,
                                  const ftsynth_options* options, ftsynth_result** out) {
  return Guard([&] {
    Need(model, "model");
    Need(templates_json, "templates");
    Need(out, "out");
    *out = nullptr;
    ftsynth_options o;
    ftsynth_options_init(&o);
    if (options) o = *options;
    const SystemSpec& spec = model->spec;
    TemplatePool pool = ParseTemplates(templates_json, spec.model);
    PipelineOptions po;
    po.solve = SolveOptionsOf(o);
    po.state_cap = o.state_cap;
    po.seed = o.seed;
    po.can_override = o.can_override != 0;
    po.simulate = o.simulate != 0;
    if (o.wcet_json) po.wcet = ParseWcetTable(o.wcet_json, spec.model);
    PipelineResult r = RunPipeline(spec, pool, po);
    ftsynth_result* res = Emit(out);
    res->text[FTSYNTH_TEXT_REPORT] = r.report.Json(o.timings != 0);
    for (const auto& line : r.protocol) res->text[FTSYNTH_TEXT_PROTOCOL] += line + "\n";
    if (r.strategy) res->text[FTSYNTH_TEXT_SELECTION] = DumpSelections(r.selections, spec.model);
    if (!r.ltm.constraints.empty() || r.timed) res->text[FTSYNTH_TEXT_CONSTRAINTS] = r.ltm.Dump();
    if (!r.assignment.empty()) res->text[FTSYNTH_TEXT_ASSIGNMENT] = DumpAssignment(r.ltm, r.assignment);
    if (r.timed) res->text[FTSYNTH_TEXT_MODEL] = DumpSpec({*r.timed, spec.faults, spec.goal});
    if (r.simulation) {
      for (const auto& line : r.simulation->trace) res->text[FTSYNTH_TEXT_TRACE] += line + "\n";
    }
    if (r.report.success) return FTSYNTH_OK;
    const StageReport& last = r.report.stages.back();
    g_error = "stage " + last.name + ": " + last.detail;
    g_kind = ErrorCodeName(r.report.error);
    return StatusOf(r.report.error);
  });
}

ftsynth_status ftsynth_simulate(const ftsynth_model* model, int exhaustive, uint64_t seed, uint64_t state_cap,
                                ftsynth_result** out) {
  return Guard([&] {
    Need(model, "model");
    Need(out, "out");
    *out = nullptr;
    SimOptions so;
    so.mode = exhaustive ? SimOptions::Mode::kExhaustive : SimOptions::Mode::kRandom;
    so.seed = seed;
    if (state_cap > 0) so.state_cap = state_cap;
    const SystemSpec& spec = model->spec;
    SimResult sr = SimulateWithFaults(spec.model, spec.faults, spec.goal, so);
    ftsynth_result* res = Emit(out);
    json j;
    j["verdict"] = sr.always_reached ? "always-reached" : "counterexample";
    j["explored"] = sr.explored;
    res->text[FTSYNTH_TEXT_REPORT] = j.dump(2) + "\n";
    for (const auto& line : sr.trace) res->text[FTSYNTH_TEXT_TRACE] += line + "\n";
    if (sr.always_reached) return FTSYNTH_OK;
    return Fail("goal missed on a fault-adversary play");
  });
}

ftsynth_status ftsynth_ltm(const ftsynth_model* model, const char* selection_json, const char* wcet_json,
                           ftsynth_result** out) {
  return Guard([&] {
    Need(model, "model");
    Need(selection_json, "selection");
    Need(out, "out");
    *out = nullptr;
    const SystemSpec& spec = model->spec;
    std::vector<FtSelection> sel = ParseSelections(selection_json, spec.model);
    WcetTable wcet;
    if (wcet_json) wcet = ParseWcetTable(wcet_json, spec.model);
    ImModel syn = SynthesizeIm(spec.model, sel);
    TimingSystem sys = GenerateLtm(spec.model, syn, wcet);
    LtmSolution sol = SolveLtm(sys);
    ftsynth_result* res = Emit(out);
    res->text[FTSYNTH_TEXT_CONSTRAINTS] = sys.Dump();
    json j;
    j["variables"] = sys.variables.size();
    j["constraints"] = sys.constraints.size();
    j["feasible"] = sol.feasible;
    if (!sol.feasible) {
      json blocking = json::array();
      for (int c : sol.blocking) blocking.push_back(sys.Format(sys.constraints[c]));
      j["blocking"] = std::move(blocking);
      res->text[FTSYNTH_TEXT_REPORT] = j.dump(2) + "\n";
      return Fail("timing constraints are infeasible");
    }
    res->text[FTSYNTH_TEXT_REPORT] = j.dump(2) + "\n";
    res->text[FTSYNTH_TEXT_ASSIGNMENT] = DumpAssignment(sys, sol.values);
    PisemModel timed = ApplyTiming(spec.model, syn, sys, sol.values);
    res->text[FTSYNTH_TEXT_MODEL] = DumpSpec({timed, spec.faults, spec.goal});
    return FTSYNTH_OK;
  });
}

ftsynth_status ftsynth_verify(const char* game_text, const char* strategy_text, ftsynth_result** out) {
  return Guard([&] {
    Need(game_text, "game");
    Need(strategy_text, "strategy");
    Need(out, "out");
    *out = nullptr;
    DistributedGame g = ReadGame(game_text);
    DistributedStrategy s = ReadStrategy(g, strategy_text);
    bool wins = VerifyStrategy(g, s);
    ftsynth_result* res = Emit(out);
    json j;
    j["winning"] = wins;
    res->text[FTSYNTH_TEXT_REPORT] = j.dump(2) + "\n";
    return wins ? FTSYNTH_OK : Fail("strategy does not win from every initial vertex");
  });
}

ftsynth_status ftsynth_solve_game(const char* game_text, const ftsynth_options* options, ftsynth_result** out) {
  return Guard([&] {
    Need(game_text, "game");
    Need(out, "out");
    *out = nullptr;
    ftsynth_options o;
    ftsynth_options_init(&o);
    if (options) o = *options;
    DistributedGame g = ReadGame(game_text);
    SolveOptions so = SolveOptionsOf(o);
    SolveResult r = SolveGame(g, so);
    ftsynth_result* res = Emit(out);
    json j;
    j["status"] = SolveStatusName(r.status);
    j["solver"] = SolverKindName(so.kind);
    j["vertices"] = g.size();
    if (so.kind == SolverKind::kSearch) {
      j["nodes"] = r.nodes;
    } else {
      j["depth"] = r.depth;
      j["cnf_variables"] = r.cnf_variables;
      j["cnf_clauses"] = r.cnf_clauses;
    }
    if (!r.detail.empty()) j["detail"] = r.detail;
    res->text[FTSYNTH_TEXT_REPORT] = j.dump(2) + "\n";
    if (r.strategy) {
      res->text[FTSYNTH_TEXT_STRATEGY] = WriteStrategy(g, *r.strategy);
      return FTSYNTH_OK;
    }
    if (so.kind == SolverKind::kSearch && r.status == SolveStatus::kUnknown) {
      g_error = "search budget exhausted";
      g_kind = ErrorCodeName(ErrorCode::kStateCapExceeded);
      return FTSYNTH_CAP;
    }
    return Fail(std::string("no strategy: ") + SolveStatusName(r.status));
  });
}

ftsynth_status ftsynth_reduce3sat(const char* dimacs_text, ftsynth_result** out) {
  return Guard([&] {
    Need(dimacs_text, "dimacs");
    Need(out, "out");
    *out = nullptr;
    Cnf cnf = ReadDimacs(dimacs_text);
    std::vector<Clause3> clauses;
    for (const auto& c : cnf.clauses) {
      if (c.empty() || c.size() > 3) {
        throw Error(ErrorCode::kMalformedClause, "clauses must have one to three literals");
      }
      Clause3 k{c[0], c.size() > 1 ? c[1] : c[0], c.size() > 2 ? c[2] : (c.size() > 1 ? c[1] : c[0])};
      clauses.push_back(k);
    }
    Reduction3Sat red = Reduce3Sat(cnf.variables, clauses);
    ftsynth_result* res = Emit(out);
    res->text[FTSYNTH_TEXT_GAME] = WriteGame(red.game);
    json j;
    j["variables"] = red.variables;
    j["clauses"] = red.clauses;
    json sizes = json::array();
    for (const auto& l : red.game.locals) sizes.push_back(l.size());
    j["local_vertices"] = std::move(sizes);
    j["product_vertices"] = red.game.size();
    res->text[FTSYNTH_TEXT_REPORT] = j.dump(2) + "\n";
    return FTSYNTH_OK;
  });
}

}  // extern "C"
