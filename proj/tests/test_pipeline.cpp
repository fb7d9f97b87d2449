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

#include <chrono>

#include "fixtures.hpp"
#include "ftsynth/error.hpp"
#include "ftsynth/pipeline.hpp"
#include "ftsynth/translate.hpp"

using namespace ftsynth;
using testing::LoadPool;
using testing::Regression;

TEST_CASE("resend pool synthesizes the request/response protocol") {
  SystemSpec spec = Regression();
  auto start = std::chrono::steady_clock::now();
  PipelineResult r = RunPipeline(spec, LoadPool(spec, "pool_resend.json"), {});
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  REQUIRE_MESSAGE(r.report.success, r.report.Json());
  CHECK(seconds < 10);
  CHECK(r.protocol == testing::ResendProtocol());
  CHECK(r.ltm.variables.size() == 14);
  CHECK(FirstViolated(r.ltm, r.assignment) == -1);
  CHECK(testing::CheckReferenceInstance(r.ltm) == "");
  REQUIRE(r.simulation.has_value());
  CHECK(r.simulation->always_reached);
  REQUIRE(r.timed.has_value());
  CHECK(ValidateModel(*r.timed).empty());
  CHECK(r.timed->processes[0].actions.size() == 6);
  CHECK(r.timed->processes[1].actions.size() == 5);
}

TEST_CASE("inverted pool places every FT action of A at B=1") {
  SystemSpec spec = Regression();
  TemplatePool pool = LoadPool(spec, "pool_inverted.json");
  PipelineResult r = RunPipeline(spec, pool, {});
  REQUIRE_MESSAGE(r.report.success, r.report.Json());
  int on_a = 0;
  for (const FtSelection& s : r.selections) {
    if (s.process != 0) continue;
    ++on_a;
    CHECK(s.tuple[1] == Rational(1));
  }
  CHECK(on_a == 3);
  SymbolicGame sdg = BuildSdg(InsertFtSlots(AbstractTiming(spec.model), pool), spec.faults, spec.goal);
  ExpandedGame eg = ExpandSdg(sdg);
  REQUIRE(r.strategy.has_value());
  CHECK(VerifyStrategy(eg.game, *r.strategy));
  SimOptions so;
  so.mode = SimOptions::Mode::kExhaustive;
  so.periods = 2;
  CHECK(SimulateWithFaults(*r.timed, spec.faults, spec.goal, so).always_reached);
}

TEST_CASE("an empty pool fails at the solve stage") {
  SystemSpec spec = Regression();
  PipelineResult r = RunPipeline(spec, {}, {});
  CHECK_FALSE(r.report.success);
  CHECK(r.report.failed_stage == "solve");
  CHECK(r.report.error == ErrorCode::kSynthesisFailed);
  CHECK_FALSE(r.strategy.has_value());
}

TEST_CASE("a violated CAN profile stops the game stage unless overridden") {
  SystemSpec spec = Regression();
  spec.model.networks[0].can->ft_messages.push_back({9, 8});
  TemplatePool pool = LoadPool(spec, "pool_resend.json");
  PipelineResult r = RunPipeline(spec, pool, {});
  CHECK(r.report.failed_stage == "game");
  CHECK(r.report.error == ErrorCode::kCanCheckFailed);
  PipelineOptions o;
  o.can_override = true;
  CHECK(RunPipeline(spec, pool, o).report.success);
}

TEST_CASE("a tiny state cap is reported as such") {
  SystemSpec spec = Regression();
  PipelineOptions o;
  o.state_cap = 50;
  PipelineResult r = RunPipeline(spec, LoadPool(spec, "pool_resend.json"), o);
  CHECK(r.report.failed_stage == "expand");
  CHECK(r.report.error == ErrorCode::kStateCapExceeded);
}

TEST_CASE("runs are reproducible") {
  SystemSpec spec = Regression();
  TemplatePool pool = LoadPool(spec, "pool_resend.json");
  PipelineResult a = RunPipeline(spec, pool, {});
  PipelineResult b = RunPipeline(spec, pool, {});
  CHECK(a.report.Json() == b.report.Json());
  CHECK(a.protocol == b.protocol);
  CHECK(a.assignment == b.assignment);
  CHECK(a.report.Json().find("millis") == std::string::npos);
}

TEST_CASE("the SAT back end also synthesizes the resend pool") {
  SystemSpec spec = Regression();
  PipelineOptions o;
  o.solve.kind = SolverKind::kSatSimultaneous;
  PipelineResult r = RunPipeline(spec, LoadPool(spec, "pool_resend.json"), o);
  REQUIRE_MESSAGE(r.report.success, r.report.Json());
  CHECK(FirstViolated(r.ltm, r.assignment) == -1);
  CHECK(r.simulation->always_reached);
}
