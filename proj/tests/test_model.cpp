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

#include "ftsynth/error.hpp"
#include "ftsynth/executor.hpp"
#include "ftsynth/model_io.hpp"

using namespace ftsynth;

namespace {

SystemSpec TwoProcess() { return LoadSpec(std::string(FTSYNTH_MODELS_DIR) + "/two_process.json"); }

bool HasDiagnostic(const std::vector<Diagnostic>& ds, const std::string& needle) {
  return std::any_of(ds.begin(), ds.end(),
                     [&](const Diagnostic& d) { return d.message.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("rationals parse and print exactly") {
  CHECK(ParseRational("3/2") == Rational(3, 2));
  CHECK(ParseRational("0.25") == Rational(1, 4));
  CHECK(ParseRational("-7") == Rational(-7));
  CHECK(ToString(Rational(9, 4)) == "9/4");
  CHECK(ToString(Rational(6)) == "6");
  CHECK(Floor(Rational(-3, 2)) == Rational(-2));
  CHECK(Ceil(Rational(3, 2)) == Rational(2));
  CHECK_THROWS_AS(ParseRational("1/0"), Error);
  CHECK_THROWS_AS(ParseRational("x"), Error);
}

TEST_CASE("expressions evaluate with precedence") {
  std::vector<std::int64_t> vals{3, 0};
  auto bind = [](std::string_view n) { return n == "a" ? 0 : n == "b" ? 1 : -1; };
  CHECK(Expr::Parse("a + 2 * 3").Bind(bind).Eval(vals) == 9);
  CHECK(Expr::Parse("a == 3 && !b").Bind(bind).Holds(vals));
  CHECK_FALSE(Expr::Parse("a < 3 || b != 0").Bind(bind).Holds(vals));
  CHECK(Expr::Parse("-(a - 5)").Bind(bind).Eval(vals) == 2);
  CHECK(Expr::Parse("").IsTrivialTrue());
  CHECK_THROWS_AS(Expr::Parse("c + 1").Bind(bind), Error);
  CHECK_THROWS_AS(Expr::Parse("a +"), Error);
}

TEST_CASE("regression model validates cleanly") {
  SystemSpec spec = TwoProcess();
  CHECK(spec.model.processes.size() == 2);
  CHECK(spec.model.period == Rational(100));
  CHECK(ValidateModel(spec.model).empty());
}

TEST_CASE("validation reports boundary violations") {
  SystemSpec spec = TwoProcess();
  SUBCASE("deadline equal to period") {
    spec.model.processes[1].actions[1].deadline = 100;
    CHECK(HasDiagnostic(ValidateModel(spec.model), "deadline must be < period"));
  }
  SUBCASE("send completion past period") {
    spec.model.processes[0].actions[1].deadline = 99;
    CHECK(HasDiagnostic(ValidateModel(spec.model), "deadline + WCMTT must be < period"));
  }
  SUBCASE("empty window") {
    spec.model.processes[0].actions[0].release = 40;
    CHECK(HasDiagnostic(ValidateModel(spec.model), "release must be < deadline"));
  }
  SUBCASE("message index out of range") {
    spec.model.processes[0].actions[1].pattern.message_index = 4;
    CHECK(HasDiagnostic(ValidateModel(spec.model), "message index out of range"));
  }
  SUBCASE("undeclared variable") {
    spec.model.processes[0].actions[2].pattern.value = Expr::Parse("ghost");
    CHECK(HasDiagnostic(ValidateModel(spec.model), "ghost"));
  }
}

TEST_CASE("model documents round-trip") {
  SystemSpec spec = TwoProcess();
  std::string text = DumpSpec(spec);
  SystemSpec again = ParseSpec(text);
  CHECK(DumpSpec(again) == text);
  CHECK_THROWS_AS(ParseSpec("{"), Error);
  CHECK_THROWS_AS(ParseSpec(R"({"format":"other","period":"1","processes":[]})"), Error);
}

TEST_CASE("send occupies the network") {
  SystemSpec spec = TwoProcess();
  Executor ex(spec.model, spec.faults);
  PisemConfig c = ex.Initial({1});
  c = ex.Step(c, Move::Of(MoveKind::kExecuteLocal, 0)).config;
  Move adv = Move::Of(MoveKind::kAdvanceTime);
  adv.to = 10;
  CHECK_FALSE(ex.Enabled(c, adv));  // 10 is not the next instant
  c.t = 10;
  StepResult r = ex.Step(c, Move::Of(MoveKind::kSendToNetwork, 0));
  REQUIRE_FALSE(r.blocked);
  const NetworkState& n = r.config.nets[0];
  CHECK(n.occupied);
  CHECK(n.content == 1);
  CHECK(n.index == 1);
  CHECK(n.dest == 1);
  CHECK(ex.layout().Name(n.var) == "B.m");
  CHECK(r.config.next[0] == 3);

  PisemConfig blocked = r.config;
  blocked.next[0] = 2;
  StepResult again = ex.Step(blocked, Move::Of(MoveKind::kSendToNetwork, 0));
  CHECK(again.blocked);
  CHECK(again.config == blocked);
}

TEST_CASE("null-op only advances the program counter") {
  SystemSpec spec = TwoProcess();
  spec.model.processes[0].actions[0].pattern = ActionPattern::NullOp();
  Executor ex(spec.model, spec.faults);
  PisemConfig c = ex.Initial({1});
  PisemConfig d = ex.Step(c, Move::Of(MoveKind::kExecuteLocal, 0)).config;
  CHECK(d.values == c.values);
  CHECK(d.next[0] == 2);
  CHECK(d.t == c.t);
}

TEST_CASE("repeat cycle restores counters and clock") {
  SystemSpec spec = TwoProcess();
  Executor ex(spec.model, spec.faults);
  PisemConfig c = ex.Initial({1});
  c.t = 100;
  c.next = {4, 3};
  c.values[ex.layout().Qualified("B.m_v")] = 1;
  c.values[ex.layout().Qualified("A.outA")] = 1;
  PisemConfig d = ex.Step(c, Move::Of(MoveKind::kRepeatCycle)).config;
  CHECK(d.t == Rational(0));
  CHECK(d.next == std::vector<int>{1, 1});
  CHECK(d.values[ex.layout().Qualified("B.m_v")] == 0);
  CHECK(d.values[ex.layout().Qualified("A.outA")] == 1);
  CHECK(d.period_index == 1);
}

TEST_CASE("illegal moves are rejected") {
  SystemSpec spec = TwoProcess();
  Executor ex(spec.model, spec.faults);
  PisemConfig c = ex.Initial({0});
  CHECK_THROWS_AS(ex.Step(c, Move::Of(MoveKind::kReceive, 1)), Error);
  CHECK_THROWS_AS(ex.Step(c, Move::Of(MoveKind::kProcessMessage, 0)), Error);
  CHECK_THROWS_AS(ex.Step(c, Move::Of(MoveKind::kRepeatCycle)), Error);
}

TEST_CASE("step is deterministic") {
  SystemSpec spec = TwoProcess();
  Executor ex(spec.model, spec.faults);
  PisemConfig c = ex.Initial({1});
  for (int i = 0; i < 40; ++i) {
    auto moves = ex.EnabledMoves(c);
    if (moves.empty()) break;
    const Move& m = moves[i % moves.size()];
    CHECK(ex.Step(c, m).config == ex.Step(c, m).config);
    c = ex.Step(c, m).config;
  }
}

TEST_CASE("fault-free regression model always agrees") {
  SystemSpec spec = TwoProcess();
  FaultModel none;
  SimResult r = SimulateWithFaults(spec.model, none, spec.goal, {});
  CHECK(r.always_reached);
  CHECK(r.explored > 0);
}

TEST_CASE("one message loss breaks the regression model") {
  SystemSpec spec = TwoProcess();
  SimResult r = SimulateWithFaults(spec.model, spec.faults, spec.goal, {});
  REQUIRE_FALSE(r.always_reached);
  bool saw_fault = std::any_of(r.trace.begin(), r.trace.end(), [](const std::string& l) {
    return l.find("fault MsgLoss") != std::string::npos;
  });
  CHECK(saw_fault);
  CHECK(r.trace.back().find("goal violated") != std::string::npos);
}
