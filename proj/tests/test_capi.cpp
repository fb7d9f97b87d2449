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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "ftsynth/ftsynth.h"
#include "ftsynth/game.hpp"

namespace fs = std::filesystem;
using ftsynth::testing::ModelPath;

namespace {

struct Result {
  ftsynth_result* r = nullptr;
  ~Result() { ftsynth_result_free(r); }
  std::string Text(ftsynth_text which) const {
    const char* t = ftsynth_result_text(r, which);
    return t ? t : "";
  }
};

struct Model {
  ftsynth_model* m = nullptr;
  ~Model() { ftsynth_model_free(m); }
};

std::string Slurp(const std::string& path) { return ftsynth::ReadTextFile(path); }

int Run(const std::string& args) {
  std::string cmd = std::string(FTSYNTH_CLI) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path Scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("ftsynth_test_" + std::to_string(::getpid())) / name;
  fs::create_directories(p.parent_path());
  return p;
}

}  // namespace

TEST_CASE("C API: parse failures are input errors") {
  Model m;
  CHECK(ftsynth_model_parse("{not json", &m.m) == FTSYNTH_INPUT);
  CHECK(std::string(ftsynth_last_error_kind()) == "ParseError");
  CHECK(std::string(ftsynth_last_error()).size() > 0);
  CHECK(ftsynth_model_load("/nonexistent/model.json", &m.m) == FTSYNTH_INPUT);
  CHECK(ftsynth_model_parse(nullptr, &m.m) == FTSYNTH_INPUT);
  CHECK(std::string(ftsynth_version()).size() > 0);
}

TEST_CASE("C API: synthesize the regression model") {
  Model m;
  REQUIRE(ftsynth_model_load(ModelPath("two_process.json").c_str(), &m.m) == FTSYNTH_OK);
  CHECK(ftsynth_model_process_count(m.m) == 2);
  ftsynth_options o;
  ftsynth_options_init(&o);
  Result r;
  std::string pool = Slurp(ModelPath("pool_resend.json"));
  REQUIRE(ftsynth_synthesize(m.m, pool.c_str(), &o, &r.r) == FTSYNTH_OK);
  std::string protocol;
  for (const auto& line : ftsynth::testing::ResendProtocol()) protocol += line + "\n";
  CHECK(r.Text(FTSYNTH_TEXT_PROTOCOL) == protocol);
  CHECK(r.Text(FTSYNTH_TEXT_REPORT).find("\"success\": true") != std::string::npos);
  CHECK(r.Text(FTSYNTH_TEXT_ASSIGNMENT).find("alpha(A@9/4) = ") != std::string::npos);
  CHECK(std::string(ftsynth_result_text(r.r, FTSYNTH_TEXT_COUNT)).empty());

  // The emitted timed model survives the fault adversary, and the emitted
  // selection regenerates the same constraints.
  Model timed;
  REQUIRE(ftsynth_model_parse(r.Text(FTSYNTH_TEXT_MODEL).c_str(), &timed.m) == FTSYNTH_OK);
  Result sim;
  CHECK(ftsynth_simulate(timed.m, 1, 1, 0, &sim.r) == FTSYNTH_OK);
  Result ltm;
  CHECK(ftsynth_ltm(m.m, r.Text(FTSYNTH_TEXT_SELECTION).c_str(), nullptr, &ltm.r) == FTSYNTH_OK);
  CHECK(ltm.Text(FTSYNTH_TEXT_CONSTRAINTS) == r.Text(FTSYNTH_TEXT_CONSTRAINTS));
}

TEST_CASE("C API: status codes") {
  Model m;
  REQUIRE(ftsynth_model_load(ModelPath("two_process.json").c_str(), &m.m) == FTSYNTH_OK);
  ftsynth_options o;
  ftsynth_options_init(&o);
  {
    Result r;
    CHECK(ftsynth_synthesize(m.m, R"({"format":"ftsynth/templates/1","ft_templates":[]})", &o, &r.r) ==
          FTSYNTH_NEGATIVE);
    CHECK(r.Text(FTSYNTH_TEXT_REPORT).find("\"failed_stage\": \"solve\"") != std::string::npos);
  }
  {
    Result r;
    o.state_cap = 50;
    std::string pool = Slurp(ModelPath("pool_resend.json"));
    CHECK(ftsynth_synthesize(m.m, pool.c_str(), &o, &r.r) == FTSYNTH_CAP);
  }
  {
    Result r;
    CHECK(ftsynth_synthesize(m.m, "[]", &o, &r.r) == FTSYNTH_INPUT);
  }
  {
    Result r;
    CHECK(ftsynth_simulate(m.m, 1, 1, 0, &r.r) == FTSYNTH_NEGATIVE);
    CHECK_FALSE(r.Text(FTSYNTH_TEXT_TRACE).empty());
  }
  REQUIRE(ftsynth_model_set_faults(m.m, R"({"faults":[]})") == FTSYNTH_OK);
  {
    Result r;
    CHECK(ftsynth_simulate(m.m, 1, 1, 0, &r.r) == FTSYNTH_OK);
  }
}

TEST_CASE("C API: reduce, solve and verify a one-clause formula") {
  Result red;
  REQUIRE(ftsynth_reduce3sat("p cnf 1 1\n1 1 1 0\n", &red.r) == FTSYNTH_OK);
  std::string game = red.Text(FTSYNTH_TEXT_GAME);
  ftsynth::DistributedGame g = ftsynth::ReadGame(game);
  REQUIRE(g.components() == 4);
  for (int i = 0; i < 3; ++i) CHECK(g.locals[i].size() == 4);  // 3n + 1
  CHECK(g.locals[3].size() == 9);                               // 5 + 2(m + n)

  ftsynth_options o;
  ftsynth_options_init(&o);
  Result sol;
  REQUIRE(ftsynth_solve_game(game.c_str(), &o, &sol.r) == FTSYNTH_OK);
  Result ver;
  CHECK(ftsynth_verify(game.c_str(), sol.Text(FTSYNTH_TEXT_STRATEGY).c_str(), &ver.r) == FTSYNTH_OK);

  // Short clauses are padded; x and not x has no strategy.
  Result red2;
  REQUIRE(ftsynth_reduce3sat("p cnf 1 2\n1 0\n-1 0\n", &red2.r) == FTSYNTH_OK);
  Result sol2;
  CHECK(ftsynth_solve_game(red2.Text(FTSYNTH_TEXT_GAME).c_str(), &o, &sol2.r) == FTSYNTH_NEGATIVE);
  Result bad;
  CHECK(ftsynth_reduce3sat("p cnf 1 1\n2 1 1 0\n", &bad.r) == FTSYNTH_INPUT);
}

TEST_CASE("CLI exit codes") {
  std::string model = "--model " + ModelPath("two_process.json");
  std::string pool = "--templates " + ModelPath("pool_resend.json");
  CHECK(Run("synthesize " + model + " " + pool) == 0);
  CHECK(Run("synthesize " + model + " --templates " + ModelPath("two_process.json")) == 2);
  CHECK(Run("synthesize " + model + " " + pool + " --state-cap 50") == 3);
  CHECK(Run("simulate " + model) == 1);
  CHECK(Run("simulate " + model + " --mode sideways") == 2);
  CHECK(Run("frobnicate") == 2);
  CHECK(Run("") == 2);
}

TEST_CASE("CLI synthesize output is byte-identical across runs") {
  std::string args = "synthesize --model " + ModelPath("two_process.json") + " --templates " +
                     ModelPath("pool_resend.json") + " --out-dir ";
  fs::path a = Scratch("run_a");
  fs::path b = Scratch("run_b");
  REQUIRE(Run(args + a.string()) == 0);
  REQUIRE(Run(args + b.string()) == 0);
  for (const char* f : {"model.json", "selection.json", "protocol.txt", "constraints.txt", "assignment.txt",
                        "report.json"}) {
    CAPTURE(f);
    CHECK(Slurp((a / f).string()) == Slurp((b / f).string()));
  }
  // The emitted model is a fault-tolerant timed model in its own right.
  CHECK(Run("simulate --model " + (a / "model.json").string()) == 0);
  CHECK(Run("ltm --model " + ModelPath("two_process.json") + " --selection " + (a / "selection.json").string()) ==
        0);
  fs::remove_all(a.parent_path());
}

TEST_CASE("CLI reduce3sat, solve and verify chain") {
  fs::path dir = Scratch("chain");
  fs::create_directories(dir);
  ftsynth::WriteTextFile((dir / "f.cnf").string(), "p cnf 2 2\n1 -2 2 0\n-1 -1 2 0\n");
  REQUIRE(Run("reduce3sat --cnf " + (dir / "f.cnf").string() + " --out " + (dir / "g.txt").string()) == 0);
  REQUIRE(Run("solve --game " + (dir / "g.txt").string() + " --out " + (dir / "s.txt").string()) == 0);
  CHECK(Run("verify --game " + (dir / "g.txt").string() + " --strategy " + (dir / "s.txt").string()) == 0);
  for (const char* solver : {"sat", "sat-interleaved"}) {
    CAPTURE(solver);
    CHECK(Run("solve --game " + (dir / "g.txt").string() + " --solver " + solver) == 0);
  }
  ftsynth::WriteTextFile((dir / "u.cnf").string(), "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n");
  REQUIRE(Run("reduce3sat --cnf " + (dir / "u.cnf").string() + " --out " + (dir / "u.txt").string()) == 0);
  CHECK(Run("solve --game " + (dir / "u.txt").string()) == 1);
  fs::remove_all(dir.parent_path());
}
