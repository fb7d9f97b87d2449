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

// Command line front end over the C interface.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ftsynth/ftsynth.h"

namespace {

struct InputError {
  std::string message;
};

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError{"cannot write " + path.string()};
  out << text;
}

class Result {
 public:
  ~Result() { ftsynth_result_free(r_); }
  ftsynth_result** out() { return &r_; }
  std::string text(ftsynth_text which) const { return ftsynth_result_text(r_, which); }

 private:
  ftsynth_result* r_ = nullptr;
};

class Model {
 public:
  ~Model() { ftsynth_model_free(m_); }
  ftsynth_model** out() { return &m_; }
  ftsynth_model* get() const { return m_; }

 private:
  ftsynth_model* m_ = nullptr;
};

int Report(ftsynth_status status) {
  if (status != FTSYNTH_OK && *ftsynth_last_error()) {
    std::cerr << "ftsynth: " << ftsynth_last_error() << "\n";
  }
  return static_cast<int>(status);
}

int LoadModel(const std::string& path, const std::string& faults, Model& m) {
  ftsynth_status s = ftsynth_model_load(path.c_str(), m.out());
  if (s != FTSYNTH_OK) return Report(s);
  if (!faults.empty()) {
    s = ftsynth_model_set_faults(m.get(), Slurp(faults).c_str());
    if (s != FTSYNTH_OK) return Report(s);
  }
  return 0;
}

ftsynth_solver SolverOf(const std::string& name) {
  if (name == "search") return FTSYNTH_SOLVER_SEARCH;
  if (name == "sat" || name == "sat-simultaneous") return FTSYNTH_SOLVER_SAT;
  return FTSYNTH_SOLVER_SAT_INTERLEAVED;
}

const std::set<std::string> kSolvers = {"search", "sat", "sat-simultaneous", "sat-interleaved"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fault-tolerance synthesis for periodic distributed systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ftsynth_version()));

  std::string model, templates, faults, solver = "search", out_dir, dimacs, wcet, external;
  std::string game, strategy, cnf, selection, out, mode = "exhaustive";
  int depth = 0;
  std::uint64_t state_cap = 2'000'000, seed = 1;
  bool can_override = false, no_simulate = false, timings = false;

  auto add_solver = [&](CLI::App* c) {
    c->add_option("--solver", solver, "search | sat | sat-simultaneous | sat-interleaved")
        ->check(CLI::IsMember(kSolvers));
    c->add_option("--depth", depth, "SAT unrolling depth (default: longest play, else reachable vertices)")
        ->check(CLI::PositiveNumber);
    c->add_option("--seed", seed, "seed for every randomized choice");
    c->add_option("--emit-dimacs", dimacs, "write the CNF and its variable map here");
    c->add_option("--external-sat", external, "DIMACS solver command instead of the embedded one");
  };

  auto* syn = app.add_subcommand("synthesize", "insert FT actions, solve the game and restore timing");
  syn->add_option("--model", model, "model document")->required();
  syn->add_option("--templates", templates, "FT template pool")->required();
  syn->add_option("--faults", faults, "document whose faults replace the model's");
  syn->add_option("--state-cap", state_cap, "bound on game vertices and simulation states");
  syn->add_flag("--can-override", can_override, "insert FT sends even if the CAN check fails");
  syn->add_option("--out-dir", out_dir, "directory for the result files");
  syn->add_option("--wcet", wcet, "WCET/WCMTT table overriding model values");
  syn->add_flag("--no-simulate", no_simulate, "skip re-simulating the timed result");
  syn->add_flag("--timings", timings, "include stage timings in the report");
  add_solver(syn);

  auto* ver = app.add_subcommand("verify", "check a strategy on an explicit game");
  ver->add_option("--game", game, "game file")->required();
  ver->add_option("--strategy", strategy, "strategy file")->required();

  auto* sol = app.add_subcommand("solve", "solve an explicit game");
  sol->add_option("--game", game, "game file")->required();
  sol->add_option("--out", out, "strategy file (default: standard output)");
  add_solver(sol);

  auto* red = app.add_subcommand("reduce3sat", "build the game of a 3CNF formula");
  red->add_option("--cnf", cnf, "DIMACS file")->required();
  red->add_option("--out", out, "game file (default: standard output)");

  auto* sim = app.add_subcommand("simulate", "run the fault adversary against a timed model");
  sim->add_option("--model", model, "model document")->required();
  sim->add_option("--faults", faults, "document whose faults replace the model's");
  sim->add_option("--mode", mode, "exhaustive | random")->check(CLI::IsMember({"exhaustive", "random"}));
  sim->add_option("--seed", seed, "seed for random mode");
  sim->add_option("--state-cap", state_cap, "bound on explored configurations");

  auto* ltm = app.add_subcommand("ltm", "timing constraints for a selection of inserted actions");
  ltm->add_option("--model", model, "original model document")->required();
  ltm->add_option("--selection", selection, "selection document")->required();
  ltm->add_option("--wcet", wcet, "WCET/WCMTT table overriding model values");
  ltm->add_option("--out-dir", out_dir, "directory for the result files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ftsynth_options opt;
  ftsynth_options_init(&opt);
  opt.solver = SolverOf(solver);
  opt.depth = depth;
  opt.seed = seed;
  opt.state_cap = state_cap;
  opt.can_override = can_override;
  opt.simulate = !no_simulate;
  opt.timings = timings;
  if (!dimacs.empty()) opt.dimacs_path = dimacs.c_str();
  if (!external.empty()) opt.external_solver = external.c_str();

  try {
    if (*syn) {
      std::set<std::string> paths{model, templates};
      if (paths.size() != 2 || (!faults.empty() && paths.count(faults)) || (!wcet.empty() && paths.count(wcet))) {
        throw InputError{"input paths must be distinct"};
      }
      Model m;
      if (int rc = LoadModel(model, faults, m)) return rc;
      std::string pool = Slurp(templates);
      std::string table = wcet.empty() ? "" : Slurp(wcet);
      if (!wcet.empty()) opt.wcet_json = table.c_str();
      Result r;
      ftsynth_status s = ftsynth_synthesize(m.get(), pool.c_str(), &opt, r.out());
      std::cout << r.text(FTSYNTH_TEXT_REPORT) << r.text(FTSYNTH_TEXT_PROTOCOL);
      if (!out_dir.empty() && s == FTSYNTH_OK) {
        std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        Spit(dir / "model.json", r.text(FTSYNTH_TEXT_MODEL));
        Spit(dir / "selection.json", r.text(FTSYNTH_TEXT_SELECTION));
        Spit(dir / "protocol.txt", r.text(FTSYNTH_TEXT_PROTOCOL));
        Spit(dir / "constraints.txt", r.text(FTSYNTH_TEXT_CONSTRAINTS));
        Spit(dir / "assignment.txt", r.text(FTSYNTH_TEXT_ASSIGNMENT));
        Spit(dir / "report.json", r.text(FTSYNTH_TEXT_REPORT));
      }
      return Report(s);
    }
    if (*ver) {
      Result r;
      ftsynth_status s = ftsynth_verify(Slurp(game).c_str(), Slurp(strategy).c_str(), r.out());
      std::cout << r.text(FTSYNTH_TEXT_REPORT);
      return Report(s);
    }
    if (*sol) {
      Result r;
      ftsynth_status s = ftsynth_solve_game(Slurp(game).c_str(), &opt, r.out());
      if (out.empty()) {
        std::cout << r.text(FTSYNTH_TEXT_STRATEGY);
      } else if (s == FTSYNTH_OK) {
        Spit(out, r.text(FTSYNTH_TEXT_STRATEGY));
      }
      std::cerr << r.text(FTSYNTH_TEXT_REPORT);
      return Report(s);
    }
    if (*red) {
      Result r;
      ftsynth_status s = ftsynth_reduce3sat(Slurp(cnf).c_str(), r.out());
      if (out.empty()) {
        std::cout << r.text(FTSYNTH_TEXT_GAME);
      } else if (s == FTSYNTH_OK) {
        Spit(out, r.text(FTSYNTH_TEXT_GAME));
      }
      std::cerr << r.text(FTSYNTH_TEXT_REPORT);
      return Report(s);
    }
    if (*sim) {
      Model m;
      if (int rc = LoadModel(model, faults, m)) return rc;
      Result r;
      ftsynth_status s = ftsynth_simulate(m.get(), mode == "exhaustive", seed, state_cap, r.out());
      std::cout << r.text(FTSYNTH_TEXT_REPORT) << r.text(FTSYNTH_TEXT_TRACE);
      return Report(s);
    }
    if (*ltm) {
      Model m;
      if (int rc = LoadModel(model, "", m)) return rc;
      std::string table = wcet.empty() ? "" : Slurp(wcet);
      Result r;
      ftsynth_status s =
          ftsynth_ltm(m.get(), Slurp(selection).c_str(), wcet.empty() ? nullptr : table.c_str(), r.out());
      std::cout << r.text(FTSYNTH_TEXT_REPORT) << r.text(FTSYNTH_TEXT_CONSTRAINTS)
                << r.text(FTSYNTH_TEXT_ASSIGNMENT);
      if (!out_dir.empty() && s == FTSYNTH_OK) {
        std::filesystem::path dir(out_dir);
        std::filesystem::create_directories(dir);
        Spit(dir / "constraints.txt", r.text(FTSYNTH_TEXT_CONSTRAINTS));
        Spit(dir / "assignment.txt", r.text(FTSYNTH_TEXT_ASSIGNMENT));
        Spit(dir / "model.json", r.text(FTSYNTH_TEXT_MODEL));
      }
      return Report(s);
    }
  } catch (const InputError& e) {
    std::cerr << "ftsynth: " << e.message << "\n";
    return 2;
  }
  return 2;
}
