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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftsynth/error.hpp"
#include "ftsynth/executor.hpp"
#include "ftsynth/model.hpp"
#include "ftsynth/sdg.hpp"
#include "ftsynth/solver.hpp"
#include "ftsynth/timing.hpp"

namespace ftsynth {

struct PipelineOptions {
  SolveOptions solve;
  std::size_t state_cap = 2'000'000;
  bool can_override = false;
  WcetTable wcet;
  std::uint64_t seed = 1;
  bool simulate = true;  // re-simulate the timed result under the fault model
  // Search only: timing-feasible winning strategies compared before picking
  // the one with the fewest premature receives and least host shortening.
  std::size_t max_ranked = 256;
};

struct StageReport {
  std::string name;
  bool ok = false;
  double millis = 0;
  std::vector<std::pair<std::string, std::string>> facts;  // sizes and counts
  std::string detail;
};

struct RunReport {
  std::vector<StageReport> stages;
  bool success = false;
  std::string verdict;
  std::string failed_stage;
  ErrorCode error = ErrorCode::kSynthesisFailed;

  // Stage timings are left out unless asked for, so reports are reproducible.
  std::string Json(bool timings = false) const;
};

struct PipelineResult {
  RunReport report;
  std::optional<DistributedStrategy> strategy;
  std::vector<FtSelection> selections;
  std::vector<std::string> protocol;  // one line per selected action
  ImModel synthesized;
  TimingSystem ltm;
  std::vector<Rational> assignment;
  std::optional<PisemModel> timed;
  std::optional<SimResult> simulation;
};

// Inserted actions as fixed by a strategy on the expanded game.
std::vector<FtSelection> SelectionsOf(const SymbolicGame& sdg, const ExpandedGame& eg,
                                      const DistributedStrategy& strategy);

// abstract -> insert slots -> build game -> expand -> solve -> LTM -> timed
// model -> simulate. Stage failures are reported, not thrown; the report
// stops at the failing stage.
PipelineResult RunPipeline(const SystemSpec& spec, const TemplatePool& pool, const PipelineOptions& options);

}  // namespace ftsynth
