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
#include <unordered_set>

#include "ftsynth/error.hpp"
#include "ftsynth/executor.hpp"

namespace ftsynth {

namespace {

using Key = std::vector<std::int64_t>;

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t x : k) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
    return h;
  }
};

Key KeyOf(const PisemConfig& c) {
  Key k(c.values.begin(), c.values.end());
  k.insert(k.end(), c.next.begin(), c.next.end());
  for (const auto& n : c.nets) {
    k.push_back(n.occupied);
    if (!n.occupied) continue;
    k.insert(k.end(), {n.source, n.dest, n.var, n.valid, n.content, n.index,
                       n.sent_at.numerator(), n.sent_at.denominator()});
  }
  k.push_back(c.t.numerator());
  k.push_back(c.t.denominator());
  k.insert(k.end(), c.faults_used.begin(), c.faults_used.end());
  k.push_back(c.period_index);
  return k;
}

class Explorer {
 public:
  Explorer(const Executor& ex, Expr goal, const SimOptions& opt)
      : ex_(ex), goal_(std::move(goal)), opt_(opt) {}

  // Returns false and fills trace_ on the first goal violation.
  bool Dfs(const PisemConfig& c) {
    if (!visited_.insert(KeyOf(c)).second) return true;
    if (visited_.size() > opt_.state_cap) {
      throw Error(ErrorCode::kStateCapExceeded,
                  "simulation exceeded " + std::to_string(opt_.state_cap) + " configurations");
    }
    if (c.t == ex_.model().period) {
      if (!goal_.Holds(c.values)) {
        trace_.push_back("t=" + ToString(c.t) + " goal violated | " + ex_.Valuation(c));
        return false;
      }
      if (c.period_index + 1 >= opt_.periods) return true;
    }
    std::vector<Move> moves = ex_.EnabledMoves(c);
    if (moves.empty()) {
      throw Error(ErrorCode::kNonterminatingPeriod,
                  "no move enabled at t=" + ToString(c.t) + " (deadline overrun or blocked send) | " +
                      ex_.Valuation(c));
    }
    for (const Move& m : moves) {
      StepResult r = ex_.Step(c, m);
      trace_.push_back(ex_.Describe(c, m) + " | " + ex_.Valuation(r.config));
      if (!Dfs(r.config)) return false;
      trace_.pop_back();
    }
    return true;
  }

  std::vector<std::string>& trace() { return trace_; }
  std::size_t explored() const { return visited_.size(); }

 private:
  const Executor& ex_;
  Expr goal_;
  const SimOptions& opt_;
  std::unordered_set<Key, KeyHash> visited_;
  std::vector<std::string> trace_;
};

}  // namespace

SimResult SimulateWithFaults(const PisemModel& model, const FaultModel& faults,
                             const std::string& goal, const SimOptions& options) {
  auto diags = ValidateModel(model);
  if (!diags.empty()) {
    throw Error(ErrorCode::kInvalidModel, diags.front().location + ": " + diags.front().message);
  }
  Executor ex(model, faults);
  const VarLayout& layout = ex.layout();
  Expr bound_goal = Expr::Parse(goal).Bind([&](std::string_view n) { return layout.Qualified(n); });
  SimResult result;

  if (options.mode == SimOptions::Mode::kExhaustive) {
    Explorer explorer(ex, bound_goal, options);
    for (const auto& env : ex.EnvChoices()) {
      PisemConfig init = ex.Initial(env);
      explorer.trace().assign(1, "t=0 init | " + ex.Valuation(init));
      if (!explorer.Dfs(init)) {
        result.always_reached = false;
        result.trace = explorer.trace();
        break;
      }
    }
    result.explored = explorer.explored();
    return result;
  }

  std::mt19937_64 rng(options.seed);
  auto envs = ex.EnvChoices();
  for (int run = 0; run < options.random_runs; ++run) {
    PisemConfig c = ex.Initial(envs[rng() % envs.size()]);
    std::vector<std::string> trace{"t=0 init | " + ex.Valuation(c)};
    while (true) {
      ++result.explored;
      if (c.t == model.period) {
        if (!bound_goal.Holds(c.values)) {
          trace.push_back("t=" + ToString(c.t) + " goal violated | " + ex.Valuation(c));
          result.always_reached = false;
          result.trace = std::move(trace);
          return result;
        }
        if (c.period_index + 1 >= options.periods) break;
      }
      std::vector<Move> moves = ex.EnabledMoves(c);
      if (moves.empty()) {
        throw Error(ErrorCode::kNonterminatingPeriod,
                    "no move enabled at t=" + ToString(c.t) + " | " + ex.Valuation(c));
      }
      const Move& m = moves[rng() % moves.size()];
      StepResult r = ex.Step(c, m);
      trace.push_back(ex.Describe(c, m) + " | " + ex.Valuation(r.config));
      c = std::move(r.config);
    }
  }
  return result;
}

}  // namespace ftsynth
