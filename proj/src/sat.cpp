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

#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "ftsynth/error.hpp"
#include "ftsynth/model_io.hpp"
#include "ftsynth/solver.hpp"

namespace ftsynth {

namespace {

// Literal encoding: 2*var + (negative ? 1 : 0), var 0-based.
inline int Lit(int dimacs) { return dimacs > 0 ? 2 * (dimacs - 1) : 2 * (-dimacs - 1) + 1; }
inline int Var(int lit) { return lit >> 1; }
inline int Neg(int lit) { return lit ^ 1; }

class Cdcl {
 public:
  Cdcl(const Cnf& cnf, const SatOptions& opt) : opt_(opt), n_(cnf.variables) {
    value_.assign(n_, 0);
    level_.assign(n_, 0);
    reason_.assign(n_, -1);
    activity_.assign(n_, 0.0);
    phase_.assign(n_, 0);
    seen_.assign(n_, 0);
    watches_.resize(2 * static_cast<std::size_t>(n_));
    heap_pos_.assign(n_, -1);
    for (int v = 0; v < n_; ++v) HeapInsert(v);
    for (const auto& c : cnf.clauses) {
      if (!AddInput(c)) {
        unsat_ = true;
        break;
      }
    }
  }

  SatResult Solve() {
    SatResult r;
    if (unsat_ || Propagate() >= 0) {
      r.status = SatStatus::kUnsat;
      return r;
    }
    std::uint64_t conflicts = 0;
    int restart = 0;
    std::size_t max_learnts = std::max<std::size_t>(clauses_.size() / 3, 2000);
    while (true) {
      std::uint64_t limit = 100 * Luby(++restart);
      std::uint64_t local = 0;
      while (true) {
        int conflict = Propagate();
        if (conflict >= 0) {
          ++conflicts;
          ++local;
          if (DecisionLevel() == 0) {
            r.status = SatStatus::kUnsat;
            return r;
          }
          std::vector<int> learnt;
          int back = Analyze(conflict, learnt);
          Backtrack(back);
          if (learnt.size() == 1) {
            Enqueue(learnt[0], -1);
          } else {
            int ci = Attach(std::move(learnt), true);
            Enqueue(clauses_[ci].lits[0], ci);
          }
          var_inc_ /= 0.95;
          if (opt_.conflict_budget && conflicts >= opt_.conflict_budget) {
            r.status = SatStatus::kUnknown;
            return r;
          }
          continue;
        }
        if (local >= limit) {
          Backtrack(0);
          break;
        }
        if (learnt_count_ > max_learnts + trail_.size()) {
          ReduceLearnts();
          max_learnts = max_learnts * 11 / 10;
        }
        int v = PickBranch();
        if (v < 0) {
          r.status = SatStatus::kSat;
          r.model.assign(n_ + 1, false);
          for (int x = 0; x < n_; ++x) r.model[x + 1] = value_[x] > 0;
          return r;
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        Enqueue(2 * v + (phase_[v] ? 0 : 1), -1);
      }
    }
  }

 private:
  struct Clause {
    std::vector<int> lits;
    bool learnt = false;
    bool removed = false;
    double activity = 0;
  };

  static std::uint64_t Luby(int x) {
    // Luby sequence 1,1,2,1,1,2,4,...
    std::uint64_t size = 1;
    int seq = 0;
    while (size < static_cast<std::uint64_t>(x) + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    std::uint64_t xi = static_cast<std::uint64_t>(x);
    while (size - 1 != xi) {
      size = (size - 1) >> 1;
      --seq;
      xi = xi % size;
    }
    return std::uint64_t{1} << seq;
  }

  int LitValue(int lit) const {
    int v = value_[Var(lit)];
    return (lit & 1) ? -v : v;
  }
  int DecisionLevel() const { return static_cast<int>(trail_lim_.size()); }

  bool AddInput(const std::vector<int>& clause) {
    std::vector<int> lits;
    for (int d : clause) lits.push_back(Lit(d));
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t k = 1; k < lits.size(); ++k) {
      if (lits[k] == Neg(lits[k - 1])) return true;  // tautology
    }
    if (lits.empty()) return false;
    if (lits.size() == 1) {
      int val = LitValue(lits[0]);
      if (val < 0) return false;
      if (val == 0) Enqueue(lits[0], -1);
      return true;
    }
    Attach(std::move(lits), false);
    return true;
  }

  int Attach(std::vector<int> lits, bool learnt) {
    int ci = static_cast<int>(clauses_.size());
    watches_[lits[0]].push_back(ci);
    watches_[lits[1]].push_back(ci);
    clauses_.push_back({std::move(lits), learnt, false, 0});
    if (learnt) {
      ++learnt_count_;
      clauses_[ci].activity = cla_inc_;
    }
    return ci;
  }

  void Enqueue(int lit, int reason) {
    int v = Var(lit);
    value_[v] = (lit & 1) ? -1 : 1;
    level_[v] = DecisionLevel();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  // Returns the conflicting clause or -1.
  int Propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      int false_lit = Neg(p);
      std::vector<int>& ws = watches_[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        int ci = ws[i++];
        Clause& c = clauses_[ci];
        if (c.removed) continue;
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        if (LitValue(c.lits[0]) > 0) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (LitValue(c.lits[k]) >= 0) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[c.lits[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (LitValue(c.lits[0]) < 0) {
          while (i < ws.size()) ws[j++] = ws[i++];
          ws.resize(j);
          qhead_ = trail_.size();
          return ci;
        }
        Enqueue(c.lits[0], ci);
      }
      ws.resize(j);
    }
    return -1;
  }

  int Analyze(int conflict, std::vector<int>& learnt) {
    learnt.assign(1, -1);
    int counter = 0;
    int p = -1;
    std::size_t index = trail_.size();
    int ci = conflict;
    do {
      Clause& c = clauses_[ci];
      if (c.learnt) BumpClause(c);
      for (std::size_t k = (p < 0 ? 0 : 1); k < c.lits.size(); ++k) {
        int q = c.lits[k];
        int v = Var(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        BumpVar(v);
        if (level_[v] >= DecisionLevel()) {
          ++counter;
        } else {
          learnt.push_back(q);
        }
      }
      while (!seen_[Var(trail_[--index])]) {
      }
      p = trail_[index];
      ci = reason_[Var(p)];
      seen_[Var(p)] = 0;
      --counter;
      if (counter > 0 && ci >= 0) {
        // Reason clauses keep the implied literal first.
        Clause& rc = clauses_[ci];
        if (rc.lits[0] != p) {
          auto it = std::find(rc.lits.begin(), rc.lits.end(), p);
          std::iter_swap(rc.lits.begin(), it);
        }
      }
    } while (counter > 0);
    learnt[0] = Neg(p);
    for (std::size_t k = 1; k < learnt.size(); ++k) seen_[Var(learnt[k])] = 0;
    int back = 0;
    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k) {
        if (level_[Var(learnt[k])] > level_[Var(learnt[best])]) best = k;
      }
      std::swap(learnt[1], learnt[best]);
      back = level_[Var(learnt[1])];
    }
    cla_inc_ /= 0.999;
    return back;
  }

  void Backtrack(int level) {
    if (DecisionLevel() <= level) return;
    for (std::size_t k = trail_.size(); k-- > static_cast<std::size_t>(trail_lim_[level]);) {
      int v = Var(trail_[k]);
      phase_[v] = value_[v] > 0;
      value_[v] = 0;
      reason_[v] = -1;
      if (heap_pos_[v] < 0) HeapInsert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  int PickBranch() {
    while (!heap_.empty()) {
      int v = HeapPop();
      if (value_[v] == 0) return v;
    }
    return -1;
  }

  void ReduceLearnts() {
    std::vector<char> locked(clauses_.size(), 0);
    for (int lit : trail_) {
      int r = reason_[Var(lit)];
      if (r >= 0) locked[r] = 1;
    }
    std::vector<int> learnts;
    for (int ci = 0; ci < static_cast<int>(clauses_.size()); ++ci) {
      const Clause& c = clauses_[ci];
      if (c.learnt && !c.removed && !locked[ci] && c.lits.size() > 2) learnts.push_back(ci);
    }
    std::sort(learnts.begin(), learnts.end(),
              [&](int a, int b) { return clauses_[a].activity < clauses_[b].activity; });
    for (std::size_t k = 0; k < learnts.size() / 2; ++k) {
      Clause& c = clauses_[learnts[k]];
      c.removed = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      --learnt_count_;
    }
    for (auto& ws : watches_) {
      ws.erase(std::remove_if(ws.begin(), ws.end(), [&](int ci) { return clauses_[ci].removed; }), ws.end());
    }
  }

  void BumpVar(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) HeapUp(heap_pos_[v]);
  }

  void BumpClause(Clause& c) {
    c.activity += cla_inc_;
    if (c.activity > 1e20) {
      for (auto& x : clauses_) x.activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  // Max-heap on activity.
  bool Before(int a, int b) const { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); }
  void HeapInsert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    HeapUp(heap_pos_[v]);
  }
  int HeapPop() {
    int top = heap_[0];
    heap_pos_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      HeapDown(0);
    }
    return top;
  }
  void HeapUp(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!Before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  void HeapDown(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (true) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && Before(heap_[child + 1], heap_[child])) ++child;
      if (!Before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  SatOptions opt_;
  int n_;
  bool unsat_ = false;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<signed char> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<char> phase_;
  std::vector<char> seen_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::size_t learnt_count_ = 0;
};

}  // namespace

SatResult SolveEmbedded(const Cnf& cnf, const SatOptions& options) {
  SatResult r = Cdcl(cnf, options).Solve();
  if (r.status == SatStatus::kSat && !Satisfies(cnf, r.model)) {
    throw Error(ErrorCode::kIo, "internal solver produced a non-model");
  }
  return r;
}

SatResult ParseSolverOutput(std::string_view text, int variables) {
  std::istringstream in{std::string(text)};
  std::string line;
  SatResult r;
  bool have_status = false;
  r.model.assign(variables + 1, false);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "s") {
      std::string status;
      std::getline(ls >> std::ws, status);
      while (!status.empty() && (status.back() == '\r' || status.back() == ' ')) status.pop_back();
      if (status == "SATISFIABLE") {
        r.status = SatStatus::kSat;
      } else if (status == "UNSATISFIABLE") {
        r.status = SatStatus::kUnsat;
      } else if (status == "UNKNOWN") {
        r.status = SatStatus::kUnknown;
      } else {
        throw Error(ErrorCode::kMalformedDimacs, "unknown solver status '" + status + "'");
      }
      have_status = true;
    } else if (tag == "v") {
      long lit;
      while (ls >> lit) {
        if (lit == 0) break;
        long v = lit > 0 ? lit : -lit;
        if (v > variables) throw Error(ErrorCode::kMalformedDimacs, "model literal " + std::to_string(lit) + " out of range");
        r.model[v] = lit > 0;
      }
    }
  }
  if (!have_status) throw Error(ErrorCode::kMalformedDimacs, "solver output has no 's' line");
  if (r.status != SatStatus::kSat) r.model.clear();
  return r;
}

std::string FormatSolverOutput(const SatResult& r) {
  switch (r.status) {
    case SatStatus::kUnsat: return "s UNSATISFIABLE\n";
    case SatStatus::kUnknown: return "s UNKNOWN\n";
    case SatStatus::kSat: break;
  }
  std::string out = "s SATISFIABLE\n";
  std::string line = "v";
  for (std::size_t v = 1; v < r.model.size(); ++v) {
    std::string lit = " " + std::string(r.model[v] ? "" : "-") + std::to_string(v);
    if (line.size() + lit.size() > 78) {
      out += line + "\n";
      line = "v";
    }
    line += lit;
  }
  return out + line + " 0\n";
}

SatResult SolveExternal(const Cnf& cnf, const std::string& command) {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path();
  fs::path file = dir / ("ftsynth-" + std::to_string(::getpid()) + "-" +
                         std::to_string(reinterpret_cast<std::uintptr_t>(&cnf)) + ".cnf");
  WriteTextFile(file.string(), WriteDimacs(cnf));
  std::string cmd = command + " '" + file.string() + "' 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    fs::remove(file);
    throw Error(ErrorCode::kBackendUnavailable, "cannot run '" + command + "'");
  }
  std::string output;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  int status = ::pclose(pipe);
  fs::remove(file);
  if (output.find("s ") == std::string::npos) {
    throw Error(ErrorCode::kBackendUnavailable,
                "'" + command + "' produced no solver status (exit status " + std::to_string(status) + ")");
  }
  SatResult r = ParseSolverOutput(output, cnf.variables);
  if (r.status == SatStatus::kSat && !Satisfies(cnf, r.model)) {
    throw Error(ErrorCode::kMalformedDimacs, "external model does not satisfy the instance");
  }
  return r;
}

}  // namespace ftsynth
