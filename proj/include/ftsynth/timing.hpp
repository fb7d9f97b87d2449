#pragma once

#include <map>
#include <string>
#include <vector>

#include "ftsynth/model.hpp"
#include "ftsynth/translate.hpp"

namespace ftsynth {

// An inserted action as fixed by a strategy: the chosen pattern and the
// concrete PC tuple (tuple[m] is the next index of process m when it fires).
struct FtSelection {
  int process = 0;
  Rational index;
  Candidate chosen;
  std::vector<Rational> tuple;
};

// The IM of `original` with every selection inserted. Original actions keep
// their abstracted boxes; inserted actions get point boxes from their tuple.
// Throws NotConsecutive / InvalidModel when a selection does not fit the
// slot layout or its tuple leaves the inserted action's box.
ImModel SynthesizeIm(const PisemModel& original, const std::vector<FtSelection>& selections);

struct WcetTable {
  std::map<std::string, Rational> actions;  // by pattern name
  std::map<MessageKey, Rational> messages;  // (network, index) -> WCMTT
};

struct TimingVariable {
  enum Role { kRelease, kDeadline } role = kRelease;
  int process = 0;
  Rational index;
  std::string name;  // "alpha(A@9/4)"
};

// lhs - rhs < bound (strict) or <= bound. -1 stands for the constant 0.
struct TimingConstraint {
  int lhs = -1;
  int rhs = -1;
  Rational bound;
  bool strict = false;
  char tag = 'A';
  int item = 0;
};

struct TimingSystem {
  Rational period;
  std::vector<TimingVariable> variables;
  std::vector<TimingConstraint> constraints;

  int Find(const std::string& name) const;  // -1 if absent
  std::string Format(const TimingConstraint& c) const;
  std::string Dump() const;
};

// Local timing modification. Slots between hosts c and c+1 use the gap
// [beta_c, alpha_{c+1}) when it is non-empty and split the host otherwise.
// Throws MissingWcet naming the pattern.
TimingSystem GenerateLtm(const PisemModel& original, const ImModel& synthesized,
                         const WcetTable& wcet);

struct LtmSolution {
  bool feasible = false;
  std::vector<Rational> values;
  std::vector<int> blocking;  // constraint indices on a contradictory cycle
};

// Greatest solution of the difference system, with strict inequalities
// closed by a rational slack.
LtmSolution SolveLtm(const TimingSystem& system);

// Index of the first violated constraint, or -1.
int FirstViolated(const TimingSystem& system, const std::vector<Rational>& values);

std::string DumpAssignment(const TimingSystem& system, const std::vector<Rational>& values);

// The timed model of the synthesized IM under `values`. Validates the result
// and runs the refinement check (throws RefinementViolation).
PisemModel ApplyTiming(const PisemModel& original, const ImModel& synthesized,
                       const TimingSystem& system, const std::vector<Rational>& values);

// Every action's abstracted box on `timed` lies inside its synthesized box.
void CheckRefinement(const PisemModel& timed, const ImModel& synthesized);

}  // namespace ftsynth
