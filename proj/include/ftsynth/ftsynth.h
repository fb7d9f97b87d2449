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

/* C interface of the ftsynth library. Every entry point returns a status
 * whose numeric value doubles as the command line exit code; the message of
 * the last failure on the calling thread is available from
 * ftsynth_last_error(). Text results live in an ftsynth_result and stay
 * valid until it is freed. */

#ifndef FTSYNTH_FTSYNTH_H_
#define FTSYNTH_FTSYNTH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FTSYNTH_BUILDING)
#define FTSYNTH_API __attribute__((visibility("default")))
#else
#define FTSYNTH_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ftsynth_status {
  FTSYNTH_OK = 0,
  FTSYNTH_NEGATIVE = 1, /* verdict false, no strategy, infeasible timing */
  FTSYNTH_INPUT = 2,    /* usage, parse or model error */
  FTSYNTH_CAP = 3       /* state cap, encoding size or search budget */
} ftsynth_status;

typedef enum ftsynth_solver {
  FTSYNTH_SOLVER_SEARCH = 0,
  FTSYNTH_SOLVER_SAT = 1,
  FTSYNTH_SOLVER_SAT_INTERLEAVED = 2
} ftsynth_solver;

typedef enum ftsynth_text {
  FTSYNTH_TEXT_REPORT = 0,      /* JSON run report */
  FTSYNTH_TEXT_MODEL = 1,       /* timed model document */
  FTSYNTH_TEXT_SELECTION = 2,   /* inserted actions chosen by the strategy */
  FTSYNTH_TEXT_CONSTRAINTS = 3, /* timing constraint dump */
  FTSYNTH_TEXT_ASSIGNMENT = 4,  /* name = value lines */
  FTSYNTH_TEXT_PROTOCOL = 5,    /* one line per inserted action */
  FTSYNTH_TEXT_GAME = 6,        /* explicit game text */
  FTSYNTH_TEXT_STRATEGY = 7,    /* explicit strategy text */
  FTSYNTH_TEXT_TRACE = 8,       /* counterexample play */
  FTSYNTH_TEXT_COUNT = 9
} ftsynth_text;

typedef struct ftsynth_model ftsynth_model;
typedef struct ftsynth_result ftsynth_result;

typedef struct ftsynth_options {
  ftsynth_solver solver;
  int depth;                     /* SAT unrolling; 0 picks a default */
  uint64_t state_cap;
  uint64_t seed;
  int can_override;
  int simulate;                  /* re-simulate the timed result */
  int timings;                   /* include stage timings in the report */
  const char* wcet_json;         /* optional WCET table document */
  const char* external_solver;   /* optional DIMACS solver command */
  const char* dimacs_path;       /* optional CNF export path */
} ftsynth_options;

FTSYNTH_API const char* ftsynth_version(void);
FTSYNTH_API const char* ftsynth_last_error(void);
/* Symbolic name of the last error ("ParseError", ...), "" when none. */
FTSYNTH_API const char* ftsynth_last_error_kind(void);

FTSYNTH_API void ftsynth_options_init(ftsynth_options* options);

FTSYNTH_API ftsynth_status ftsynth_model_parse(const char* json, ftsynth_model** out);
FTSYNTH_API ftsynth_status ftsynth_model_load(const char* path, ftsynth_model** out);
FTSYNTH_API void ftsynth_model_free(ftsynth_model* model);
/* Replaces the model's fault hypothesis by the "faults" array of `json`. */
FTSYNTH_API ftsynth_status ftsynth_model_set_faults(ftsynth_model* model, const char* json);
FTSYNTH_API size_t ftsynth_model_process_count(const ftsynth_model* model);

FTSYNTH_API const char* ftsynth_result_text(const ftsynth_result* result, ftsynth_text which);
FTSYNTH_API void ftsynth_result_free(ftsynth_result* result);

/* Full pipeline. On FTSYNTH_NEGATIVE the report names the failing stage. */
FTSYNTH_API ftsynth_status ftsynth_synthesize(const ftsynth_model* model, const char* templates_json,
                                              const ftsynth_options* options, ftsynth_result** out);

/* Fault-adversary simulation: OK when the goal holds at every period end.
   A state_cap of 0 keeps the default. */
FTSYNTH_API ftsynth_status ftsynth_simulate(const ftsynth_model* model, int exhaustive, uint64_t seed,
                                            uint64_t state_cap, ftsynth_result** out);

/* Timing constraints for an original model plus a selection document. */
FTSYNTH_API ftsynth_status ftsynth_ltm(const ftsynth_model* model, const char* selection_json,
                                       const char* wcet_json, ftsynth_result** out);

FTSYNTH_API ftsynth_status ftsynth_verify(const char* game_text, const char* strategy_text,
                                          ftsynth_result** out);
FTSYNTH_API ftsynth_status ftsynth_solve_game(const char* game_text, const ftsynth_options* options,
                                              ftsynth_result** out);
/* DIMACS 3CNF (shorter clauses repeat their last literal) to game text. */
FTSYNTH_API ftsynth_status ftsynth_reduce3sat(const char* dimacs_text, ftsynth_result** out);

#ifdef __cplusplus
}
#endif

#endif /* FTSYNTH_FTSYNTH_H_ */
