#ifndef ECOFJSP_H
#define ECOFJSP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Objective minimized by an emitted MILP.
typedef enum EcofjspObjective {
  ECOFJSP_OBJECTIVE_MAKESPAN = 0,
  ECOFJSP_OBJECTIVE_COST = 1,
  ECOFJSP_OBJECTIVE_EMISSIONS = 2,
} EcofjspObjective;

// Result of every fallible call.
typedef enum EcofjspStatus {
  ECOFJSP_STATUS_OK = 0,
  ECOFJSP_STATUS_NULL_POINTER = 1,
  ECOFJSP_STATUS_INVALID_ARGUMENT = 2,
  ECOFJSP_STATUS_PARSE = 3,
  ECOFJSP_STATUS_IO = 4,
  ECOFJSP_STATUS_VALIDATION = 5,
  ECOFJSP_STATUS_LIMIT = 6,
  ECOFJSP_STATUS_INTERNAL = 7,
  ECOFJSP_STATUS_PANIC = 8,
} EcofjspStatus;

// A Pareto front with witness schedules.
typedef struct EcofjspFront EcofjspFront;

// An instance with its energy profile and per-job demand.
typedef struct EcofjspProblem EcofjspProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string. The
// pointer stays valid until the next call into the library on this thread.
const char *ecofjsp_last_error(void);

// Builds a problem from instance text and an hourly market CSV.
//
// # Safety
// `instance_text` and `market_csv` must be NUL-terminated strings; `out`
// must be writable.
enum EcofjspStatus ecofjsp_problem_load(const char *instance_text,
                                        const char *market_csv,
                                        uint32_t step_minutes,
                                        double base_demand_kw,
                                        struct EcofjspProblem **out_problem);

// Builds a problem from instance text and a seeded synthetic market of
// `hours` hours at 15-minute resolution, optionally cut or tiled to `steps`
// steps (0 keeps the full length).
//
// # Safety
// `instance_text` must be a NUL-terminated string; `out` must be writable.
enum EcofjspStatus ecofjsp_problem_synthetic(const char *instance_text,
                                             uint64_t seed,
                                             size_t hours,
                                             size_t steps,
                                             struct EcofjspProblem **out_problem);

// Releases a problem; null is ignored.
//
// # Safety
// `problem` must come from this library and not be used afterwards.
void ecofjsp_problem_free(struct EcofjspProblem *problem);

// Job, machine, operation and time-step counts.
//
// # Safety
// All pointers must be valid.
enum EcofjspStatus ecofjsp_problem_counts(const struct EcofjspProblem *problem,
                                          size_t *jobs,
                                          size_t *machines,
                                          size_t *operations,
                                          size_t *steps);

// Energy cost (EUR) and emissions (gCO2eq) of operation `(job, position)`
// on `machine` starting at `start`.
//
// # Safety
// All pointers must be valid.
enum EcofjspStatus ecofjsp_op_cost(const struct EcofjspProblem *problem,
                                   size_t job,
                                   size_t position,
                                   size_t machine,
                                   size_t start,
                                   double *cost_eur,
                                   double *emissions_g);

// Runs the memetic NSGA-III. `config_text` holds optional `key = value`
// lines (null for defaults); a non-zero `generations` overrides the
// generation limit.
//
// # Safety
// `problem` must be valid, `config_text` null or NUL-terminated, `out_front`
// writable.
enum EcofjspStatus ecofjsp_solve(const struct EcofjspProblem *problem,
                                 const char *config_text,
                                 uint64_t seed,
                                 size_t generations,
                                 struct EcofjspFront **out_front);

// Exact front by enumeration; refuses instances over the given limits.
//
// # Safety
// `problem` must be valid and `out_front` writable.
enum EcofjspStatus ecofjsp_brute_force(const struct EcofjspProblem *problem,
                                       size_t max_ops,
                                       size_t max_horizon,
                                       struct EcofjspFront **out_front);

// Number of front members; 0 for null.
//
// # Safety
// `front` must be null or valid.
size_t ecofjsp_front_len(const struct EcofjspFront *front);

// Objectives of member `index`.
//
// # Safety
// All pointers must be valid.
enum EcofjspStatus ecofjsp_front_objectives(const struct EcofjspFront *front,
                                            size_t index,
                                            size_t *makespan,
                                            double *cost_eur,
                                            double *emissions_g);

// JSON export of the front with every schedule; release with
// [`ecofjsp_string_free`].
//
// # Safety
// `front` must be valid and `out_json` writable.
enum EcofjspStatus ecofjsp_front_json(const struct EcofjspFront *front, char **out_json);

// Releases a front; null is ignored.
//
// # Safety
// `front` must come from this library and not be used afterwards.
void ecofjsp_front_free(struct EcofjspFront *front);

// Mixed-integer model in LP format minimizing `objective`, refusing models
// with more than `max_variables` start indicators (0 uses the default).
//
// # Safety
// `problem` must be valid and `out_lp` writable.
enum EcofjspStatus ecofjsp_emit_milp(const struct EcofjspProblem *problem,
                                     enum EcofjspObjective objective,
                                     size_t max_variables,
                                     char **out_lp);

// Releases a string returned by the library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ecofjsp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ECOFJSP_H */
