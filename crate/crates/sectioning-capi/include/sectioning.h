/* C interface to the sectioning library. Generated by cbindgen. */

#ifndef SECTIONING_CAPI_H
#define SECTIONING_CAPI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum SecStatus {
  SecStatus_Ok = 0,
  SecStatus_NullArgument = 1,
  SecStatus_InvalidUtf8 = 2,
  SecStatus_ParseError = 3,
  SecStatus_InvalidInput = 4,
  SecStatus_SolveError = 5,
} SecStatus;

/**
 * Objective selector for the minimizer.
 */
typedef enum SecObjective {
  SecObjective_Edges = 0,
  SecObjective_Weighted = 1,
} SecObjective;

typedef struct SecInstance SecInstance;

typedef struct SecSectioning SecSectioning;

typedef struct SecTimetable SecTimetable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len` bytes) and returns the full message length.
 *
 * # Safety
 * `buf` must point to `len` writable bytes, or be null (to query the
 * length only).
 */
uintptr_t sec_last_error(char *buf, uintptr_t len);

/**
 * Parses an instance document (TOML text).
 *
 * # Safety
 * `text` must be a NUL-terminated string, `out` a valid pointer.
 */
enum SecStatus sec_instance_parse(const char *text, struct SecInstance **out);

/**
 * Generates a named preset (`tiny`, `easy`, `medium`, `medium2`, `hard`).
 *
 * # Safety
 * `preset` must be a NUL-terminated string, `out` a valid pointer.
 */
enum SecStatus sec_instance_generate(const char *preset, uint64_t seed, struct SecInstance **out);

/**
 * Serializes the instance back to its canonical document.
 *
 * # Safety
 * Pointers must be valid; the returned string is freed with
 * `sec_string_free`.
 */
enum SecStatus sec_instance_to_text(const struct SecInstance *inst, char **out);

/**
 * # Safety
 * `inst` must be a live handle from this library (or null, giving 0).
 */
uintptr_t sec_instance_sections(const struct SecInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle from this library (or null, giving 0).
 */
uint32_t sec_instance_students(const struct SecInstance *inst);

/**
 * # Safety
 * `inst` must come from this library and not be freed twice.
 */
void sec_instance_free(struct SecInstance *inst);

/**
 * Runs the greedy chain sectioning.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_greedy_section(const struct SecInstance *inst,
                                  uint64_t seed,
                                  struct SecSectioning **out);

/**
 * Local-search edge minimization from a starting sectioning.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_improve(const struct SecInstance *inst,
                           const struct SecSectioning *start,
                           enum SecObjective objective,
                           double budget_seconds,
                           uint64_t seed,
                           uint32_t workers,
                           struct SecSectioning **out);

/**
 * Objective value of a sectioning.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_objective_value(const struct SecInstance *inst,
                                   const struct SecSectioning *f,
                                   enum SecObjective objective,
                                   double *out);

/**
 * Parses a sectioning document (`student\tcourse\tsection` lines).
 *
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_sectioning_parse(const char *text, struct SecSectioning **out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_sectioning_to_text(const struct SecSectioning *f, char **out);

/**
 * # Safety
 * `f` must come from this library and not be freed twice.
 */
void sec_sectioning_free(struct SecSectioning *f);

/**
 * Two-phase timetable construction for a sectioning; the handle carries
 * both the timetable and its conflict report.
 *
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_phased_solve(const struct SecInstance *inst,
                                const struct SecSectioning *f,
                                double budget_seconds,
                                uint64_t seed,
                                uint32_t workers,
                                struct SecTimetable **out);

/**
 * # Safety
 * `tt` must be a live handle from this library (or null, giving NaN).
 */
double sec_timetable_objective(const struct SecTimetable *tt);

/**
 * # Safety
 * `tt` must be a live handle from this library (or null, giving u64::MAX).
 */
uint64_t sec_timetable_clashes(const struct SecTimetable *tt);

/**
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_timetable_to_text(const struct SecTimetable *tt, char **out);

/**
 * Renders the week grid of one division (`<group>.<k>`).
 *
 * # Safety
 * Pointers must be valid.
 */
enum SecStatus sec_render_division(const struct SecInstance *inst,
                                   const struct SecSectioning *f,
                                   const struct SecTimetable *tt,
                                   const char *division,
                                   char **out);

/**
 * # Safety
 * `tt` must come from this library and not be freed twice.
 */
void sec_timetable_free(struct SecTimetable *tt);

/**
 * # Safety
 * `s` must be a string returned by this library, freed at most once.
 */
void sec_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SECTIONING_CAPI_H */
