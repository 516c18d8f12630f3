/* C interface for the groupforge tournament simulator. */

#ifndef GROUPFORGE_H
#define GROUPFORGE_H

/* Generated by cbindgen; edit src/lib.rs instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function.
typedef enum gf_status {
  // Success.
  GF_STATUS_OK = 0,
  // A pointer argument was null.
  GF_STATUS_NULL_ARGUMENT = 1,
  // An argument failed validation (unknown format, bad configuration).
  GF_STATUS_INVALID_ARGUMENT = 2,
  // The team data could not be loaded or is inconsistent.
  GF_STATUS_TEAM_DATA = 3,
  // The simulation failed at run time.
  GF_STATUS_RUNTIME = 4,
  // An unexpected internal error (caught panic).
  GF_STATUS_INTERNAL = 5,
} gf_status;

// Opaque simulation report.
typedef struct gf_report gf_report;

// Opaque team-rating table.
typedef struct gf_table gf_table;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a table with the embedded rating data. Never fails.
// The handle must be released with `gf_table_free`.
struct gf_table *gf_table_default(void);

// Loads a table from a CSV file.
//
// # Safety
// `path` must be a valid NUL-terminated string and `out` a valid pointer.
enum gf_status gf_table_load_csv(const char *path, struct gf_table **out);

// Releases a table handle. Null is ignored.
//
// # Safety
// `table` must be null or a pointer returned by this library, not yet freed.
void gf_table_free(struct gf_table *table);

// Runs the Monte Carlo experiment.
//
// `format` is `"official"` or `"imbalanced"`; `threads` 0 selects an
// automatic worker count. On success `*out` owns the report.
//
// # Safety
// `table`, `format` and `out` must be valid pointers.
enum gf_status gf_simulate(const struct gf_table *table,
                           const char *format,
                           uint64_t draws,
                           uint64_t sims,
                           uint64_t seed,
                           uintptr_t threads,
                           struct gf_report **out);

// Releases a report handle. Null is ignored.
//
// # Safety
// `report` must be null or a pointer returned by this library, not yet freed.
void gf_report_free(struct gf_report *report);

// Serializes a report as a JSON string; release it with `gf_string_free`.
// Returns null on error.
//
// # Safety
// `report` must be a valid report handle.
char *gf_report_json(const struct gf_report *report);

// Average group-stage Elo difference of a report; NaN on a null handle.
//
// # Safety
// `report` must be null or a valid report handle.
double gf_report_avg_elo_difference(const struct gf_report *report);

// Probability that the named team reaches the round of 16; negative on
// error (unknown team or null argument).
//
// # Safety
// `report` must be a valid report handle; `team` a NUL-terminated string.
double gf_report_round_of_16(const struct gf_report *report, const char *team);

// Measures the round-of-16 probability change when `team` is moved to
// `pot` before the draw of the imbalanced format. On success writes the
// change in percentage points to `delta_pp`.
//
// # Safety
// `table`, `team` and `delta_pp` must be valid pointers.
enum gf_status gf_tanking_delta(const struct gf_table *table,
                                const char *team,
                                uint8_t pot,
                                uint64_t draws,
                                uint64_t sims,
                                uint64_t seed,
                                double *delta_pp);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void gf_string_free(char *s);

// Library version as a static string; do not free.
const char *gf_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* GROUPFORGE_H */
