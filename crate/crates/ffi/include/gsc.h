#ifndef GSC_H
#define GSC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum GscStatus {
  GSC_STATUS_OK = 0,
  GSC_STATUS_NULL_POINTER = 1,
  GSC_STATUS_INVALID_UTF8 = 2,
  GSC_STATUS_INVALID_SPEC = 3,
  GSC_STATUS_PARSE = 4,
  GSC_STATUS_INVALID_ARGUMENT = 5,
  GSC_STATUS_BUDGET = 6,
  GSC_STATUS_NOT_AUTOMORPHISM = 7,
  GSC_STATUS_NO_CONVERGENCE = 8,
  GSC_STATUS_ISOLATED_COMPONENT = 9,
  GSC_STATUS_WALK_LIMIT = 10,
  GSC_STATUS_EMPTY_PROFILE = 11,
  GSC_STATUS_IO = 12,
  GSC_STATUS_BUFFER_TOO_SMALL = 13,
  GSC_STATUS_PANIC = 14,
} GscStatus;

// Opaque harmonic function between opposite faces.
typedef struct GscSolution GscSolution;

// Opaque carpet specification.
typedef struct GscSpec GscSpec;

// Library version as a static string; do not free.
const char *gsc_version(void);

// Copy of the last error message on this thread, or NULL if none.
char *gsc_last_error(void);

// # Safety
// `s` must come from this library and not have been freed.
void gsc_string_free(char *s);

// Parses a spec from `{"d": .., "l": .., "S": [[..], ..]}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum GscStatus gsc_spec_from_json(const char *json, struct GscSpec **out);

// `"sc"`, `"menger"` or `"counterexample:d,l"`.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum GscStatus gsc_spec_builtin(const char *name, struct GscSpec **out);

// The counterexample family member with parameters `(d, l)`; side `2ld`.
//
// # Safety
// `out` must be a valid pointer.
enum GscStatus gsc_spec_counterexample(size_t d, size_t l, struct GscSpec **out);

// # Safety
// `spec` must come from a `gsc_spec_*` constructor and not have been freed.
void gsc_spec_free(struct GscSpec *spec);

// Dimension `d`; 0 for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
size_t gsc_spec_dim(const struct GscSpec *spec);

// Subdivision factor `l`; 0 for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
size_t gsc_spec_side(const struct GscSpec *spec);

// Number of kept cells `#S`; 0 for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
size_t gsc_spec_len(const struct GscSpec *spec);

// SHA-256 of the canonical JSON, as hex; NULL for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
char *gsc_spec_hash(const struct GscSpec *spec);

// Canonical JSON; NULL for NULL.
//
// # Safety
// `spec` must be NULL or a live handle.
char *gsc_spec_to_json(const struct GscSpec *spec);

// Checks the four axioms. `*pass` is 1 when all hold. When `report` is not
// NULL it receives the full report as JSON.
//
// # Safety
// `spec` must be a live handle, `pass` valid, `report` NULL or valid.
enum GscStatus gsc_spec_validate(const struct GscSpec *spec, int *pass, char **report);

// Slab condition along the first axis: `*holds` is 1 when some slab count
// differs from the first.
//
// # Safety
// `spec` must be a live handle and `holds` valid.
enum GscStatus gsc_spec_bb99(const struct GscSpec *spec, int *holds);

// Harmonic function on the level-`level` cell graph, 0 on `{x_axis = 0}`
// and 1 on `{x_axis = 1}`; `axis` is 0-based.
//
// # Safety
// `spec` must be a live handle and `out` valid.
enum GscStatus gsc_solve_faces(const struct GscSpec *spec,
                               uint32_t level,
                               size_t axis,
                               double tol,
                               uint64_t budget,
                               struct GscSolution **out);

// # Safety
// `solution` must come from [`gsc_solve_faces`] and not have been freed.
void gsc_solution_free(struct GscSolution *solution);

// Number of cells; 0 for NULL.
//
// # Safety
// `solution` must be NULL or a live handle.
size_t gsc_solution_len(const struct GscSolution *solution);

// Level of the cell graph; 0 for NULL.
//
// # Safety
// `solution` must be NULL or a live handle.
uint32_t gsc_solution_level(const struct GscSolution *solution);

// Dirichlet energy; NaN for NULL.
//
// # Safety
// `solution` must be NULL or a live handle.
double gsc_solution_energy(const struct GscSolution *solution);

// Max-norm residual on free cells; NaN for NULL.
//
// # Safety
// `solution` must be NULL or a live handle.
double gsc_solution_residual(const struct GscSolution *solution);

// Conjugate-gradient iterations; 0 for NULL.
//
// # Safety
// `solution` must be NULL or a live handle.
size_t gsc_solution_iterations(const struct GscSolution *solution);

// Copies the cell values, in cell order, into `buf` of length `len`.
//
// # Safety
// `solution` must be a live handle and `buf` must hold `len` doubles.
enum GscStatus gsc_solution_values(const struct GscSolution *solution, double *buf, size_t len);

// Resistance sequence over levels `1..=n_max` as JSON in `*json`.
//
// # Safety
// `spec` must be a live handle and `json` valid.
enum GscStatus gsc_resistance_sequence_json(const struct GscSpec *spec,
                                            uint32_t n_max,
                                            double tol,
                                            uint64_t budget,
                                            char **json);

// Mean and standard error of the first-axis crossing time of `trials`
// simple random walks at `level`.
//
// # Safety
// `spec` must be a live handle; `mean` and `std_error` valid.
enum GscStatus gsc_walk_crossing(const struct GscSpec *spec,
                                 uint32_t level,
                                 uint64_t trials,
                                 uint64_t seed,
                                 uint64_t budget,
                                 double *mean,
                                 double *std_error);

#endif  /* GSC_H */
