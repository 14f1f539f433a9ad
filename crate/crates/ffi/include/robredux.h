#ifndef ROBREDUX_H
#define ROBREDUX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RrConstruction {
  RR_CONSTRUCTION_TWO_STAGE_IS = 0,
  RR_CONSTRUCTION_RECOVERABLE_IS = 1,
  RR_CONSTRUCTION_TWO_STAGE_TSP = 2,
  RR_CONSTRUCTION_RECOVERABLE_TSP = 3,
  RR_CONSTRUCTION_TWO_STAGE_VC = 4,
  RR_CONSTRUCTION_RECOVERABLE_VC = 5,
} RrConstruction;

typedef enum RrStatus {
  RR_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8 or an out-of-range enum value.
   */
  RR_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Malformed instance text or JSON.
   */
  RR_STATUS_PARSE = 2,
  /**
   * The instance violates a construction or structure precondition.
   */
  RR_STATUS_PRECONDITION = 3,
  /**
   * An enumeration guard (`ROBREDUX_MAX_ENUM`) was hit.
   */
  RR_STATUS_TOO_LARGE = 4,
  /**
   * A panic was caught; please report it.
   */
  RR_STATUS_INTERNAL = 5,
} RrStatus;

/**
 * Robust graph instance, with its gadget map when it came from a reduction.
 */
typedef struct RrGraph RrGraph;

/**
 * Adjustable MIP with right-hand-side uncertainty.
 */
typedef struct RrMip RrMip;

/**
 * Parsed ∃∀∃-SAT instance.
 */
typedef struct RrQsat RrQsat;

/**
 * Parsed R-Adj-SAT instance.
 */
typedef struct RrRadjsat RrRadjsat;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library; do not free.
 */
const char *rr_last_error_message(void);

/**
 * Releases a string returned through a `char **` parameter. NULL is a no-op.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void rr_string_free(char *s);

/**
 * Library version, static storage.
 */
const char *rr_version(void);

/**
 * # Safety
 * `src` is a NUL-terminated string; `out` is writable.
 */
enum RrStatus rr_qsat_parse(const char *src, struct RrQsat **out);

/**
 * # Safety
 * `h` comes from [`rr_qsat_parse`] or is NULL.
 */
void rr_qsat_free(struct RrQsat *h);

/**
 * # Safety
 * `h` is a live handle; `answer` is writable.
 */
enum RrStatus rr_qsat_solve(const struct RrQsat *h, bool *answer);

/**
 * ∃∀∃-SAT → R-Adj-SAT; the result is a new handle.
 *
 * # Safety
 * `h` is a live handle; `out` is writable.
 */
enum RrStatus rr_qsat_reduce(const struct RrQsat *h, struct RrRadjsat **out);

/**
 * # Safety
 * `src` is a NUL-terminated string; `out` is writable.
 */
enum RrStatus rr_radjsat_parse(const char *src, struct RrRadjsat **out);

/**
 * # Safety
 * `h` comes from this library or is NULL.
 */
void rr_radjsat_free(struct RrRadjsat *h);

/**
 * # Safety
 * `h` is a live handle; `answer` is writable.
 */
enum RrStatus rr_radjsat_solve(const struct RrRadjsat *h, bool *answer);

/**
 * Instance text in the `p radjsat` format.
 *
 * # Safety
 * `h` is a live handle; `out` is writable.
 */
enum RrStatus rr_radjsat_write(const struct RrRadjsat *h, char **out);

/**
 * Builds a gadget instance; `construction` is an [`RrConstruction`] value
 * and `paid_recourse` selects the repaired cost table of the recoverable
 * independent-set construction.
 *
 * # Safety
 * `src` is a live handle; `out` is writable.
 */
enum RrStatus rr_graph_reduce(const struct RrRadjsat *src,
                              uint32_t construction,
                              bool paid_recourse,
                              struct RrGraph **out);

/**
 * Reads an instance and, optionally (`map_json` may be NULL), its map.
 *
 * # Safety
 * Strings are NUL-terminated; `out` is writable.
 */
enum RrStatus rr_graph_from_json(const char *inst_json, const char *map_json, struct RrGraph **out);

/**
 * # Safety
 * `h` comes from this library or is NULL.
 */
void rr_graph_free(struct RrGraph *h);

/**
 * # Safety
 * `h` is a live handle; `out` is writable.
 */
enum RrStatus rr_graph_to_json(const struct RrGraph *h, char **out);

/**
 * Gadget map as JSON; `Precondition` when the handle has none.
 *
 * # Safety
 * `h` is a live handle; `out` is writable.
 */
enum RrStatus rr_graph_map_json(const struct RrGraph *h, char **out);

/**
 * Threshold decision through the structure-aware decider (needs a map).
 *
 * # Safety
 * `h` is a live handle; `answer` is writable.
 */
enum RrStatus rr_graph_decide(const struct RrGraph *h, bool *answer);

/**
 * Optimal robust value by exhaustive evaluation, as a rational string
 * (`"p/q"`, `"inf"` or `"-inf"`).
 *
 * # Safety
 * `h` is a live handle; `out` is writable.
 */
enum RrStatus rr_graph_evaluate(const struct RrGraph *h, char **out);

/**
 * `attack_y` targets the ζ-rows at y′ instead of z′.
 *
 * # Safety
 * `src` is a live handle; `out` is writable.
 */
enum RrStatus rr_mip_build(const struct RrRadjsat *src, bool attack_y, struct RrMip **out);

/**
 * # Safety
 * `src` is NUL-terminated; `out` is writable.
 */
enum RrStatus rr_mip_from_json(const char *src, struct RrMip **out);

/**
 * # Safety
 * `h` comes from this library or is NULL.
 */
void rr_mip_free(struct RrMip *h);

/**
 * # Safety
 * `h` is a live handle; `out` is writable.
 */
enum RrStatus rr_mip_to_json(const struct RrMip *h, char **out);

/**
 * Exact ∃x ∀ζ ∃y feasibility for threshold-structured models.
 *
 * # Safety
 * `h` is a live handle; `feasible` is writable.
 */
enum RrStatus rr_mip_check(const struct RrMip *h, bool *feasible);

/**
 * Runs a corpus check (`theorem` as on the command line: "2" … "10",
 * "K-adapt"); writes the JSON report. `mismatches` receives the number of
 * disagreements.
 *
 * # Safety
 * Strings are NUL-terminated; output pointers are writable.
 */
enum RrStatus rr_verify(const char *theorem,
                        const char *corpus,
                        uint64_t seed,
                        size_t *mismatches,
                        char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBREDUX_H */
