#ifndef HERMSRG_H
#define HERMSRG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * the library rejected the parameters or the construction failed
   */
  HS_STATUS_CONSTRUCTION_FAILED = 3,
  /**
   * `hs_graph_check_srg` on a graph that is not strongly regular
   */
  HS_STATUS_NOT_STRONGLY_REGULAR = 4,
  HS_STATUS_PARSE_ERROR = 5,
  /**
   * a lemma oracle found a counterexample (the report is still returned)
   */
  HS_STATUS_VERIFICATION_FAILED = 6,
  /**
   * a sampling budget or deadline stopped the run before it finished
   */
  HS_STATUS_INCOMPLETE = 7,
  HS_STATUS_PANIC = 8,
} HsStatus;

typedef enum {
  HS_VARIANT_PENCIL = 0,
  HS_VARIANT_LINE = 1,
} HsVariant;

typedef enum {
  HS_UNITAL_CLASSICAL = 0,
  HS_UNITAL_BUEKENHOUT_METZ = 1,
  HS_UNITAL_BUEKENHOUT_TITS = 2,
} HsUnital;

/**
 * Opaque graph handle.
 */
typedef struct HsGraph HsGraph;

typedef struct {
  uint64_t v;
  uint64_t k;
  uint64_t lambda;
  uint64_t mu;
} HsSrgParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *hs_version(void);

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next call into the library from this thread.
 */
const char *hs_last_error_message(void);

/**
 * NU(n + 1, q^2): non-isotropic points of PG(n, q^2), adjacent when they
 * span a tangent line.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
HsStatus hs_graph_build_nu(uint32_t n, uint32_t q, HsGraph **out);

/**
 * The switched mate of NU(n + 1, q^2), n >= 4.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
HsStatus hs_graph_build_switched(uint32_t n, uint32_t q, HsVariant variant, HsGraph **out);

/**
 * Graph of a unital of PG(2, q^2). `alpha_idx` and `beta_idx` are field table
 * indices (0 is zero, k is the (k-1)-th power of the primitive element) and
 * are only read for Buekenhout-Metz unitals.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
HsStatus hs_graph_build_gamma_u(uint32_t q,
                                HsUnital unital,
                                uint8_t alpha_idx,
                                uint8_t beta_idx,
                                HsGraph **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `g` must be NULL or a handle from this library not yet freed.
 */
void hs_graph_free(HsGraph *g);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t hs_graph_vertex_count(const HsGraph *g);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
HsStatus hs_graph_has_edge(const HsGraph *g, size_t i, size_t j, bool *out);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
HsStatus hs_graph_degree(const HsGraph *g, size_t v, size_t *out);

/**
 * Writes the parameters if the graph is strongly regular; otherwise returns
 * `NotStronglyRegular` with the offending vertices in the error message.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
HsStatus hs_graph_check_srg(const HsGraph *g, HsSrgParams *out);

/**
 * graph6 encoding without a trailing newline.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
HsStatus hs_graph_to_graph6(const HsGraph *g, char **out);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
HsStatus hs_graph_from_graph6(const char *text, HsGraph **out);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void hs_string_free(char *s);

/**
 * Runs one lemma oracle and writes its JSON report. `budget` 0 means the
 * lemma's default. The report is written whenever the oracle ran; the status
 * is then `VerificationFailed` on a mismatch and `Incomplete` for a partial
 * run.
 *
 * # Safety
 * `id` must be a NUL-terminated string and `out_json` writable.
 */
HsStatus hs_verify_lemma_json(const char *id,
                              uint32_t q,
                              size_t budget,
                              uint64_t seed,
                              char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HERMSRG_H */
