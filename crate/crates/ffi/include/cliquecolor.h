#ifndef CLIQUECOLOR_H
#define CLIQUECOLOR_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every fallible call.
 */
typedef enum CcStatus {
  CC_STATUS_OK = 0,
  CC_STATUS_NULL_POINTER = 1,
  CC_STATUS_INVALID_ARGUMENT = 2,
  CC_STATUS_BUDGET_EXHAUSTED = 3,
  CC_STATUS_INTERNAL = 4,
} CcStatus;

/**
 * Opaque coloring handle.
 */
typedef struct CcColoring CcColoring;

/**
 * Opaque graph handle.
 */
typedef struct CcGraph CcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *cc_last_error_message(void);

/**
 * Samples `G(n, p)` deterministically from `seed`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum CcStatus cc_graph_sample(size_t n, double p, uint64_t seed, struct CcGraph **out);

/**
 * Builds a graph on `n` vertices from `m` edges `(us[i], vs[i])`.
 *
 * # Safety
 * `us` and `vs` must point to `m` readable values each (or be null when
 * `m == 0`); `out` must be writable.
 */
enum CcStatus cc_graph_from_edges(size_t n,
                                  const size_t *us,
                                  const size_t *vs,
                                  size_t m,
                                  struct CcGraph **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void cc_graph_free(struct CcGraph *g);

/**
 * Vertex count; 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t cc_graph_vertex_count(const struct CcGraph *g);

/**
 * Edge count; 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t cc_graph_edge_count(const struct CcGraph *g);

/**
 * Runs procedure A (`variant == 0`) or B (`variant == 1`) and repairs the
 * result with at most `repair_budget` recolors. A NaN `epsilon` selects the
 * value implied by `(n, p)`.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CcStatus cc_color_procedure(const struct CcGraph *g,
                                 uint32_t variant,
                                 double p,
                                 double epsilon,
                                 size_t repair_budget,
                                 struct CcColoring **out);

/**
 * Wraps `n` colors (each at least 1) in a coloring handle.
 *
 * # Safety
 * `colors` must point to `n` readable values; `out` must be writable.
 */
enum CcStatus cc_coloring_from_array(const uint32_t *colors, size_t n, struct CcColoring **out);

/**
 * # Safety
 * `c` must be null or a live handle.
 */
size_t cc_coloring_len(const struct CcColoring *c);

/**
 * Color of vertex `v`; 0 for null or out of range.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
uint32_t cc_coloring_get(const struct CcColoring *c, size_t v);

/**
 * Number of distinct colors; 0 for null.
 *
 * # Safety
 * `c` must be null or a live handle.
 */
size_t cc_coloring_palette_size(const struct CcColoring *c);

/**
 * Copies the colors into `buf`, which must hold `cc_coloring_len(c)` values.
 *
 * # Safety
 * `c` must be live and `buf` writable for `len` values.
 */
enum CcStatus cc_coloring_copy(const struct CcColoring *c, uint32_t *buf, size_t len);

/**
 * # Safety
 * `c` must be null or a handle from this library not yet freed.
 */
void cc_coloring_free(struct CcColoring *c);

/**
 * Writes whether `c` leaves no inclusion-maximal clique of size at least 2
 * monochromatic.
 *
 * # Safety
 * `g`, `c` must be live handles and `out` writable.
 */
enum CcStatus cc_coloring_is_valid(const struct CcGraph *g, const struct CcColoring *c, bool *out);

/**
 * Repairs `c` into a new valid coloring using at most `budget` recolors.
 *
 * # Safety
 * `g`, `c` must be live handles and `out` writable.
 */
enum CcStatus cc_repair(const struct CcGraph *g,
                        const struct CcColoring *c,
                        size_t budget,
                        struct CcColoring **out);

/**
 * Exact clique chromatic number within `node_limit` search nodes.
 *
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum CcStatus cc_exact_clique_chromatic(const struct CcGraph *g,
                                        uint64_t node_limit,
                                        uint32_t *out);

/**
 * Parameter schedule and bound calculus for `(n, p)` as a JSON string,
 * released with [`cc_string_free`]. A NaN `epsilon` selects the default.
 *
 * # Safety
 * `out` must be writable.
 */
enum CcStatus cc_schedule_json(double n, double p, double epsilon, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void cc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLIQUECOLOR_H */
