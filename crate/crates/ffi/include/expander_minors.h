#ifndef EXPANDER_MINORS_H
#define EXPANDER_MINORS_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum EmStatus {
  EM_STATUS_OK = 0,
  /**
   * The search finished without a witness; the result handle is still set.
   */
  EM_STATUS_NOT_FOUND = 1,
  EM_STATUS_INVALID_ARGUMENT = 2,
  EM_STATUS_PARSE = 3,
  /**
   * A construction stalled before producing a witness.
   */
  EM_STATUS_STALLED = 4,
  EM_STATUS_NULL_POINTER = 5,
  EM_STATUS_INTERNAL = 6,
} EmStatus;

/**
 * `K_t` subdivision search mode.
 */
typedef enum EmSubdivisionMode {
  EM_SUBDIVISION_MODE_SUBDIVISION = 0,
  /**
   * Fall back to a `K_t` minor from exhaustive search on tiny graphs.
   */
  EM_SUBDIVISION_MODE_MINOR_OR_SUBDIVISION = 1,
} EmSubdivisionMode;

/**
 * Opaque simple undirected graph.
 */
typedef struct EmGraph EmGraph;

/**
 * Opaque result of [`em_find_minor`].
 */
typedef struct EmMinorResult EmMinorResult;

/**
 * Opaque result of [`em_find_subdivision`].
 */
typedef struct EmSubdivisionResult EmSubdivisionResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *em_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a pointer obtained from this library, freed once.
 */
void em_string_free(char *s);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`u0, v0, u1, v1, ...`). Duplicate edges are merged.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values (may be NULL when
 * `edge_count` is 0); `out` must be a valid pointer.
 */
enum EmStatus em_graph_from_edges(size_t n,
                                  const size_t *edges,
                                  size_t edge_count,
                                  struct EmGraph **out);

/**
 * Parses an edge list (`u v` per line, 0-based) or a DIMACS graph.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum EmStatus em_graph_parse(const char *text, struct EmGraph **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, freed once.
 */
void em_graph_free(struct EmGraph *g);

/**
 * Vertex count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t em_graph_vertex_count(const struct EmGraph *g);

/**
 * Edge count, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live graph handle.
 */
size_t em_graph_edge_count(const struct EmGraph *g);

/**
 * `2|E|/|V|`, as a double.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum EmStatus em_graph_average_degree(const struct EmGraph *g, double *out);

/**
 * Extracts an expander and looks for a small `K_t` minor in it. Sets `out`
 * on `EM_STATUS_OK` (model found) and `EM_STATUS_NOT_FOUND`.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum EmStatus em_find_minor(const struct EmGraph *g,
                            size_t t,
                            double epsilon,
                            struct EmMinorResult **out);

/**
 * Vertices in the model, 0 when there is none.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
size_t em_minor_total_vertices(const struct EmMinorResult *r);

/**
 * Number of branch sets, 0 when there is no model.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
size_t em_minor_branch_set_count(const struct EmMinorResult *r);

/**
 * Borrows branch set `index` as a sorted array of vertex ids. The array
 * lives as long as `r`.
 *
 * # Safety
 * `r` must be a live result handle; `out_vertices` and `out_len` valid pointers.
 */
enum EmStatus em_minor_branch_set(const struct EmMinorResult *r,
                                  size_t index,
                                  const size_t **out_vertices,
                                  size_t *out_len);

/**
 * The whole result as JSON; free with [`em_string_free`]. NULL on failure.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
char *em_minor_to_json(const struct EmMinorResult *r);

/**
 * # Safety
 * `r` must be NULL or a handle from this library, freed once.
 */
void em_minor_free(struct EmMinorResult *r);

/**
 * Extracts a small-set expander and looks for a small `K_t` subdivision.
 * Sets `out` on `EM_STATUS_OK` and `EM_STATUS_NOT_FOUND`.
 *
 * # Safety
 * `g` must be a live graph handle and `out` a valid pointer.
 */
enum EmStatus em_find_subdivision(const struct EmGraph *g,
                                  size_t t,
                                  double epsilon,
                                  enum EmSubdivisionMode mode,
                                  struct EmSubdivisionResult **out);

/**
 * Vertices in the subdivision (or the fallback minor), 0 when there is none.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
size_t em_subdivision_total_vertices(const struct EmSubdivisionResult *r);

/**
 * Whether the result holds a subdivision (rather than a fallback minor or nothing).
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
bool em_subdivision_is_subdivision(const struct EmSubdivisionResult *r);

/**
 * Borrows the corners of the subdivision. The array lives as long as `r`.
 *
 * # Safety
 * `r` must be a live result handle; `out_corners` and `out_len` valid pointers.
 */
enum EmStatus em_subdivision_corners(const struct EmSubdivisionResult *r,
                                     const size_t **out_corners,
                                     size_t *out_len);

/**
 * Borrows the path joining corners `i < j`. The array lives as long as `r`.
 *
 * # Safety
 * `r` must be a live result handle; `out_vertices` and `out_len` valid pointers.
 */
enum EmStatus em_subdivision_path(const struct EmSubdivisionResult *r,
                                  size_t i,
                                  size_t j,
                                  const size_t **out_vertices,
                                  size_t *out_len);

/**
 * The whole result as JSON; free with [`em_string_free`]. NULL on failure.
 *
 * # Safety
 * `r` must be NULL or a live result handle.
 */
char *em_subdivision_to_json(const struct EmSubdivisionResult *r);

/**
 * # Safety
 * `r` must be NULL or a handle from this library, freed once.
 */
void em_subdivision_free(struct EmSubdivisionResult *r);

/**
 * Checks a witness given as JSON against `g`. Accepts a minor model
 * (`branch_sets`), a subdivision (`corners`, `paths`), or a result from the
 * `*_to_json` functions. Writes the verdict to `out_valid`; a malformed
 * witness is an error, a wrong one is `false`.
 *
 * # Safety
 * `g` must be a live graph handle, `json` a NUL-terminated string and
 * `out_valid` a valid pointer.
 */
enum EmStatus em_verify_json(const struct EmGraph *g, const char *json, bool *out_valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EXPANDER_MINORS_H */
