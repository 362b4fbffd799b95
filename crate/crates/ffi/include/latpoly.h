#ifndef LATPOLY_H
#define LATPOLY_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of a call.
 */
typedef enum LpStatus {
  LP_STATUS_OK = 0,
  LP_STATUS_NULL_POINTER = 1,
  LP_STATUS_INVALID_ARGUMENT = 2,
  LP_STATUS_NOT_FULL_DIMENSIONAL = 3,
  LP_STATUS_BUFFER_TOO_SMALL = 4,
  LP_STATUS_IO = 5,
  LP_STATUS_FORMAT = 6,
  LP_STATUS_INTERNAL = 7,
} LpStatus;

/**
 * A list of polytope classes, ordered by volume and key.
 */
typedef struct LpDatabase LpDatabase;

/**
 * A lattice polytope.
 */
typedef struct LpPolytope LpPolytope;

/**
 * Property flags: 1 true, 0 false, -1 not decided within the budget.
 */
typedef struct LpProperties {
  int8_t spanning;
  int8_t very_ample;
  int8_t idp;
  int8_t unimodular_cover;
  int8_t unimodular_triangulation;
  int8_t smooth;
} LpProperties;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the next call.
 */
const char *lp_last_error(void);

/**
 * Builds the convex hull of `n_points` points of dimension `dim`, given row-major.
 *
 * # Safety
 * `coords` must point to `n_points * dim` integers and `out` to writable storage.
 */
enum LpStatus lp_polytope_new(const int64_t *coords,
                              size_t n_points,
                              size_t dim,
                              struct LpPolytope **out);

/**
 * # Safety
 * `p` must come from this library and not be used afterwards. Null is ignored.
 */
void lp_polytope_free(struct LpPolytope *p);

/**
 * Dimension, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t lp_polytope_dim(const struct LpPolytope *p);

/**
 * Normalized volume, or 0 for null.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
uint64_t lp_polytope_volume(const struct LpPolytope *p);

/**
 * Counts of vertices, lattice points and interior lattice points.
 *
 * # Safety
 * `p` must be a live handle; any output pointer may be null.
 */
enum LpStatus lp_polytope_counts(const struct LpPolytope *p,
                                 size_t *vertices,
                                 size_t *points,
                                 size_t *interior);

/**
 * Copies the vertices row-major into `buf` of `len` integers.
 * `written` receives the number of integers needed.
 *
 * # Safety
 * `buf` must hold `len` integers; `written` must be writable.
 */
enum LpStatus lp_polytope_vertices(const struct LpPolytope *p,
                                   int64_t *buf,
                                   size_t len,
                                   size_t *written);

/**
 * Canonical key as a new string; free with `lp_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum LpStatus lp_polytope_canonical_key(const struct LpPolytope *p, char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void lp_string_free(char *s);

/**
 * Whether two polytopes are unimodularly equivalent.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum LpStatus lp_polytopes_equivalent(const struct LpPolytope *a,
                                      const struct LpPolytope *b,
                                      bool *out);

/**
 * The h*-vector, `dim + 1` entries, into `buf` of `len` entries.
 *
 * # Safety
 * `buf` must hold `len` entries; `written` must be writable.
 */
enum LpStatus lp_polytope_hstar(const struct LpPolytope *p,
                                uint64_t *buf,
                                size_t len,
                                size_t *written);

/**
 * All six properties; `budget` bounds the cover and triangulation searches (0 for the default).
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum LpStatus lp_polytope_properties(const struct LpPolytope *p,
                                     uint64_t budget,
                                     struct LpProperties *out);

/**
 * All classes of `dim`-dimensional polytopes with volume at most `max_volume`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LpStatus lp_enumerate(size_t dim, uint64_t max_volume, struct LpDatabase **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
enum LpStatus lp_database_read(const char *path, struct LpDatabase **out);

/**
 * # Safety
 * `db` must be a live handle and `path` a NUL-terminated string.
 */
enum LpStatus lp_database_write(const struct LpDatabase *db, const char *path);

/**
 * Number of classes, or 0 for null.
 *
 * # Safety
 * `db` must be null or a live handle.
 */
size_t lp_database_len(const struct LpDatabase *db);

/**
 * Representative of class `index` as a new polytope handle.
 *
 * # Safety
 * `db` must be a live handle and `out` writable.
 */
enum LpStatus lp_database_get(const struct LpDatabase *db, size_t index, struct LpPolytope **out);

/**
 * # Safety
 * `db` must come from this library and not be used afterwards. Null is ignored.
 */
void lp_database_free(struct LpDatabase *db);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATPOLY_H */
