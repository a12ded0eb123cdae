#ifndef GCOMPLEX_H
#define GCOMPLEX_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GcxStatus {
  GCX_STATUS_OK = 0,
  GCX_STATUS_NULL_POINTER = 1,
  GCX_STATUS_INVALID_UTF8 = 2,
  GCX_STATUS_INVALID_ARGUMENT = 3,
  GCX_STATUS_COMPUTATION = 4,
  GCX_STATUS_PANIC = 5,
} GcxStatus;

/**
 * A finite linear combination of graphs with rational coefficients.
 */
typedef struct GcxCochain GcxCochain;

/**
 * Basis store, memoized matrices and ranks.
 */
typedef struct GcxEngine GcxEngine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library and valid until the next call on this thread.
 */
const char *gcx_last_error(void);

/**
 * Library version as a static string.
 */
const char *gcx_version(void);

/**
 * Create an engine admitting buckets with at most `max_v` vertices,
 * `max_e` edges and `max_l` legs.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum GcxStatus gcx_engine_new(size_t max_v, size_t max_e, size_t max_l, struct GcxEngine **out);

/**
 * # Safety
 * `engine` must be null or a handle from `gcx_engine_new` not yet freed.
 */
void gcx_engine_free(struct GcxEngine *engine);

/**
 * Cohomology dimension at loop order `b` and degree `d`, with ranks
 * confirmed over two primes (and the rationals when small).
 *
 * # Safety
 * `engine` must be a live handle, `flavor` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum GcxStatus gcx_cohomology_dim(const struct GcxEngine *engine,
                                  const char *flavor,
                                  int64_t n,
                                  int64_t b,
                                  int64_t d,
                                  size_t *out);

/**
 * Number of basis classes in the bucket with `v` vertices, `e` edges and `l` legs.
 *
 * # Safety
 * As for `gcx_cohomology_dim`.
 */
enum GcxStatus gcx_basis_size(const struct GcxEngine *engine,
                              const char *flavor,
                              int64_t n,
                              size_t v,
                              size_t e,
                              size_t l,
                              size_t *out);

/**
 * A named cochain (`edge`, `theta`, `wheel`, `shoikhet`, ...). `param` is
 * the length or arity where the name takes one; pass a negative value otherwise.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GcxStatus gcx_cochain_named(const char *name,
                                 int64_t n,
                                 int64_t param,
                                 struct GcxCochain **out);

/**
 * Parse a cochain from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GcxStatus gcx_cochain_parse(const char *text, struct GcxCochain **out);

/**
 * # Safety
 * `x` must be a live cochain handle and `out` a valid pointer.
 */
enum GcxStatus gcx_cochain_differential(const struct GcxCochain *x, struct GcxCochain **out);

/**
 * # Safety
 * `x` and `y` must be live cochain handles and `out` a valid pointer.
 */
enum GcxStatus gcx_cochain_bracket(const struct GcxCochain *x,
                                   const struct GcxCochain *y,
                                   struct GcxCochain **out);

/**
 * Number of terms.
 *
 * # Safety
 * `x` must be a live cochain handle and `out` a valid pointer.
 */
enum GcxStatus gcx_cochain_len(const struct GcxCochain *x, size_t *out);

/**
 * Text form of `x`; release with `gcx_string_free`.
 *
 * # Safety
 * `x` must be a live cochain handle and `out` a valid pointer.
 */
enum GcxStatus gcx_cochain_to_text(const struct GcxCochain *x, char **out);

/**
 * # Safety
 * `x` must be null or a cochain handle not yet freed.
 */
void gcx_cochain_free(struct GcxCochain *x);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void gcx_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GCOMPLEX_H */
