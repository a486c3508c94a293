#ifndef TRANSVERSE_H
#define TRANSVERSE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum TvStatus {
  TV_STATUS_OK = 0,
  TV_STATUS_NULL_POINTER = 1,
  TV_STATUS_INVALID_UTF8 = 2,
  TV_STATUS_PARSE = 3,
  TV_STATUS_NOT_COTRANSVERSE = 4,
  TV_STATUS_DIMENSION = 5,
  TV_STATUS_BUDGET = 6,
  TV_STATUS_BUFFER_TOO_SMALL = 7,
  TV_STATUS_INTERNAL = 8,
} TvStatus;

// Opaque handle to a validated cotransverse map.
typedef struct TvCubeMap TvCubeMap;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *tv_last_error(void);

// Parses a literal `m>n:a0,a1,...` into a new handle.
//
// # Safety
// `literal` must be a NUL-terminated string; `out` must be writable.
enum TvStatus tv_map_parse(const char *literal, struct TvCubeMap **out);

// Builds a handle from a table of `2^dom` images.
//
// # Safety
// `table` must point to `len` readable values; `out` must be writable.
enum TvStatus tv_map_from_table(uint32_t dom,
                                uint32_t cod,
                                const uint32_t *table,
                                size_t len,
                                struct TvCubeMap **out);

// Releases a handle; null is ignored.
//
// # Safety
// `map` must come from this library and not be used afterwards.
void tv_map_free(struct TvCubeMap *map);

// Domain dimension, or 0 for null.
//
// # Safety
// `map` must be null or a live handle.
uint32_t tv_map_dom(const struct TvCubeMap *map);

// Codomain dimension, or 0 for null.
//
// # Safety
// `map` must be null or a live handle.
uint32_t tv_map_cod(const struct TvCubeMap *map);

// Writes a newly allocated literal; release it with [`tv_string_free`].
//
// # Safety
// `map` must be a live handle; `out` must be writable.
enum TvStatus tv_map_to_literal(const struct TvCubeMap *map, char **out);

// Releases a string returned by this library; null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void tv_string_free(char *s);

// `g ∘ f` as a new handle.
//
// # Safety
// `g` and `f` must be live handles; `out` must be writable.
enum TvStatus tv_map_compose(const struct TvCubeMap *g,
                             const struct TvCubeMap *f,
                             struct TvCubeMap **out);

// Splits `f` as `phi ∘ psi` with `psi` an endo and `phi` cocubical.
//
// # Safety
// `f` must be a live handle; `psi` and `phi` must be writable.
enum TvStatus tv_map_factorize(const struct TvCubeMap *f,
                               struct TvCubeMap **psi,
                               struct TvCubeMap **phi);

// Evaluates the topological extension of `f` at the point with
// coordinates `num[i]/den[i]`; writes `cod` reduced coordinates.
//
// # Safety
// Input arrays hold `len` values, output arrays `out_len` writable values.
enum TvStatus tv_map_eval(const struct TvCubeMap *f,
                          const int64_t *num,
                          const int64_t *den,
                          size_t len,
                          int64_t *out_num,
                          int64_t *out_den,
                          size_t out_len);

// Number of cotransverse maps `[m] → [n]`, guarded by the budget from
// the `TRANSVERSE_BUDGET` environment variable.
//
// # Safety
// `out` must be writable.
enum TvStatus tv_count_homset(uint32_t m, uint32_t n, uint64_t *out);

// Directed distance `d₁(x, y)`. Sets `*finite` to false when `x ≰ y`,
// otherwise writes the distance as `*out_num / *out_den`.
//
// # Safety
// The four input arrays hold `len` values; outputs must be writable.
enum TvStatus tv_d1(const int64_t *x_num,
                    const int64_t *x_den,
                    const int64_t *y_num,
                    const int64_t *y_den,
                    size_t len,
                    bool *finite,
                    int64_t *out_num,
                    int64_t *out_den);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRANSVERSE_H */
