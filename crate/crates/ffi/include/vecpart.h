#ifndef VECPART_H
#define VECPART_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes of the C interface.
 */
typedef enum VpStatus {
  VP_STATUS_OK = 0,
  VP_STATUS_NULL_ARGUMENT = 1,
  VP_STATUS_INVALID_INPUT = 2,
  VP_STATUS_NOT_POINTED = 3,
  VP_STATUS_NOT_GENERIC = 4,
  VP_STATUS_VERIFICATION_FAILED = 5,
  VP_STATUS_GUARD_LIMIT = 6,
  VP_STATUS_PANIC = 7,
} VpStatus;

/*
 Opaque configuration handle.
 */
typedef struct VpConfig VpConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Creates a configuration from `count` vectors of dimension `dim`, stored
 row by row in `coords` (`count * dim` integers).

 # Safety
 `coords` must point to `count * dim` readable integers and `out` to a
 writable handle slot.
 */
enum VpStatus vp_config_new(uintptr_t dim,
                            const int64_t *coords,
                            uintptr_t count,
                            struct VpConfig **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `cfg` must be null or a handle from `vp_config_new` not yet freed.
 */
void vp_config_free(struct VpConfig *cfg);

/*
 Dimension of the ambient lattice, or 0 for a null handle.

 # Safety
 `cfg` must be null or a live handle.
 */
uintptr_t vp_config_dim(const struct VpConfig *cfg);

/*
 Number of vectors, or 0 for a null handle.

 # Safety
 `cfg` must be null or a live handle.
 */
uintptr_t vp_config_len(const struct VpConfig *cfg);

/*
 Lattice volume of the zonotope, as a decimal string.

 # Safety
 `cfg` must be a live handle and `out` writable.
 */
enum VpStatus vp_delta(const struct VpConfig *cfg, char **out);

/*
 Number of ways to write `point` (`dim` integers) as a nonnegative integer
 combination of the vectors, as a decimal string.

 # Safety
 `point` must hold `vp_config_dim(cfg)` integers and `out` be writable.
 */
enum VpStatus vp_partition_function(const struct VpConfig *cfg, const int64_t *point, char **out);

/*
 `T_X` at a rational point written like `"2,1/3"`, as an exact fraction.

 # Safety
 `point` must be a NUL-terminated string and `out` writable.
 */
enum VpStatus vp_spline_eval(const struct VpConfig *cfg, const char *point, char **out);

/*
 Combinatorial census (subspaces, cocircuits, topes, walls, big cells)
 as a JSON report.

 # Safety
 `cfg` must be a live handle and `out` writable.
 */
enum VpStatus vp_structure_json(const struct VpConfig *cfg, char **out);

/*
 Localization of the partition function at the tope containing `point`
 (e.g. `"2,1"`), verified on the window of the given radius, as a JSON
 report.

 # Safety
 `point` must be a NUL-terminated string, `cfg` a live handle and `out`
 writable.
 */
enum VpStatus vp_localize_json(const struct VpConfig *cfg,
                               const char *point,
                               int64_t window_radius,
                               char **out);

/*
 Releases a string returned by the library; null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void vp_string_free(char *s);

/*
 Description of the last failure on this thread (empty after success).
 The pointer stays valid until the next library call on this thread.
 */
const char *vp_last_error(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *vp_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VECPART_H */
