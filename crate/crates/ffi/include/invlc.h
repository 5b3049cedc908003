#ifndef INVLC_H
#define INVLC_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum InvlcStatus {
  INVLC_STATUS_OK = 0,
  INVLC_STATUS_NULL_POINTER = 1,
  INVLC_STATUS_INVALID_ARGUMENT = 2,
  INVLC_STATUS_PARSE_ERROR = 3,
  INVLC_STATUS_NOT_STABILIZED = 4,
  INVLC_STATUS_BUFFER_TOO_SMALL = 5,
  INVLC_STATUS_PANIC = 6,
} InvlcStatus;

/**
 * A finite matrix group, closed under its generators.
 */
typedef struct InvlcGroup InvlcGroup;

/**
 * Summary of one graded piece of local cohomology.
 */
typedef struct InvlcPieceSummary {
  size_t dim;
  /**
   * Dimension of the invariant part, or -1 without a group.
   */
  int64_t invariant_dim;
  uint32_t level_reached;
} InvlcPieceSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread, or null. Valid until
 * the next call into the library on this thread.
 */
const char *invlc_last_error(void);

/**
 * Static version string.
 */
const char *invlc_version(void);

/**
 * Closes the group generated by `num_generators` matrices of size `n x n`,
 * given as consecutive row-major integer blocks in `entries`. `field_p = 0`
 * selects Q, otherwise GF(field_p). `max_order = 0` uses the default bound.
 *
 * # Safety
 * `entries` must point to `num_generators * n * n` integers and `out` must
 * be a valid pointer.
 */
enum InvlcStatus invlc_group_new(uint64_t field_p,
                                 size_t n,
                                 const int64_t *entries,
                                 size_t num_generators,
                                 size_t max_order,
                                 struct InvlcGroup **out);

/**
 * # Safety
 * `group` must come from [`invlc_group_new`] and not be used afterwards.
 */
void invlc_group_free(struct InvlcGroup *group);

/**
 * # Safety
 * `group` and `out` must be valid pointers.
 */
enum InvlcStatus invlc_group_order(const struct InvlcGroup *group, size_t *out);

/**
 * # Safety
 * `group` and `out` must be valid pointers.
 */
enum InvlcStatus invlc_group_is_in_sl(const struct InvlcGroup *group, bool *out);

/**
 * Molien series coefficients for degrees `0..=max_deg` (characteristic
 * zero only). `out` must hold at least `max_deg + 1` entries.
 *
 * # Safety
 * `group` must be valid and `out` must point to `out_len` writable values.
 */
enum InvlcStatus invlc_molien(const struct InvlcGroup *group,
                              uint32_t max_deg,
                              uint64_t *out,
                              size_t out_len);

/**
 * `dim (R^G)_d` for `d = 0..=max_deg`, by direct linear algebra.
 *
 * # Safety
 * As [`invlc_molien`].
 */
enum InvlcStatus invlc_hilbert_series(const struct InvlcGroup *group,
                                      uint32_t max_deg,
                                      uint64_t *out,
                                      size_t out_len);

/**
 * `H^i_I(R)_d` for the ideal generated by the comma-separated `ideal` in
 * `n` variables. `group` may be null; otherwise it supplies the field and
 * must leave every ideal generator invariant. `t_max = 0` and `window = 0`
 * select the defaults. Returns `INVLC_STATUS_NOT_STABILIZED` rather than a
 * number when the level tower does not settle.
 *
 * # Safety
 * `ideal` must be a nul-terminated string, `group` null or valid, `out`
 * valid.
 */
enum InvlcStatus invlc_lc_piece(uint64_t field_p,
                                size_t n,
                                const char *ideal,
                                const struct InvlcGroup *group,
                                size_t i,
                                int64_t d,
                                uint32_t t_max,
                                uint32_t window,
                                struct InvlcPieceSummary *out);

/**
 * Runs a CLI command (e.g. `"lc"`) on a JSON job document and returns the
 * JSON result document in `out_json`. `out_exit_code` receives the exit
 * code the command-line tool would use. The cache directory is taken from
 * `INVLC_CACHE_DIR`.
 *
 * # Safety
 * `command` and `job_json` must be nul-terminated strings; the out-pointers
 * must be valid. Free `*out_json` with [`invlc_string_free`].
 */
enum InvlcStatus invlc_run_job(const char *command,
                               const char *job_json,
                               char **out_json,
                               int32_t *out_exit_code);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void invlc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INVLC_H */
