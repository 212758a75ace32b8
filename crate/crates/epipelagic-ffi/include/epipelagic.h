#ifndef EPIPELAGIC_H
#define EPIPELAGIC_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. `SCHEMA` and `STRATUM` match the command-line exit codes.
 */
typedef enum EpiStatus {
  EPI_STATUS_OK = 0,
  EPI_STATUS_FAILED = 1,
  EPI_STATUS_SCHEMA = 2,
  EPI_STATUS_STRATUM = 3,
  EPI_STATUS_NULL_ARGUMENT = 4,
  EPI_STATUS_INVALID_UTF8 = 5,
  EPI_STATUS_PANIC = 6,
} EpiStatus;

/**
 * A validated group and stratum.
 */
typedef struct EpiStratum EpiStratum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next call
 * that fails on the same thread.
 */
const char *epi_last_error(void);

/**
 * Parses and validates a stratum document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum EpiStatus epi_stratum_parse(const char *json, struct EpiStratum **out);

/**
 * # Safety
 * `h` must come from [`epi_stratum_parse`] and not be freed twice.
 */
void epi_stratum_free(struct EpiStratum *h);

/**
 * Rank of the general linear group receiving the lift.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EpiStatus epi_stratum_total_rank(const struct EpiStratum *h, uintptr_t *out);

/**
 * The lift as JSON, as printed by `epipelagic lift`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EpiStatus epi_stratum_lift_json(const struct EpiStratum *h, char **out);

/**
 * The L-packet as JSON, as printed by `epipelagic packet`.
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum EpiStatus epi_stratum_packet_json(const struct EpiStratum *h, char **out);

/**
 * Gauss sum of the diagonal form `diag[0..len]` over F_p, as JSON.
 *
 * # Safety
 * `diag` must point to `len` integers and `out` be a valid pointer.
 */
enum EpiStatus epi_gauss_json(uint32_t p, const int64_t *diag, uintptr_t len, char **out);

/**
 * Runs a verification suite; `FAILED` if any check fails, with the report
 * still written to `out`.
 *
 * # Safety
 * `suite` must be nul-terminated, `primes` point to `len` values and `out`
 * be a valid pointer.
 */
enum EpiStatus epi_verify_json(const char *suite,
                               const uint32_t *primes,
                               uintptr_t len,
                               char **out);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void epi_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EPIPELAGIC_H */
