/* C ABI for the corrkit nonlocal-correlation measures.
 *
 * Every fallible call returns a CorrkitStatus; CORRKIT_STATUS_OK (0) means
 * success. Handles from corrkit_state_from_json must be released with
 * corrkit_state_free. The last error message is kept per thread and read
 * back with corrkit_last_error.
 *
 * This header matches crates/corrkit-ffi/src/lib.rs and can be regenerated
 * with cbindgen using the provided cbindgen.toml.
 */

#ifndef CORRKIT_H
#define CORRKIT_H

#include <stdint.h>
#include <stdlib.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every fallible call. */
typedef enum CorrkitStatus {
  CORRKIT_STATUS_OK = 0,
  CORRKIT_STATUS_NULL_POINTER = 1,
  CORRKIT_STATUS_INVALID_UTF8 = 2,
  CORRKIT_STATUS_PARSE_ERROR = 3,
  CORRKIT_STATUS_INVALID_STATE = 4,
  CORRKIT_STATUS_UNSUPPORTED_STRUCTURE = 5,
  CORRKIT_STATUS_NOT_DIAGONAL = 6,
  CORRKIT_STATUS_INVALID_PARAMETER = 7,
  CORRKIT_STATUS_INTERNAL_ERROR = 8,
} CorrkitStatus;

/* Opaque handle around a validated density matrix. */
typedef struct CorrkitState CorrkitState;

/* All measure values of one state, raw and normalized. */
typedef struct CorrkitMeasures {
  double raw_correlance;
  double correlance;
  double discordance;
  double diagonal_discordance;
  double strong_discordance;
  double raw_strong_discordance;
  double raw_diagonal_strong_discordance;
  double raw_nondiagonality;
  /* Diagonal correlance; NaN when the state is not diagonal. */
  double diag_correlance;
} CorrkitMeasures;

/* Exact normalization factors of one mode structure. */
typedef struct CorrkitNormalization {
  uint64_t l_star;
  double n_correlance;
  double n_diag_correlance;
  double n_strong_discordance;
} CorrkitNormalization;

/* Parses a state from its JSON representation ({"dims":[...],"matrix":...}
 * or {"dims":[...],"diag":[...]}). On success writes a handle to `out`; the
 * caller owns it and must free it with corrkit_state_free. */
CorrkitStatus corrkit_state_from_json(const char *json, CorrkitState **out);

/* Releases a state handle. Passing NULL is a no-op. */
void corrkit_state_free(CorrkitState *state);

/* Number of modes of the state's structure, or 0 for NULL. */
size_t corrkit_state_mode_count(const CorrkitState *state);

/* Dimension of mode `mode` (1-based), or 0 on a bad label. */
size_t corrkit_state_mode_dim(const CorrkitState *state, size_t mode);

/* Evaluates the whole measure bundle on a state. */
CorrkitStatus corrkit_state_measures(const CorrkitState *state,
                                     CorrkitMeasures *out);

/* Exact normalization factors for a mode structure given as a dims array. */
CorrkitStatus corrkit_normalization(const uint32_t *dims, size_t n_modes,
                                    CorrkitNormalization *out);

/* Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `cap`); returns the full message length in bytes. `buf` may
 * be NULL to query the length. */
size_t corrkit_last_error(char *buf, size_t cap);

/* Library version as a static string. */
const char *corrkit_version(void);

/* ABI sanity probe: returns 1. */
int corrkit_abi_check(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CORRKIT_H */
