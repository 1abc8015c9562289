#ifndef WALGEBRA_H
#define WALGEBRA_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
typedef enum WalgebraStatus {
  WALGEBRA_STATUS_OK = 0,
  // A required pointer argument was null.
  WALGEBRA_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  WALGEBRA_STATUS_INVALID_UTF8 = 2,
  // Malformed job description or unsupported input.
  WALGEBRA_STATUS_CONFIG = 3,
  // The request lies outside what the construction covers.
  WALGEBRA_STATUS_DOMAIN = 4,
  WALGEBRA_STATUS_UNKNOWN_COMMAND = 5,
  // The command ran but one of its checks failed; the output is still set.
  WALGEBRA_STATUS_VERIFICATION_FAILED = 6,
  // An internal consistency check failed.
  WALGEBRA_STATUS_INTERNAL = 7,
  // A panic was caught at the boundary.
  WALGEBRA_STATUS_PANIC = 8,
} WalgebraStatus;

// Opaque job handle.
typedef struct WalgebraJob WalgebraJob;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds a job from a JSON description. On success `*out` owns a handle to
// be released with [`walgebra_job_free`]; otherwise `*out` is null.
//
// # Safety
// `config_json` must be a NUL-terminated string and `out` a valid pointer.
enum WalgebraStatus walgebra_job_new(const char *config_json, struct WalgebraJob **out);

// Releases a job handle. Null is ignored.
//
// # Safety
// `job` must be null or a handle from [`walgebra_job_new`] not yet freed.
void walgebra_job_free(struct WalgebraJob *job);

// Runs the command `command_name` (`info`, `finite-bracket`, `affine-bracket`, `hierarchy`
// or `verify`) on the job. `*out` receives the rendered output on `Ok` and
// on `VerificationFailed`, and null otherwise.
//
// # Safety
// `job` must be a live handle, `command_name` a NUL-terminated string and `out`
// a valid pointer.
enum WalgebraStatus walgebra_job_run(const struct WalgebraJob *job,
                                     const char *command_name,
                                     char **out);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must be null or a string from [`walgebra_job_run`] not yet freed.
void walgebra_string_free(char *s);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next library call on the same thread.
const char *walgebra_last_error(void);

// Library version as a static string.
const char *walgebra_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WALGEBRA_H */
