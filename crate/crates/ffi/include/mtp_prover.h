#ifndef MTP_PROVER_H
#define MTP_PROVER_H

/* Generated by cbindgen from mtp-prover-ffi; edit the Rust source, not this file. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible function in this interface.
typedef enum MtpStatus {
  // Success; for `mtp_prove` this means the inequality was proven.
  MTP_STATUS_OK = 0,
  // The prover finished without a proof (disproven, budget
  // exhausted, or sign-indefinite coefficients); see
  // `mtp_last_error` for the account.
  MTP_STATUS_NOT_PROVEN = 1,
  // The request was malformed: syntax error, bad interval, bad
  // options, or unparseable certificate JSON.
  MTP_STATUS_INVALID_INPUT = 2,
  // The certificate deserialized but failed re-derivation.
  MTP_STATUS_VERIFY_FAILED = 3,
  // A required pointer argument was NULL.
  MTP_STATUS_NULL_ARGUMENT = 4,
  // A string argument was not valid UTF-8.
  MTP_STATUS_INVALID_UTF8 = 5,
  // An internal invariant failed; the library caught a panic instead
  // of unwinding into the caller.
  MTP_STATUS_PANIC = 6,
} MtpStatus;

// Opaque proof certificate. Create with `mtp_prove` or
// `mtp_certificate_from_json`; release with `mtp_certificate_free`.
typedef struct MtpCertificate MtpCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string. Never
// NULL; do not free.
const char *mtp_version(void);

// Message describing the most recent failure on the calling thread, or
// NULL when the last call on this thread succeeded. The pointer stays
// valid until the next library call on the same thread; do not free.
const char *mtp_last_error(void);

// Proves `expr > 0` on `(0, upper)` and hands back a certificate.
//
// - `expr`: the inequality's left-hand side, e.g. `"x - sin(x)"`.
// - `upper`: `"pi/2"` (symbolic, open) or a rational like `"3/2"`;
//   NULL means `"pi/2"`.
// - `upper_closed`: negative = default (closed for rational uppers),
//   `0` = open, positive = closed. Must not be positive for `"pi/2"`.
// - `method`: `"auto"`, `"method-c"`, or `"method-d"`; NULL = auto.
// - `param_range`: open parameter range as `"name=lo..hi"`, e.g.
//   `"a=1..3/2"`; NULL when the expression has no parameter.
// - `budget`: cap on every Taylor index during the automatic search;
//   `0` means the default.
// - `out_cert`: receives a new certificate handle on `Ok`, NULL
//   otherwise.
//
// # Safety
// String arguments must be NULL or NUL-terminated buffers valid for
// the duration of the call; `out_cert` must point to writable storage
// for one pointer.
enum MtpStatus mtp_prove(const char *expr,
                         const char *upper,
                         int upper_closed,
                         const char *method,
                         const char *param_range,
                         uint32_t budget,
                         struct MtpCertificate **out_cert);

// Serializes a certificate to pretty-printed JSON. On `Ok`,
// `*out_json` owns a NUL-terminated string; release it with
// `mtp_string_free`.
//
// # Safety
// `cert` must be NULL or a live handle from this library; `out_json`
// must point to writable storage for one pointer.
enum MtpStatus mtp_certificate_to_json(const struct MtpCertificate *cert, char **out_json);

// Deserializes a certificate from JSON. On `Ok`, `*out_cert` owns a
// new handle; release it with `mtp_certificate_free`. The certificate
// is *not* yet checked — call `mtp_certificate_verify`.
//
// # Safety
// `json` must be NULL or a NUL-terminated buffer valid for the
// duration of the call; `out_cert` must point to writable storage for
// one pointer.
enum MtpStatus mtp_certificate_from_json(const char *json, struct MtpCertificate **out_cert);

// Re-checks a certificate independently: re-parses the recorded input,
// re-derives the estimation, and re-counts every sign change. `Ok`
// means the certificate is sound evidence for its inequality.
//
// # Safety
// `cert` must be NULL or a live handle from this library.
enum MtpStatus mtp_certificate_verify(const struct MtpCertificate *cert);

// One-shot verification of certificate JSON: deserialize and re-check.
// Returns `VerifyFailed` whether the text fails to deserialize or
// fails re-derivation, mirroring the CLI's `verify` subcommand.
//
// # Safety
// `json` must be NULL or a NUL-terminated buffer valid for the
// duration of the call.
enum MtpStatus mtp_verify_json(const char *json);

// Releases a certificate handle. NULL is a no-op.
//
// # Safety
// `cert` must be NULL or a handle from this library that has not been
// freed before.
void mtp_certificate_free(struct MtpCertificate *cert);

// Releases a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must be NULL or a string from this library that has not been
// freed before.
void mtp_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MTP_PROVER_H */
