//! C interface to the positivity prover.
//!
//! The surface mirrors the command-line front-end: prove an inequality
//! given as text, serialize the resulting certificate to JSON, load a
//! certificate back, and re-check it independently. Textual arguments
//! (expression grammar, upper endpoint, parameter range) accept exactly
//! the forms the CLI accepts, so bindings can reuse its documentation.
//!
//! Conventions:
//!
//! - Every fallible call returns an [`MtpStatus`]. The leading values
//!   match the CLI exit codes: 0 proven/verified, 1 not proven,
//!   2 malformed request. A human-readable account of the most recent
//!   failure on the current thread is available via [`mtp_last_error`].
//! - All strings are NUL-terminated UTF-8. Strings returned by this
//!   library are owned by the caller and must be released with
//!   [`mtp_string_free`]; certificate handles with
//!   [`mtp_certificate_free`]. `mtp_version` returns a static string
//!   that must not be freed.
//! - No call unwinds across the boundary: panics are caught and turned
//!   into [`MtpStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mtp_prover::certificate::{verify_certificate, ProofCertificate};
use mtp_prover::cli::{apply_param_range, parse_upper};
use mtp_prover::error::Error;
use mtp_prover::khat::KhatMethod;
use mtp_prover::parse::parse_expr;
use mtp_prover::prover::{prove, ProveOptions, ProveOutcome};

/// Status code returned by every fallible function in this interface.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MtpStatus {
    /// Success; for `mtp_prove` this means the inequality was proven.
    Ok = 0,
    /// The prover finished without a proof (disproven, budget
    /// exhausted, or sign-indefinite coefficients); see
    /// `mtp_last_error` for the account.
    NotProven = 1,
    /// The request was malformed: syntax error, bad interval, bad
    /// options, or unparseable certificate JSON.
    InvalidInput = 2,
    /// The certificate deserialized but failed re-derivation.
    VerifyFailed = 3,
    /// A required pointer argument was NULL.
    NullArgument = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// An internal invariant failed; the library caught a panic instead
    /// of unwinding into the caller.
    Panic = 6,
}

/// Opaque proof certificate. Create with `mtp_prove` or
/// `mtp_certificate_from_json`; release with `mtp_certificate_free`.
pub struct MtpCertificate {
    inner: ProofCertificate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    // Interior NULs cannot appear in our own messages, but never panic
    // over it either.
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(owned));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs `body` with unwinding contained; a panic becomes
/// [`MtpStatus::Panic`] plus a last-error message.
fn guarded(body: impl FnOnce() -> MtpStatus) -> MtpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            set_last_error(&format!("internal panic: {msg}"));
            MtpStatus::Panic
        }
    }
}

/// Reads a required string argument.
///
/// # Safety
/// `p` must be NULL or point to a NUL-terminated buffer valid for the
/// duration of the call.
unsafe fn required_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, MtpStatus> {
    if p.is_null() {
        set_last_error(&format!("{what} must not be NULL"));
        return Err(MtpStatus::NullArgument);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_last_error(&format!("{what} is not valid UTF-8"));
        MtpStatus::InvalidUtf8
    })
}

/// Reads an optional string argument; NULL means "use the default".
///
/// # Safety
/// Same contract as [`required_str`].
unsafe fn optional_str<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, MtpStatus> {
    if p.is_null() {
        return Ok(None);
    }
    required_str(p, what).map(Some)
}

fn status_for(e: &Error) -> MtpStatus {
    if e.is_usage() {
        MtpStatus::InvalidInput
    } else {
        MtpStatus::NotProven
    }
}

/// Version of the library as a static NUL-terminated string. Never
/// NULL; do not free.
#[no_mangle]
pub extern "C" fn mtp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on the calling thread, or
/// NULL when the last call on this thread succeeded. The pointer stays
/// valid until the next library call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn mtp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Proves `expr > 0` on `(0, upper)` and hands back a certificate.
///
/// - `expr`: the inequality's left-hand side, e.g. `"x - sin(x)"`.
/// - `upper`: `"pi/2"` (symbolic, open) or a rational like `"3/2"`;
///   NULL means `"pi/2"`.
/// - `upper_closed`: negative = default (closed for rational uppers),
///   `0` = open, positive = closed. Must not be positive for `"pi/2"`.
/// - `method`: `"auto"`, `"method-c"`, or `"method-d"`; NULL = auto.
/// - `param_range`: open parameter range as `"name=lo..hi"`, e.g.
///   `"a=1..3/2"`; NULL when the expression has no parameter.
/// - `budget`: cap on every Taylor index during the automatic search;
///   `0` means the default.
/// - `out_cert`: receives a new certificate handle on `Ok`, NULL
///   otherwise.
///
/// # Safety
/// String arguments must be NULL or NUL-terminated buffers valid for
/// the duration of the call; `out_cert` must point to writable storage
/// for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mtp_prove(
    expr: *const c_char,
    upper: *const c_char,
    upper_closed: c_int,
    method: *const c_char,
    param_range: *const c_char,
    budget: u32,
    out_cert: *mut *mut MtpCertificate,
) -> MtpStatus {
    if out_cert.is_null() {
        set_last_error("out_cert must not be NULL");
        return MtpStatus::NullArgument;
    }
    *out_cert = std::ptr::null_mut();
    let expr = match required_str(expr, "expr") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let upper = match optional_str(upper, "upper") {
        Ok(s) => s.unwrap_or("pi/2"),
        Err(status) => return status,
    };
    let method = match optional_str(method, "method") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let param_range = match optional_str(param_range, "param_range") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let out_cert = &mut *out_cert;
    guarded(move || {
        let method = match method.map(str::trim) {
            None | Some("auto") => KhatMethod::Auto,
            Some("method-c") => KhatMethod::MethodC,
            Some("method-d") => KhatMethod::MethodD,
            Some(other) => {
                set_last_error(&format!(
                    "unknown method `{other}` (expected auto, method-c, or method-d)"
                ));
                return MtpStatus::InvalidInput;
            }
        };
        let closed = match upper_closed {
            i if i < 0 => None,
            0 => Some(false),
            _ => Some(true),
        };
        let interval = match parse_upper(upper, closed) {
            Ok(spec) => spec,
            Err(e) => {
                set_last_error(&e.to_string());
                return status_for(&e);
            }
        };
        // Reject the contradictory combination up front like the CLI
        // does, even when the expression would never consult the
        // method (no even cosine powers).
        if interval.has_symbolic_upper() && method == KhatMethod::MethodC {
            let e = Error::MethodCNeedsRationalUpper;
            set_last_error(&e.to_string());
            return status_for(&e);
        }
        let parsed = match parse_expr(expr) {
            Ok(parsed) => parsed,
            Err(e) => {
                set_last_error(&e.to_string());
                return status_for(&e);
            }
        };
        let mut options = ProveOptions {
            method,
            original_text: Some(expr.to_string()),
            ..ProveOptions::default()
        };
        if budget > 0 {
            options.budget = budget as usize;
        }
        if let Some(spec) = param_range {
            if let Err(e) = apply_param_range(&parsed, spec, &mut options) {
                set_last_error(&e.to_string());
                return status_for(&e);
            }
        }
        match prove(&parsed, &interval, &options) {
            Ok(ProveOutcome::Proved(cert)) => {
                *out_cert = Box::into_raw(Box::new(MtpCertificate { inner: *cert }));
                clear_last_error();
                MtpStatus::Ok
            }
            Ok(ProveOutcome::Disproven(report)) | Ok(ProveOutcome::NotProven(report)) => {
                set_last_error(&report.message);
                MtpStatus::NotProven
            }
            Err(e) => {
                set_last_error(&e.to_string());
                status_for(&e)
            }
        }
    })
}

/// Serializes a certificate to pretty-printed JSON. On `Ok`,
/// `*out_json` owns a NUL-terminated string; release it with
/// `mtp_string_free`.
///
/// # Safety
/// `cert` must be NULL or a live handle from this library; `out_json`
/// must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn mtp_certificate_to_json(
    cert: *const MtpCertificate,
    out_json: *mut *mut c_char,
) -> MtpStatus {
    if out_json.is_null() {
        set_last_error("out_json must not be NULL");
        return MtpStatus::NullArgument;
    }
    *out_json = std::ptr::null_mut();
    if cert.is_null() {
        set_last_error("cert must not be NULL");
        return MtpStatus::NullArgument;
    }
    let cert = &*cert;
    let out_json = &mut *out_json;
    guarded(move || {
        let json = cert.inner.to_json();
        match CString::new(json) {
            Ok(owned) => {
                *out_json = owned.into_raw();
                clear_last_error();
                MtpStatus::Ok
            }
            Err(_) => {
                set_last_error("certificate JSON contained an interior NUL");
                MtpStatus::Panic
            }
        }
    })
}

/// Deserializes a certificate from JSON. On `Ok`, `*out_cert` owns a
/// new handle; release it with `mtp_certificate_free`. The certificate
/// is *not* yet checked — call `mtp_certificate_verify`.
///
/// # Safety
/// `json` must be NULL or a NUL-terminated buffer valid for the
/// duration of the call; `out_cert` must point to writable storage for
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn mtp_certificate_from_json(
    json: *const c_char,
    out_cert: *mut *mut MtpCertificate,
) -> MtpStatus {
    if out_cert.is_null() {
        set_last_error("out_cert must not be NULL");
        return MtpStatus::NullArgument;
    }
    *out_cert = std::ptr::null_mut();
    let json = match required_str(json, "json") {
        Ok(s) => s,
        Err(status) => return status,
    };
    let out_cert = &mut *out_cert;
    guarded(move || match ProofCertificate::from_json(json) {
        Ok(inner) => {
            *out_cert = Box::into_raw(Box::new(MtpCertificate { inner }));
            clear_last_error();
            MtpStatus::Ok
        }
        Err(e) => {
            set_last_error(&e.to_string());
            MtpStatus::InvalidInput
        }
    })
}

/// Re-checks a certificate independently: re-parses the recorded input,
/// re-derives the estimation, and re-counts every sign change. `Ok`
/// means the certificate is sound evidence for its inequality.
///
/// # Safety
/// `cert` must be NULL or a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn mtp_certificate_verify(cert: *const MtpCertificate) -> MtpStatus {
    if cert.is_null() {
        set_last_error("cert must not be NULL");
        return MtpStatus::NullArgument;
    }
    let cert = &*cert;
    guarded(move || match verify_certificate(&cert.inner) {
        Ok(()) => {
            clear_last_error();
            MtpStatus::Ok
        }
        Err(e) => {
            set_last_error(&e.to_string());
            MtpStatus::VerifyFailed
        }
    })
}

/// One-shot verification of certificate JSON: deserialize and re-check.
/// Returns `VerifyFailed` whether the text fails to deserialize or
/// fails re-derivation, mirroring the CLI's `verify` subcommand.
///
/// # Safety
/// `json` must be NULL or a NUL-terminated buffer valid for the
/// duration of the call.
#[no_mangle]
pub unsafe extern "C" fn mtp_verify_json(json: *const c_char) -> MtpStatus {
    let json = match required_str(json, "json") {
        Ok(s) => s,
        Err(status) => return status,
    };
    guarded(move || {
        let cert = match ProofCertificate::from_json(json) {
            Ok(cert) => cert,
            Err(e) => {
                set_last_error(&e.to_string());
                return MtpStatus::VerifyFailed;
            }
        };
        match verify_certificate(&cert) {
            Ok(()) => {
                clear_last_error();
                MtpStatus::Ok
            }
            Err(e) => {
                set_last_error(&e.to_string());
                MtpStatus::VerifyFailed
            }
        }
    })
}

/// Releases a certificate handle. NULL is a no-op.
///
/// # Safety
/// `cert` must be NULL or a handle from this library that has not been
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn mtp_certificate_free(cert: *mut MtpCertificate) {
    if !cert.is_null() {
        drop(Box::from_raw(cert));
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string from this library that has not been
/// freed before.
#[no_mangle]
pub unsafe extern "C" fn mtp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
