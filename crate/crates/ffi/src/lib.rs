//! C interface to the walgebra engine.
//!
//! A job is an opaque handle built from a JSON job description (the same
//! schema as the CLI `--config` file). Commands return library-owned strings
//! that must be released with [`walgebra_string_free`]. On failure the
//! message is available from [`walgebra_last_error`] on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use walgebra::cli::{command, Job, JobConfig};
use walgebra::Error;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalgebraStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed job description or unsupported input.
    Config = 3,
    /// The request lies outside what the construction covers.
    Domain = 4,
    UnknownCommand = 5,
    /// The command ran but one of its checks failed; the output is still set.
    VerificationFailed = 6,
    /// An internal consistency check failed.
    Internal = 7,
    /// A panic was caught at the boundary.
    Panic = 8,
}

/// Opaque job handle.
pub struct WalgebraJob {
    job: Job,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> WalgebraStatus {
    match err {
        Error::Internal(_) => WalgebraStatus::Internal,
        Error::Domain(_) | Error::BoundTooSmall(_) | Error::Truncation(_) => WalgebraStatus::Domain,
        _ => WalgebraStatus::Config,
    }
}

fn fail(err: Error) -> WalgebraStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, WalgebraStatus> {
    if s.is_null() {
        set_error("null string argument");
        return Err(WalgebraStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        WalgebraStatus::InvalidUtf8
    })
}

fn guarded(f: impl FnOnce() -> WalgebraStatus) -> WalgebraStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            WalgebraStatus::Panic
        }
    }
}

/// Builds a job from a JSON description. On success `*out` owns a handle to
/// be released with [`walgebra_job_free`]; otherwise `*out` is null.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn walgebra_job_new(config_json: *const c_char, out: *mut *mut WalgebraJob) -> WalgebraStatus {
    guarded(|| {
        if out.is_null() {
            set_error("null output pointer");
            return WalgebraStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let text = match read_str(config_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match JobConfig::from_json(text).and_then(Job::new) {
            Ok(job) => {
                *out = Box::into_raw(Box::new(WalgebraJob { job }));
                WalgebraStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a job handle. Null is ignored.
///
/// # Safety
/// `job` must be null or a handle from [`walgebra_job_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn walgebra_job_free(job: *mut WalgebraJob) {
    if !job.is_null() {
        drop(Box::from_raw(job));
    }
}

/// Runs the command `command_name` (`info`, `finite-bracket`, `affine-bracket`, `hierarchy`
/// or `verify`) on the job. `*out` receives the rendered output on `Ok` and
/// on `VerificationFailed`, and null otherwise.
///
/// # Safety
/// `job` must be a live handle, `command_name` a NUL-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn walgebra_job_run(
    job: *const WalgebraJob,
    command_name: *const c_char,
    out: *mut *mut c_char,
) -> WalgebraStatus {
    guarded(|| {
        if out.is_null() || job.is_null() {
            set_error("null job or output pointer");
            return WalgebraStatus::NullArgument;
        }
        *out = ptr::null_mut();
        let name = match read_str(command_name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(cmd) = command(name) else {
            set_error(format!("unknown command `{name}`"));
            return WalgebraStatus::UnknownCommand;
        };
        match cmd(&(*job).job) {
            Ok(outcome) => {
                let verified = outcome.verified;
                *out = CString::new(outcome.text.replace('\0', " "))
                    .expect("NUL bytes replaced")
                    .into_raw();
                if verified {
                    WalgebraStatus::Ok
                } else {
                    set_error("verification failed");
                    WalgebraStatus::VerificationFailed
                }
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from [`walgebra_job_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn walgebra_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn walgebra_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn walgebra_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
