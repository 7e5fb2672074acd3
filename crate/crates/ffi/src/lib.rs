//! C ABI for the gnsrep library.
//!
//! A session is created from scenario JSON (same schema as the CLI's
//! scenario files) and queried for scalar results: GNS dimensions, the
//! extracted density spectrum and entropy, the restriction/partial-trace
//! deviation, and gauge-entropy scan summaries.
//!
//! Conventions:
//! - sessions are opaque heap handles; free them with
//!   [`gnsrep_session_free`];
//! - every entry point returns a [`GnsrepStatus`]; outputs are written
//!   through pointers only on `Ok`;
//! - on failure, [`gnsrep_last_error_message`] returns a thread-local,
//!   NUL-terminated description valid until the next failing call on the
//!   same thread.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};

use gnsrep::scenario::{Scenario, parse_scenario};

/// Status code returned by every C entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnsrepStatus {
    /// Success; outputs were written.
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// Input text was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Scenario failed to parse or validate, or an operation was requested
    /// that the scenario does not support.
    InvalidScenario = 3,
    /// The computation hit a numerical degeneracy (cutoff or retry failure).
    NumericalDegeneracy = 4,
    /// The provided output buffer is too small.
    BufferTooSmall = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(err: &gnsrep::Error) -> GnsrepStatus {
    set_error(&err.to_string());
    match err {
        gnsrep::Error::NumericalDegeneracy(_) => GnsrepStatus::NumericalDegeneracy,
        _ => GnsrepStatus::InvalidScenario,
    }
}

/// Opaque handle holding one validated scenario.
pub struct GnsrepSession {
    scenario: Scenario,
}

/// Last error message of the current thread as a NUL-terminated string.
/// Never NULL; empty until a call fails. The pointer stays valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gnsrep_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a session from scenario JSON.
///
/// # Safety
/// `json` must point to a NUL-terminated string and `out` to a writable
/// session pointer; both must stay valid for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_session_from_json(
    json: *const c_char,
    out: *mut *mut GnsrepSession,
) -> GnsrepStatus {
    if json.is_null() || out.is_null() {
        set_error("json and out must be non-NULL");
        return GnsrepStatus::NullPointer;
    }
    let Ok(text) = unsafe { CStr::from_ptr(json) }.to_str() else {
        set_error("scenario JSON is not valid UTF-8");
        return GnsrepStatus::InvalidUtf8;
    };
    match parse_scenario(text) {
        Ok(scenario) => {
            unsafe { *out = Box::into_raw(Box::new(GnsrepSession { scenario })) };
            GnsrepStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Frees a session. NULL is ignored.
///
/// # Safety
/// `session` must be NULL or a pointer returned by
/// [`gnsrep_session_from_json`] that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_session_free(session: *mut GnsrepSession) {
    if !session.is_null() {
        drop(unsafe { Box::from_raw(session) });
    }
}

unsafe fn session_ref<'a>(session: *const GnsrepSession) -> Option<&'a GnsrepSession> {
    unsafe { session.as_ref() }
}

/// GNS dimensions of the effective (restricted) state: the quotient Hilbert
/// space dimension and the null-ideal dimension.
///
/// # Safety
/// `session` must be a live session; `hilbert_dim` and `null_dim` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_gns_info(
    session: *const GnsrepSession,
    hilbert_dim: *mut usize,
    null_dim: *mut usize,
) -> GnsrepStatus {
    let Some(s) = (unsafe { session_ref(session) }) else {
        set_error("session must be non-NULL");
        return GnsrepStatus::NullPointer;
    };
    if hilbert_dim.is_null() || null_dim.is_null() {
        set_error("output pointers must be non-NULL");
        return GnsrepStatus::NullPointer;
    }
    match s.scenario.build_gns() {
        Ok(gns) => {
            unsafe {
                *hilbert_dim = gns.hilbert_dim();
                *null_dim = gns.null_dim();
            }
            GnsrepStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Von Neumann entropy (nats) of the density operator extracted from the
/// GNS representation of the effective state with the natural projector
/// family.
///
/// # Safety
/// `session` must be a live session and `entropy_nats` writable.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_entropy(
    session: *const GnsrepSession,
    entropy_nats: *mut f64,
) -> GnsrepStatus {
    let Some(s) = (unsafe { session_ref(session) }) else {
        set_error("session must be non-NULL");
        return GnsrepStatus::NullPointer;
    };
    if entropy_nats.is_null() {
        set_error("entropy_nats must be non-NULL");
        return GnsrepStatus::NullPointer;
    }
    match s.scenario.entropy_pipeline() {
        Ok((_, _, _, nats)) => {
            unsafe { *entropy_nats = nats };
            GnsrepStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Descending spectrum of the extracted density operator. Writes at most
/// `capacity` eigenvalues into `buffer` and the full spectrum length into
/// `written`; fails with `BufferTooSmall` (after writing `written`) when the
/// buffer cannot hold all of them.
///
/// # Safety
/// `session` must be a live session, `buffer` must point to at least
/// `capacity` doubles, and `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_spectrum(
    session: *const GnsrepSession,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> GnsrepStatus {
    let Some(s) = (unsafe { session_ref(session) }) else {
        set_error("session must be non-NULL");
        return GnsrepStatus::NullPointer;
    };
    if (buffer.is_null() && capacity > 0) || written.is_null() {
        set_error("buffer and written must be non-NULL");
        return GnsrepStatus::NullPointer;
    }
    match s.scenario.entropy_pipeline() {
        Ok((_, _, spectrum, _)) => {
            unsafe { *written = spectrum.len() };
            if spectrum.len() > capacity {
                set_error("spectrum does not fit the provided buffer");
                return GnsrepStatus::BufferTooSmall;
            }
            unsafe {
                std::ptr::copy_nonoverlapping(spectrum.as_ptr(), buffer, spectrum.len());
            }
            GnsrepStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Max deviation between the restricted state and the partial trace over
/// the embedding source's matrix units.
///
/// # Safety
/// `session` must be a live session and `max_deviation` writable.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_compare_deviation(
    session: *const GnsrepSession,
    max_deviation: *mut f64,
) -> GnsrepStatus {
    let Some(s) = (unsafe { session_ref(session) }) else {
        set_error("session must be non-NULL");
        return GnsrepStatus::NullPointer;
    };
    if max_deviation.is_null() {
        set_error("max_deviation must be non-NULL");
        return GnsrepStatus::NullPointer;
    }
    match s.scenario.compare_deviation() {
        Ok(dev) => {
            unsafe { *max_deviation = dev };
            GnsrepStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Scans the entropies of gauge-deformed density operators over `samples`
/// Haar draws and writes the baseline, sampled minimum and sampled maximum.
///
/// # Safety
/// `session` must be a live session; `baseline`, `min_entropy` and
/// `max_entropy` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gnsrep_scan_gauge(
    session: *const GnsrepSession,
    samples: usize,
    seed: u64,
    baseline: *mut f64,
    min_entropy: *mut f64,
    max_entropy: *mut f64,
) -> GnsrepStatus {
    let Some(s) = (unsafe { session_ref(session) }) else {
        set_error("session must be non-NULL");
        return GnsrepStatus::NullPointer;
    };
    if baseline.is_null() || min_entropy.is_null() || max_entropy.is_null() {
        set_error("output pointers must be non-NULL");
        return GnsrepStatus::NullPointer;
    }
    match s.scenario.scan_gauge(samples, seed, false) {
        Ok(report) => {
            unsafe {
                *baseline = report.baseline_entropy;
                *min_entropy = report.min_entropy;
                *max_entropy = report.max_entropy;
            }
            GnsrepStatus::Ok
        }
        Err(err) => fail(&err),
    }
}
