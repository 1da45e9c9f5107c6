//! C ABI for the corrkit measures: opaque state handles, status codes, and
//! plain-double result structs, so other languages can bind without touching
//! Rust types.
//!
//! Conventions:
//! - every fallible call returns a `CorrkitStatus`; `Ok` (0) means success;
//! - handles from `corrkit_state_from_json` must be released with
//!   `corrkit_state_free`;
//! - the last error message is kept per thread and read back with
//!   `corrkit_last_error`.
//!
//! The matching header lives at `include/corrkit.h` and can be regenerated
//! with cbindgen using the provided `cbindgen.toml`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};

use corrkit::error::CorrkitError;
use corrkit::io::state_from_json;
use corrkit::measures::{self, MeasureKind};
use corrkit::state::{DensityMatrix, ModeStructure};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let sanitized: String = message.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).ok();
    });
}

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrkitStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidState = 4,
    UnsupportedStructure = 5,
    NotDiagonal = 6,
    InvalidParameter = 7,
    InternalError = 8,
}

fn status_of(err: &CorrkitError) -> CorrkitStatus {
    match err {
        CorrkitError::ParseError { .. } | CorrkitError::Io(_) => CorrkitStatus::ParseError,
        CorrkitError::InvalidState { .. } | CorrkitError::NotHermitian { .. } => {
            CorrkitStatus::InvalidState
        }
        CorrkitError::UnsupportedStructure { .. } => CorrkitStatus::UnsupportedStructure,
        CorrkitError::NotDiagonal { .. } => CorrkitStatus::NotDiagonal,
        CorrkitError::InvalidStructure { .. }
        | CorrkitError::InvalidParameter { .. }
        | CorrkitError::ModeLabelOutOfRange { .. }
        | CorrkitError::DuplicateModeLabel { .. }
        | CorrkitError::IndexOutOfRange { .. } => CorrkitStatus::InvalidParameter,
        _ => CorrkitStatus::InternalError,
    }
}

fn fail(err: &CorrkitError) -> CorrkitStatus {
    set_last_error(&err.to_string());
    status_of(err)
}

/// Opaque handle around a validated density matrix.
pub struct CorrkitState {
    inner: DensityMatrix,
}

/// All measure values of one state, raw and normalized.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CorrkitMeasures {
    pub raw_correlance: f64,
    pub correlance: f64,
    pub discordance: f64,
    pub diagonal_discordance: f64,
    pub strong_discordance: f64,
    pub raw_strong_discordance: f64,
    pub raw_diagonal_strong_discordance: f64,
    pub raw_nondiagonality: f64,
    /// Diagonal correlance; NaN when the state is not diagonal.
    pub diag_correlance: f64,
}

/// Exact normalization factors of one mode structure.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CorrkitNormalization {
    pub l_star: u64,
    pub n_correlance: f64,
    pub n_diag_correlance: f64,
    pub n_strong_discordance: f64,
}

/// Parses a state from its JSON representation. On success writes a handle
/// to `out`; the caller owns it and must free it with `corrkit_state_free`.
///
/// # Safety
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn corrkit_state_from_json(
    json: *const c_char,
    out: *mut *mut CorrkitState,
) -> CorrkitStatus {
    if json.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CorrkitStatus::NullPointer;
    }
    let text = match CStr::from_ptr(json).to_str() {
        Ok(t) => t,
        Err(_) => {
            set_last_error("state JSON is not valid UTF-8");
            return CorrkitStatus::InvalidUtf8;
        }
    };
    match state_from_json(text) {
        Ok(state) => {
            *out = Box::into_raw(Box::new(CorrkitState { inner: state }));
            CorrkitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Releases a state handle. Passing NULL is a no-op.
///
/// # Safety
/// `state` must be a handle returned by `corrkit_state_from_json` that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn corrkit_state_free(state: *mut CorrkitState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes of the state's structure, or 0 for NULL.
///
/// # Safety
/// `state` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn corrkit_state_mode_count(state: *const CorrkitState) -> usize {
    if state.is_null() {
        return 0;
    }
    (*state).inner.structure().mode_count()
}

/// Dimension of mode `mode` (1-based), or 0 on a bad label.
///
/// # Safety
/// `state` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn corrkit_state_mode_dim(state: *const CorrkitState, mode: usize) -> usize {
    if state.is_null() {
        return 0;
    }
    (*state).inner.structure().mode_dim(mode).unwrap_or(0)
}

fn collect_measures(rho: &DensityMatrix) -> Result<CorrkitMeasures, CorrkitError> {
    let set = measures::measure_set(rho)?;
    let get = |kind: MeasureKind| {
        set.iter()
            .find(|m| m.kind == kind)
            .map(|m| m.normalized)
            .unwrap_or(f64::NAN)
    };
    let raw = set
        .iter()
        .find(|m| m.kind == MeasureKind::Correlance)
        .map(|m| m.raw)
        .unwrap_or(f64::NAN);
    Ok(CorrkitMeasures {
        raw_correlance: raw,
        correlance: get(MeasureKind::Correlance),
        discordance: get(MeasureKind::Discordance),
        diagonal_discordance: get(MeasureKind::DiagonalDiscordance),
        strong_discordance: get(MeasureKind::StrongDiscordance),
        raw_strong_discordance: get(MeasureKind::RawStrongDiscordance),
        raw_diagonal_strong_discordance: get(MeasureKind::RawDiagonalStrongDiscordance),
        raw_nondiagonality: get(MeasureKind::Nondiagonality),
        diag_correlance: get(MeasureKind::DiagCorrelance),
    })
}

/// Evaluates the whole measure bundle on a state.
///
/// # Safety
/// `state` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn corrkit_state_measures(
    state: *const CorrkitState,
    out: *mut CorrkitMeasures,
) -> CorrkitStatus {
    if state.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CorrkitStatus::NullPointer;
    }
    match collect_measures(&(*state).inner) {
        Ok(m) => {
            *out = m;
            CorrkitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Exact normalization factors for a mode structure given as a dims array.
///
/// # Safety
/// `dims` must point to `n_modes` readable entries and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn corrkit_normalization(
    dims: *const u32,
    n_modes: usize,
    out: *mut CorrkitNormalization,
) -> CorrkitStatus {
    if dims.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return CorrkitStatus::NullPointer;
    }
    let dims: Vec<usize> = std::slice::from_raw_parts(dims, n_modes)
        .iter()
        .map(|&d| d as usize)
        .collect();
    let structure = match ModeStructure::new(&dims) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    match measures::normalization_report(&structure) {
        Ok(r) => {
            *out = CorrkitNormalization {
                l_star: r.l_star as u64,
                n_correlance: r.n_correlance,
                n_diag_correlance: r.n_diag_correlance,
                n_strong_discordance: r.n_strong_discordance,
            };
            CorrkitStatus::Ok
        }
        Err(e) => fail(&e),
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `cap`); returns the full message length in bytes.
///
/// # Safety
/// `buf` must point to `cap` writable bytes, or be NULL to query the length.
#[no_mangle]
pub unsafe extern "C" fn corrkit_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let borrow = slot.borrow();
        let Some(message) = borrow.as_ref() else {
            return 0;
        };
        let bytes = message.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            // keep the copy NUL-terminated even when truncated
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn corrkit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// ABI sanity probe: returns 1.
#[no_mangle]
pub extern "C" fn corrkit_abi_check() -> c_int {
    1
}
