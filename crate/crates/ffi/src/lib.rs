//! C ABI over the invlc engine.
//!
//! Conventions: every fallible function returns an [`InvlcStatus`] and
//! writes results through out-pointers. On failure a message is available
//! from [`invlc_last_error`] on the same thread. Handles are opaque and must
//! be released with their `_free` function; strings returned by the library
//! must be released with [`invlc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use invlc::cli::{run_job_json, CliError, Command};
use invlc::group::{FiniteMatrixGroup, SquareMatrix};
use invlc::invariants::hilbert_series;
use invlc::linalg::Matrix;
use invlc::local_cohomology::{lc_piece, IdealSpec, LcError, LevelParams};
use invlc::polyring::Ring;
use invlc::scalars::Field;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvlcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NotStabilized = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A finite matrix group, closed under its generators.
pub struct InvlcGroup {
    inner: FiniteMatrixGroup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: InvlcStatus, msg: impl Into<String>) -> InvlcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> InvlcStatus) -> InvlcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(InvlcStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

fn field_from(p: u64) -> Result<Field, InvlcStatus> {
    if p == 0 {
        return Ok(Field::Rationals);
    }
    Field::prime(p).map_err(|e| fail(InvlcStatus::InvalidArgument, format!("field_p = {p}: {e}")))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, InvlcStatus> {
    if s.is_null() {
        return Err(fail(InvlcStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(InvlcStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn lc_status(e: &LcError) -> InvlcStatus {
    match e {
        LcError::NotStabilized { .. } => InvlcStatus::NotStabilized,
        LcError::Parse(_) => InvlcStatus::ParseError,
        _ => InvlcStatus::InvalidArgument,
    }
}

/// Message describing the last failure on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn invlc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn invlc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Closes the group generated by `num_generators` matrices of size `n x n`,
/// given as consecutive row-major integer blocks in `entries`. `field_p = 0`
/// selects Q, otherwise GF(field_p). `max_order = 0` uses the default bound.
///
/// # Safety
/// `entries` must point to `num_generators * n * n` integers and `out` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn invlc_group_new(
    field_p: u64,
    n: usize,
    entries: *const i64,
    num_generators: usize,
    max_order: usize,
    out: *mut *mut InvlcGroup,
) -> InvlcStatus {
    guard(|| {
        if out.is_null() || (entries.is_null() && num_generators > 0) {
            return fail(InvlcStatus::NullPointer, "entries or out is null");
        }
        if n == 0 {
            return fail(InvlcStatus::InvalidArgument, "n must be positive");
        }
        let field = match field_from(field_p) {
            Ok(f) => f,
            Err(s) => return s,
        };
        let values = if num_generators == 0 { &[][..] } else { std::slice::from_raw_parts(entries, num_generators * n * n) };
        let mut gens = Vec::with_capacity(num_generators);
        for (k, block) in values.chunks(n * n).enumerate() {
            let mut m = Matrix::zeros(field, n, n);
            for (idx, v) in block.iter().enumerate() {
                m[(idx / n, idx % n)] = field.from_i64(*v);
            }
            match SquareMatrix::new(m) {
                Ok(g) => gens.push(g),
                Err(e) => return fail(InvlcStatus::InvalidArgument, format!("generator {}: {e}", k + 1)),
            }
        }
        let group = if gens.is_empty() {
            FiniteMatrixGroup::trivial(field, n)
        } else {
            let bound = if max_order == 0 { invlc::group::DEFAULT_MAX_ORDER } else { max_order };
            match FiniteMatrixGroup::close(&gens, bound) {
                Ok(g) => g,
                Err(e) => return fail(InvlcStatus::InvalidArgument, e.to_string()),
            }
        };
        *out = Box::into_raw(Box::new(InvlcGroup { inner: group }));
        InvlcStatus::Ok
    })
}

/// # Safety
/// `group` must come from [`invlc_group_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn invlc_group_free(group: *mut InvlcGroup) {
    if !group.is_null() {
        drop(Box::from_raw(group));
    }
}

/// # Safety
/// `group` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn invlc_group_order(group: *const InvlcGroup, out: *mut usize) -> InvlcStatus {
    guard(|| {
        if group.is_null() || out.is_null() {
            return fail(InvlcStatus::NullPointer, "group or out is null");
        }
        *out = (*group).inner.order();
        InvlcStatus::Ok
    })
}

/// # Safety
/// `group` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn invlc_group_is_in_sl(group: *const InvlcGroup, out: *mut bool) -> InvlcStatus {
    guard(|| {
        if group.is_null() || out.is_null() {
            return fail(InvlcStatus::NullPointer, "group or out is null");
        }
        *out = (*group).inner.is_in_sl();
        InvlcStatus::Ok
    })
}

unsafe fn write_series(series: &[u64], out: *mut u64, out_len: usize) -> InvlcStatus {
    if out_len < series.len() {
        return fail(InvlcStatus::BufferTooSmall, format!("need {} entries, got {out_len}", series.len()));
    }
    std::slice::from_raw_parts_mut(out, series.len()).copy_from_slice(series);
    InvlcStatus::Ok
}

/// Molien series coefficients for degrees `0..=max_deg` (characteristic
/// zero only). `out` must hold at least `max_deg + 1` entries.
///
/// # Safety
/// `group` must be valid and `out` must point to `out_len` writable values.
#[no_mangle]
pub unsafe extern "C" fn invlc_molien(group: *const InvlcGroup, max_deg: u32, out: *mut u64, out_len: usize) -> InvlcStatus {
    guard(|| {
        if group.is_null() || out.is_null() {
            return fail(InvlcStatus::NullPointer, "group or out is null");
        }
        match (*group).inner.molien_coefficients(max_deg) {
            Ok(series) => write_series(&series, out, out_len),
            Err(e) => fail(InvlcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// `dim (R^G)_d` for `d = 0..=max_deg`, by direct linear algebra.
///
/// # Safety
/// As [`invlc_molien`].
#[no_mangle]
pub unsafe extern "C" fn invlc_hilbert_series(
    group: *const InvlcGroup,
    max_deg: u32,
    out: *mut u64,
    out_len: usize,
) -> InvlcStatus {
    guard(|| {
        if group.is_null() || out.is_null() {
            return fail(InvlcStatus::NullPointer, "group or out is null");
        }
        write_series(&hilbert_series(&(*group).inner, max_deg), out, out_len)
    })
}

/// Summary of one graded piece of local cohomology.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct InvlcPieceSummary {
    pub dim: usize,
    /// Dimension of the invariant part, or -1 without a group.
    pub invariant_dim: i64,
    pub level_reached: u32,
}

/// `H^i_I(R)_d` for the ideal generated by the comma-separated `ideal` in
/// `n` variables. `group` may be null; otherwise it supplies the field and
/// must leave every ideal generator invariant. `t_max = 0` and `window = 0`
/// select the defaults. Returns `INVLC_STATUS_NOT_STABILIZED` rather than a
/// number when the level tower does not settle.
///
/// # Safety
/// `ideal` must be a nul-terminated string, `group` null or valid, `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn invlc_lc_piece(
    field_p: u64,
    n: usize,
    ideal: *const c_char,
    group: *const InvlcGroup,
    i: usize,
    d: i64,
    t_max: u32,
    window: u32,
    out: *mut InvlcPieceSummary,
) -> InvlcStatus {
    guard(|| {
        if out.is_null() {
            return fail(InvlcStatus::NullPointer, "out is null");
        }
        let text = match read_str(ideal, "ideal") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let group = group.as_ref().map(|g| &g.inner);
        let field = match group {
            Some(g) => g.field(),
            None => match field_from(field_p) {
                Ok(f) => f,
                Err(s) => return s,
            },
        };
        if let Some(g) = group {
            if g.n() != n {
                return fail(InvlcStatus::InvalidArgument, format!("group acts on {} variables, n = {n}", g.n()));
            }
        }
        let defaults = LevelParams::default();
        let params = LevelParams {
            t_max: if t_max == 0 { defaults.t_max } else { t_max },
            window: if window == 0 { defaults.window } else { window },
        };
        let result = IdealSpec::parse(Ring::new(n, field), text, group).and_then(|ideal| lc_piece(&ideal, group, i, d, params));
        match result {
            Ok(p) => {
                *out = InvlcPieceSummary {
                    dim: p.stable_dim,
                    invariant_dim: p.invariant_dim.map_or(-1, |v| v as i64),
                    level_reached: p.level_reached,
                };
                InvlcStatus::Ok
            }
            Err(e) => fail(lc_status(&e), e.to_string()),
        }
    })
}

/// Runs a CLI command (e.g. `"lc"`) on a JSON job document and returns the
/// JSON result document in `out_json`. `out_exit_code` receives the exit
/// code the command-line tool would use. The cache directory is taken from
/// `INVLC_CACHE_DIR`.
///
/// # Safety
/// `command` and `job_json` must be nul-terminated strings; the out-pointers
/// must be valid. Free `*out_json` with [`invlc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn invlc_run_job(
    command: *const c_char,
    job_json: *const c_char,
    out_json: *mut *mut c_char,
    out_exit_code: *mut i32,
) -> InvlcStatus {
    guard(|| {
        if out_json.is_null() || out_exit_code.is_null() {
            return fail(InvlcStatus::NullPointer, "out_json or out_exit_code is null");
        }
        *out_json = ptr::null_mut();
        let (cmd, job) = match (read_str(command, "command"), read_str(job_json, "job_json")) {
            (Ok(c), Ok(j)) => (c, j),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let cmd: Command = match cmd.parse() {
            Ok(c) => c,
            Err(e) => return fail(InvlcStatus::InvalidArgument, e.to_string()),
        };
        match run_job_json(cmd, job) {
            Ok(doc) => {
                *out_exit_code = doc.exit_code;
                *out_json = CString::new(doc.to_json()).expect("JSON has no nul").into_raw();
                InvlcStatus::Ok
            }
            Err(e) => {
                *out_exit_code = e.exit_code();
                let status = match e {
                    CliError::Parse { .. } => InvlcStatus::ParseError,
                    CliError::NotStabilized(_) => InvlcStatus::NotStabilized,
                    _ => InvlcStatus::InvalidArgument,
                };
                fail(status, e.to_string())
            }
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn invlc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
