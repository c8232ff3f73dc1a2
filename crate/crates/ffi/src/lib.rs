//! C ABI over the `mforce` library.
//!
//! Matrices are opaque `MforceMatrix` handles created by the `mforce_*`
//! constructors and released with [`mforce_matrix_free`]. Every fallible
//! function returns an [`MforceStatus`]; on failure a description is available
//! from [`mforce_last_error_message`] until the next call on the same thread.
//! Strings returned through out-parameters are released with
//! [`mforce_string_free`]. Indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mforce::strong::constructions::{self, TwoByTwo};
use mforce::strong::search::{search_max, SearchConfig};
use mforce::{forcing, strong, BitMatrix, Error, Position};

/// Opaque matrix handle.
pub struct MforceMatrix(BitMatrix);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MforceStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Dimension = 4,
    Precondition = 5,
    OutOfBounds = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MforceVariant {
    I2 = 0,
    H2 = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MforceStatus {
    match e {
        Error::Parse { .. } => MforceStatus::Parse,
        Error::ZeroDimension { .. }
        | Error::DimensionTooLarge(_)
        | Error::DimensionMismatch(_)
        | Error::PatternTooLarge { .. } => MforceStatus::Dimension,
        Error::InvalidSelection(_) => MforceStatus::OutOfBounds,
        _ => MforceStatus::Precondition,
    }
}

/// Runs `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (MforceStatus, String)>) -> MforceStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MforceStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            MforceStatus::Internal
        }
    }
}

type FfiResult<T> = Result<T, (MforceStatus, String)>;

fn lib<T>(r: mforce::Result<T>) -> FfiResult<T> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn matrix<'a>(p: *const MforceMatrix) -> FfiResult<&'a BitMatrix> {
    p.as_ref().map(|m| &m.0).ok_or((MforceStatus::NullPointer, "null matrix handle".into()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> FfiResult<()> {
    if out.is_null() {
        return Err((MforceStatus::NullPointer, "null output pointer".into()));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_matrix(out: *mut *mut MforceMatrix, m: BitMatrix) -> FfiResult<()> {
    write_out(out, Box::into_raw(Box::new(MforceMatrix(m))))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| (MforceStatus::Internal, "string contains NUL".into()))?;
    if out.is_null() {
        return Err((MforceStatus::NullPointer, "null output pointer".into()));
    }
    out.write(c.into_raw());
    Ok(())
}

/// Message for the last failed call on this thread (empty after success).
/// The pointer is valid until the next `mforce_*` call on this thread.
#[no_mangle]
pub extern "C" fn mforce_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mforce_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `m` must be null or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_free(m: *mut MforceMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// All-zero `rows x cols` matrix.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_new(rows: usize, cols: usize, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| write_matrix(out, lib(BitMatrix::zeros(rows, cols))?))
}

/// Parses the text format: optional `m n` header, then rows of `0`/`1`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_parse(text: *const c_char, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| {
        if text.is_null() {
            return Err((MforceStatus::NullPointer, "null text".into()));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| (MforceStatus::InvalidUtf8, e.to_string()))?;
        write_matrix(out, lib(BitMatrix::parse(s))?)
    })
}

/// Text form with header; free with [`mforce_string_free`].
///
/// # Safety
/// `m` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_serialize(m: *const MforceMatrix, out: *mut *mut c_char) -> MforceStatus {
    guard(|| write_string(out, matrix(m)?.serialize()))
}

/// # Safety
/// `m` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_rows(m: *const MforceMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_cols(m: *const MforceMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must be null or a live handle. Returns 0 for null.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_ones_count(m: *const MforceMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.ones_count())
}

fn in_bounds(a: &BitMatrix, row: usize, col: usize) -> FfiResult<()> {
    if row >= a.rows() || col >= a.cols() {
        return Err((
            MforceStatus::OutOfBounds,
            format!("({row}, {col}) is outside a {}x{} matrix", a.rows(), a.cols()),
        ));
    }
    Ok(())
}

/// # Safety
/// `m` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_get(
    m: *const MforceMatrix,
    row: usize,
    col: usize,
    out: *mut bool,
) -> MforceStatus {
    guard(|| {
        let a = matrix(m)?;
        in_bounds(a, row, col)?;
        write_out(out, a.get(row, col))
    })
}

/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_set(m: *mut MforceMatrix, row: usize, col: usize, value: bool) -> MforceStatus {
    guard(|| {
        let a = &mut m.as_mut().ok_or((MforceStatus::NullPointer, "null matrix handle".to_string()))?.0;
        in_bounds(a, row, col)?;
        a.set(row, col, value);
        Ok(())
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_identity(k: usize, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| write_matrix(out, lib(BitMatrix::identity(k))?))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_matrix_hankel(k: usize, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| write_matrix(out, lib(BitMatrix::hankel(k))?))
}

/// The least `m x n` Q-forcing matrix.
///
/// # Safety
/// `q` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_minimal_forcing(
    m: usize,
    n: usize,
    q: *const MforceMatrix,
    out: *mut *mut MforceMatrix,
) -> MforceStatus {
    guard(|| write_matrix(out, lib(forcing::minimal_forcing(m, n, matrix(q)?))?))
}

/// `m(m, n, Q)`, by closed form when one applies and by the minimal
/// construction otherwise.
///
/// # Safety
/// `q` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_min_ones(m: usize, n: usize, q: *const MforceMatrix, out: *mut u64) -> MforceStatus {
    guard(|| {
        let q = matrix(q)?;
        let v = match forcing::min_ones(m, n, q) {
            Ok(v) => v.value,
            Err(Error::NoFormula(_)) => lib(forcing::minimal_forcing(m, n, q))?.ones_count() as u64,
            Err(e) => return lib(Err(e)),
        };
        write_out(out, v)
    })
}

/// # Safety
/// `a` and `q` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_is_forcing(a: *const MforceMatrix, q: *const MforceMatrix, out: *mut bool) -> MforceStatus {
    guard(|| write_out(out, lib(forcing::is_forcing(matrix(a)?, matrix(q)?))?))
}

/// # Safety
/// `a` and `q` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_is_strongly_forcing(
    a: *const MforceMatrix,
    q: *const MforceMatrix,
    out: *mut bool,
) -> MforceStatus {
    guard(|| write_out(out, lib(strong::is_strongly_forcing(matrix(a)?, matrix(q)?))?))
}

/// Looks for an exact copy of `q` in `a` through the 1-entry at
/// `(row, col)`. On success `*found` says whether one exists; if so, the
/// selected rows and columns are written to `rows_out` (length `q` rows) and
/// `cols_out` (length `q` columns).
///
/// # Safety
/// `a` and `q` must be live handles; `found` must be valid; `rows_out` and
/// `cols_out` must have room for the pattern's row and column counts.
#[no_mangle]
pub unsafe extern "C" fn mforce_find_witness(
    a: *const MforceMatrix,
    q: *const MforceMatrix,
    row: usize,
    col: usize,
    rows_out: *mut usize,
    cols_out: *mut usize,
    found: *mut bool,
) -> MforceStatus {
    guard(|| {
        let (a, q) = (matrix(a)?, matrix(q)?);
        if rows_out.is_null() || cols_out.is_null() {
            return Err((MforceStatus::NullPointer, "null output pointer".into()));
        }
        let w = lib(strong::find_witness(a, q, Position { row, col }))?;
        if let Some(w) = &w {
            ptr::copy_nonoverlapping(w.rows.as_ptr(), rows_out, w.rows.len());
            ptr::copy_nonoverlapping(w.cols.as_ptr(), cols_out, w.cols.len());
        }
        write_out(found, w.is_some())
    })
}

/// # Safety
/// `q` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_construct_a_mnq(
    m: usize,
    n: usize,
    q: *const MforceMatrix,
    out: *mut *mut MforceMatrix,
) -> MforceStatus {
    guard(|| write_matrix(out, lib(forcing::construct_a_mnq(m, n, matrix(q)?))?))
}

/// # Safety
/// `q` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_linear_zero_construction(
    m: usize,
    n: usize,
    q: *const MforceMatrix,
    out: *mut *mut MforceMatrix,
) -> MforceStatus {
    guard(|| write_matrix(out, lib(constructions::linear_zero_construction(m, n, matrix(q)?))?))
}

/// `J_n - H_n` for [`MforceVariant::I2`], `J_n - I_n` for
/// [`MforceVariant::H2`]. `variant` is taken as an integer so that
/// out-of-range values are rejected rather than undefined.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_extremal_2x2(n: usize, variant: u32, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| {
        let v = match variant {
            x if x == MforceVariant::I2 as u32 => TwoByTwo::I2,
            x if x == MforceVariant::H2 as u32 => TwoByTwo::H2,
            _ => return Err((MforceStatus::Precondition, format!("unknown variant {variant}"))),
        };
        write_matrix(out, lib(constructions::extremal_2x2(n, v))?)
    })
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_construct_s(n: usize, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| write_matrix(out, lib(constructions::construct_s(n))?))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_construct_t(n: usize, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| write_matrix(out, lib(constructions::construct_t(n))?))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_construct_s_nk(n: usize, k: usize, out: *mut *mut MforceMatrix) -> MforceStatus {
    guard(|| write_matrix(out, lib(constructions::construct_s_nk(n, k))?))
}

/// Block-diagonal sum of `a` and `b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_direct_sum(
    a: *const MforceMatrix,
    b: *const MforceMatrix,
    out: *mut *mut MforceMatrix,
) -> MforceStatus {
    guard(|| write_matrix(out, lib(constructions::block(matrix(a)?, matrix(b)?))?))
}

/// Exact search for `M(n, Q)`. `node_budget` of 0 means unlimited. The
/// outcome is written as JSON (`status`, `best_ones`, `witnesses`,
/// `nodes_explored`, `elapsed_ms`); free it with [`mforce_string_free`].
///
/// # Safety
/// `q` must be a live handle; `out_json` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mforce_search_max_json(
    n: usize,
    q: *const MforceMatrix,
    node_budget: u64,
    enumerate_all_extremal: bool,
    out_json: *mut *mut c_char,
) -> MforceStatus {
    guard(|| {
        let config = SearchConfig {
            node_budget: (node_budget > 0).then_some(node_budget),
            enumerate_all_extremal,
            ..SearchConfig::default()
        };
        let outcome = lib(search_max(n, matrix(q)?, &config))?;
        let json = serde_json::to_string(&outcome).map_err(|e| (MforceStatus::Internal, e.to_string()))?;
        write_string(out_json, json)
    })
}
