//! C ABI over `etf-core`.
//!
//! Matrices and frames are opaque heap handles released with their `_free`
//! function. Every fallible call returns an [`EtfStatus`]; on failure the
//! message is available from [`etf_last_error_message`] on the same thread.
//! Strings returned through `char **` are released with [`etf_string_free`].
//! Matrix indices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use etf_core::constructions::{frame_9_6, power_9, tensor_compose, ConstructionError};
use etf_core::digraph::Digraph;
use etf_core::feasibility::feasibility_table;
use etf_core::frames::{frame_of, validate_frame, FrameFile, FrameReport, FrameSystem};
use etf_core::search::switching_equivalent;
use etf_core::seidel::{
    check_conditions, check_signature, derive_params, Entry, FrameParams, ParamsError, SeidelMatrix,
};

/// Result codes shared by all functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtfStatus {
    Ok = 0,
    /// The input is valid but the property does not hold.
    Negative = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// A configured size limit was exceeded.
    Limit = 4,
    NullPointer = 5,
    BufferTooSmall = 6,
    Internal = 7,
}

/// Opaque cube-root Seidel matrix.
pub struct EtfMatrix(SeidelMatrix);

/// Opaque synthesized frame with its validation report.
pub struct EtfFrame {
    system: FrameSystem,
    report: FrameReport,
}

/// Frame parameters; `e` is meaningful only when `has_e` is nonzero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EtfParams {
    pub n: i64,
    pub k: i64,
    pub mu: i64,
    pub e: i64,
    pub has_e: u8,
    pub lambda1: i64,
    pub lambda2: i64,
}

impl From<FrameParams> for EtfParams {
    fn from(p: FrameParams) -> Self {
        Self {
            n: p.n,
            k: p.k,
            mu: p.mu,
            e: p.e.unwrap_or(0),
            has_e: p.e.is_some() as u8,
            lambda1: p.lambda1,
            lambda2: p.lambda2,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

type Failure = (EtfStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EtfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EtfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            EtfStatus::Internal
        }
    }
}

fn null() -> Failure {
    (EtfStatus::NullPointer, "null pointer argument".into())
}

unsafe fn matrix<'a>(q: *const EtfMatrix) -> Result<&'a SeidelMatrix, Failure> {
    q.as_ref().map(|m| &m.0).ok_or_else(null)
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|e| (EtfStatus::Parse, e.to_string()))
}

unsafe fn write_out<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn emit_matrix(out: *mut *mut EtfMatrix, q: SeidelMatrix) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(EtfMatrix(q))))
}

unsafe fn emit_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| (EtfStatus::Internal, e.to_string()))?;
    write_out(out, c.into_raw())
}

fn construction(e: ConstructionError) -> Failure {
    let status = match e {
        ConstructionError::SizeLimit { .. } => EtfStatus::Limit,
        ConstructionError::ZeroPower => EtfStatus::InvalidArgument,
        ConstructionError::PreconditionMuNotMinus2 { .. } => EtfStatus::Negative,
    };
    (status, e.to_string())
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn etf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `.crsm` text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_parse(text: *const c_char, out: *mut *mut EtfMatrix) -> EtfStatus {
    guard(|| {
        let q = SeidelMatrix::parse_crsm(read_str(text)?).map_err(|e| (EtfStatus::Parse, e.to_string()))?;
        emit_matrix(out, q)
    })
}

/// The 9×9 signature matrix.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_nine(out: *mut *mut EtfMatrix) -> EtfStatus {
    guard(|| emit_matrix(out, frame_9_6()))
}

/// The `m`-fold Kronecker power of the 9×9 matrix, of order `9^m ≤ cap`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_power9(m: u32, cap: usize, out: *mut *mut EtfMatrix) -> EtfStatus {
    guard(|| emit_matrix(out, power_9(m, cap).map_err(construction)?))
}

/// `(A+I)⊗(B+I)−I` for factors with `μ = −2`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_tensor(
    a: *const EtfMatrix,
    b: *const EtfMatrix,
    out: *mut *mut EtfMatrix,
) -> EtfStatus {
    guard(|| emit_matrix(out, tensor_compose(matrix(a)?, matrix(b)?).map_err(construction)?))
}

/// Standard form (first row and column all ones).
///
/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_standard_form(q: *const EtfMatrix, out: *mut *mut EtfMatrix) -> EtfStatus {
    guard(|| emit_matrix(out, matrix(q)?.standard_form().0))
}

/// # Safety
/// `q` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_free(q: *mut EtfMatrix) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Order of `q`, or 0 for a null handle.
///
/// # Safety
/// `q` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_order(q: *const EtfMatrix) -> usize {
    q.as_ref().map_or(0, |m| m.0.order())
}

/// Entry `(i, j)` as the exponent of ω, or −1 on the diagonal.
///
/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_entry(q: *const EtfMatrix, i: usize, j: usize, out: *mut i32) -> EtfStatus {
    guard(|| {
        let q = matrix(q)?;
        let n = q.order();
        if i >= n || j >= n {
            return Err((EtfStatus::InvalidArgument, format!("index ({i},{j}) outside order {n}")));
        }
        let v = match q.entry(i, j) {
            Entry::Zero => -1,
            Entry::Root(r) => r.exponent() as i32,
        };
        write_out(out, v)
    })
}

/// `.crsm` rendering; free with [`etf_string_free`].
///
/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_matrix_to_crsm(q: *const EtfMatrix, out: *mut *mut c_char) -> EtfStatus {
    guard(|| emit_string(out, matrix(q)?.to_crsm()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn etf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Exact check of `Q² = (n−1)I + μQ`; `Negative` when it fails.
///
/// # Safety
/// `q` must be a live handle; `mu` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_verify_signature(q: *const EtfMatrix, mu: *mut i64) -> EtfStatus {
    guard(|| {
        let m = check_signature(matrix(q)?).map_err(|v| (EtfStatus::Negative, v.to_string()))?;
        write_out(mu, m)
    })
}

/// Pairwise-condition check of a nontrivial standard-form matrix.
///
/// # Safety
/// `q` must be a live handle; `mu` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_verify_via_conditions(q: *const EtfMatrix, mu: *mut i64) -> EtfStatus {
    guard(|| {
        let m = check_conditions(matrix(q)?).map_err(|v| (EtfStatus::Negative, v.to_string()))?;
        write_out(mu, m)
    })
}

/// Exact parameters from `(n, μ)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_derive_params(n: i64, mu: i64, out: *mut EtfParams) -> EtfStatus {
    guard(|| {
        let p = derive_params(n, mu).map_err(|e| {
            let status = match e {
                ParamsError::OrderTooSmall(_) => EtfStatus::InvalidArgument,
                _ => EtfStatus::Negative,
            };
            (status, e.to_string())
        })?;
        write_out(out, p.into())
    })
}

/// Admissible parameters for all orders `≤ max_n`. Writes the row count to
/// `len`; returns `BufferTooSmall` without writing rows when `cap` is less.
///
/// # Safety
/// `buf` must hold `cap` elements (may be null when `cap` is 0); `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_feasibility_table(max_n: i64, buf: *mut EtfParams, cap: usize, len: *mut usize) -> EtfStatus {
    guard(|| {
        let rows = feasibility_table(max_n);
        write_out(len, rows.len())?;
        if rows.len() > cap {
            return Err((EtfStatus::BufferTooSmall, format!("{} rows, capacity {cap}", rows.len())));
        }
        if !rows.is_empty() && buf.is_null() {
            return Err(null());
        }
        for (t, p) in rows.into_iter().enumerate() {
            buf.add(t).write(p.into());
        }
        Ok(())
    })
}

/// Checks `.dg` text for e-regularity and the pairwise digraph equations.
///
/// # Safety
/// `text` must be a NUL-terminated string; `e` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_check_graph(text: *const c_char, e: *mut usize) -> EtfStatus {
    guard(|| {
        let g = Digraph::parse_dg(read_str(text)?).map_err(|err| (EtfStatus::Parse, err.to_string()))?;
        let v = g.check_conditions().map_err(|err| (EtfStatus::Negative, err.to_string()))?;
        write_out(e, v)
    })
}

/// Switching equivalence for orders up to the canonicalization bound.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_switching_equivalent(a: *const EtfMatrix, b: *const EtfMatrix, out: *mut bool) -> EtfStatus {
    guard(|| {
        let r = switching_equivalent(matrix(a)?, matrix(b)?).map_err(|e| {
            let status = match e {
                etf_core::search::CanonicalError::SizeLimit { .. } => EtfStatus::Limit,
                etf_core::search::CanonicalError::OrderMismatch { .. } => EtfStatus::InvalidArgument,
            };
            (status, e.to_string())
        })?;
        write_out(out, r)
    })
}

/// Synthesizes and validates the frame of a signature matrix.
///
/// # Safety
/// `q` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_synthesize(q: *const EtfMatrix, out: *mut *mut EtfFrame) -> EtfStatus {
    guard(|| {
        let system = frame_of(matrix(q)?).map_err(|e| (EtfStatus::Negative, e.to_string()))?;
        let report = validate_frame(&system);
        write_out(out, Box::into_raw(Box::new(EtfFrame { system, report })))
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_free(f: *mut EtfFrame) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of vectors, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_n(f: *const EtfFrame) -> usize {
    f.as_ref().map_or(0, |f| f.system.n)
}

/// Dimension, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_k(f: *const EtfFrame) -> usize {
    f.as_ref().map_or(0, |f| f.system.k)
}

/// The constant `c_{n,k}`, or NaN for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_c(f: *const EtfFrame) -> f64 {
    f.as_ref().map_or(f64::NAN, |f| f.system.c)
}

/// 1 when every validation deviation is within tolerance.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_passed(f: *const EtfFrame) -> u8 {
    f.as_ref().map_or(0, |f| f.report.passed as u8)
}

/// Largest validation deviation, or NaN for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_max_deviation(f: *const EtfFrame) -> f64 {
    f.as_ref().map_or(f64::NAN, |f| f.report.max_deviation())
}

/// Copies vector `i` into `re[0..k]` and `im[0..k]`.
///
/// # Safety
/// `f` must be a live handle; `re` and `im` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_vector(
    f: *const EtfFrame,
    i: usize,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> EtfStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(null)?;
        let v = f.system.vectors.get(i).ok_or((EtfStatus::InvalidArgument, format!("vector {i} out of range")))?;
        if len < v.len() {
            return Err((EtfStatus::BufferTooSmall, format!("need {} entries", v.len())));
        }
        if re.is_null() || im.is_null() {
            return Err(null());
        }
        for (t, z) in v.iter().enumerate() {
            re.add(t).write(z.re);
            im.add(t).write(z.im);
        }
        Ok(())
    })
}

/// Frame file JSON; free with [`etf_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn etf_frame_to_json(f: *const EtfFrame, out: *mut *mut c_char) -> EtfStatus {
    guard(|| {
        let f = f.as_ref().ok_or_else(null)?;
        emit_string(out, FrameFile::new(&f.system, f.report).to_json())
    })
}
