//! C ABI over `ptrig`.
//!
//! Every entry point returns a [`PtrigStatus`] and writes its result through
//! an out-pointer. Objects are opaque handles released with the matching
//! `*_free`. On failure, [`ptrig_last_error`] describes what went wrong; the
//! message is per thread and stays valid until the next failing call on that
//! thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ptrig::fourier::{
    basis_criterion, criterion_from_table, CoeffKind, CoeffTable, CriterionReport,
};
use ptrig::thresholds::{h, solve_p0, solve_p1, zeta, RootResult};
use ptrig::{c_p, pi_p, v_p, Error, EvalConfig, PExponent};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtrigStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the mathematical domain.
    Domain = 2,
    /// Convergence, quadrature or bracketing failure.
    Numerical = 3,
    /// Internal panic, caught at the boundary.
    Panic = 4,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PtrigCoeffKind {
    /// a_j, sine series of sin_p(π_p x).
    SineA = 0,
    /// b_j, cosine series of cos_p(π_p x).
    CosineB = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtrigEvalConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_newton_iters: usize,
    pub quad_levels: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtrigCoeff {
    pub value: f64,
    pub err_est: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtrigCriterion {
    pub p: f64,
    pub b1: f64,
    pub tail_computed: f64,
    pub tail_remainder_bound: f64,
    pub cutoff: usize,
    pub margin: f64,
    pub holds: bool,
    pub err_est: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtrigRoot {
    pub root: f64,
    pub residual: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub iterations: usize,
}

/// Opaque exponent handle.
pub struct PtrigExponent(PExponent);

/// Opaque coefficient table handle.
pub struct PtrigCoeffTable(CoeffTable);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> PtrigStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PtrigStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            PtrigStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            let status = match e {
                Error::Domain(_) => PtrigStatus::Domain,
                _ => PtrigStatus::Numerical,
            };
            set_error(e.to_string());
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            PtrigStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(ptr: *mut T, what: &'static str) -> std::result::Result<&'a mut T, Failure> {
    ptr.as_mut().ok_or(Failure::Null(what))
}

unsafe fn handle<'a, T>(ptr: *const T, what: &'static str) -> std::result::Result<&'a T, Failure> {
    ptr.as_ref().ok_or(Failure::Null(what))
}

/// Message of the last failing call on this thread, or NULL.
#[no_mangle]
pub extern "C" fn ptrig_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ptrig_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version contains NUL"),
        };
    VERSION.as_ptr()
}

/// The evaluator defaults.
#[no_mangle]
pub extern "C" fn ptrig_eval_config_default() -> PtrigEvalConfig {
    let c = EvalConfig::default();
    PtrigEvalConfig {
        rel_tol: c.rel_tol,
        abs_tol: c.abs_tol,
        max_newton_iters: c.max_newton_iters,
        quad_levels: c.quad_levels,
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_exponent_new(p: f64, out: *mut *mut PtrigExponent) -> PtrigStatus {
    guard(|| {
        let slot = unsafe { self::out(out, "out") }?;
        *slot = Box::into_raw(Box::new(PtrigExponent(PExponent::new(p)?)));
        Ok(())
    })
}

/// # Safety
/// `config` must be readable, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_exponent_new_with_config(
    p: f64,
    config: *const PtrigEvalConfig,
    out: *mut *mut PtrigExponent,
) -> PtrigStatus {
    guard(|| {
        let c = unsafe { handle(config, "config") }?;
        let slot = unsafe { self::out(out, "out") }?;
        let config = EvalConfig {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_newton_iters: c.max_newton_iters,
            quad_levels: c.quad_levels,
        };
        *slot = Box::into_raw(Box::new(PtrigExponent(PExponent::with_config(p, config)?)));
        Ok(())
    })
}

/// # Safety
/// `handle` must come from `ptrig_exponent_new*` and not be used afterwards.
/// NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ptrig_exponent_free(handle: *mut PtrigExponent) {
    if !handle.is_null() {
        drop(unsafe { Box::from_raw(handle) });
    }
}

fn with_exponent(
    handle: *const PtrigExponent,
    out: *mut f64,
    f: impl FnOnce(&PExponent) -> ptrig::Result<f64>,
) -> PtrigStatus {
    guard(|| {
        let pe = &unsafe { self::handle(handle, "handle") }?.0;
        let slot = unsafe { self::out(out, "out") }?;
        *slot = f(pe)?;
        Ok(())
    })
}

fn scalar(out: *mut f64, f: impl FnOnce() -> ptrig::Result<f64>) -> PtrigStatus {
    guard(|| {
        let slot = unsafe { self::out(out, "out") }?;
        *slot = f()?;
        Ok(())
    })
}

/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_sin_p(
    handle: *const PtrigExponent,
    x: f64,
    out: *mut f64,
) -> PtrigStatus {
    with_exponent(handle, out, |pe| pe.sin_p(x))
}

/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_cos_p(
    handle: *const PtrigExponent,
    x: f64,
    out: *mut f64,
) -> PtrigStatus {
    with_exponent(handle, out, |pe| pe.cos_p(x))
}

/// Derivative of cos_p.
///
/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_dcos_p(
    handle: *const PtrigExponent,
    x: f64,
    out: *mut f64,
) -> PtrigStatus {
    with_exponent(handle, out, |pe| pe.dcos_p(x))
}

/// Second derivative of cos_p (x away from the quarter points when p < 2).
///
/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_d2cos_p(
    handle: *const PtrigExponent,
    x: f64,
    out: *mut f64,
) -> PtrigStatus {
    with_exponent(handle, out, |pe| pe.d2cos_p(x))
}

/// Inverse of sin_p on [-1, 1].
///
/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_incomplete_f(
    handle: *const PtrigExponent,
    y: f64,
    out: *mut f64,
) -> PtrigStatus {
    with_exponent(handle, out, |pe| pe.incomplete_f(y))
}

/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_u_p(
    handle: *const PtrigExponent,
    x: f64,
    out: *mut f64,
) -> PtrigStatus {
    with_exponent(handle, out, |pe| pe.u_p(x))
}

/// exp_p(iy) = cos_p(y) + i sin_p(y).
///
/// # Safety
/// `handle` must be a live exponent handle; `re` and `im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_exp_p(
    handle: *const PtrigExponent,
    y: f64,
    re: *mut f64,
    im: *mut f64,
) -> PtrigStatus {
    guard(|| {
        let pe = &unsafe { self::handle(handle, "handle") }?.0;
        let re = unsafe { out(re, "re") }?;
        let im = unsafe { out(im, "im") }?;
        let z = pe.exp_p(y)?;
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_exponent_pi_p(
    handle: *const PtrigExponent,
    out: *mut f64,
) -> PtrigStatus {
    guard(|| {
        let pe = &unsafe { self::handle(handle, "handle") }?.0;
        *unsafe { self::out(out, "out") }? = pe.pi_p();
        Ok(())
    })
}

/// # Safety
/// `handle` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_m_p(handle: *const PtrigExponent, out: *mut f64) -> PtrigStatus {
    guard(|| {
        let pe = &unsafe { self::handle(handle, "handle") }?.0;
        *unsafe { self::out(out, "out") }? = pe.m_p()?;
        Ok(())
    })
}

/// π_p = 2π/(p sin(π/p)).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_pi_p(p: f64, out: *mut f64) -> PtrigStatus {
    scalar(out, || pi_p(p))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_c_p(p: f64, out: *mut f64) -> PtrigStatus {
    scalar(out, || c_p(p))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_v_p(x: f64, p: f64, out: *mut f64) -> PtrigStatus {
    scalar(out, || v_p(x, p))
}

/// Riemann zeta for real q > 1.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_zeta(q: f64, out: *mut f64) -> PtrigStatus {
    scalar(out, || zeta(q))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_h(p: f64, out: *mut f64) -> PtrigStatus {
    scalar(out, || h(p))
}

/// # Safety
/// `exponent` must be a live exponent handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_coeff_table_new(
    exponent: *const PtrigExponent,
    kind: PtrigCoeffKind,
    j_max: usize,
    out: *mut *mut PtrigCoeffTable,
) -> PtrigStatus {
    guard(|| {
        let pe = &unsafe { handle(exponent, "exponent") }?.0;
        let slot = unsafe { self::out(out, "out") }?;
        let kind = match kind {
            PtrigCoeffKind::SineA => CoeffKind::SineA,
            PtrigCoeffKind::CosineB => CoeffKind::CosineB,
        };
        *slot = Box::into_raw(Box::new(PtrigCoeffTable(CoeffTable::compute(
            pe, kind, j_max,
        )?)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from `ptrig_coeff_table_new` and not be used
/// afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ptrig_coeff_table_free(table: *mut PtrigCoeffTable) {
    if !table.is_null() {
        drop(unsafe { Box::from_raw(table) });
    }
}

/// # Safety
/// `table` must be a live table handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_coeff_table_j_max(
    table: *const PtrigCoeffTable,
    out: *mut usize,
) -> PtrigStatus {
    guard(|| {
        let t = &unsafe { handle(table, "table") }?.0;
        *unsafe { self::out(out, "out") }? = t.j_max();
        Ok(())
    })
}

/// Coefficient `j`; `Domain` outside `first..=j_max` (first is 0 for
/// cosine tables, 1 for sine tables).
///
/// # Safety
/// `table` must be a live table handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_coeff_table_get(
    table: *const PtrigCoeffTable,
    j: usize,
    out: *mut PtrigCoeff,
) -> PtrigStatus {
    guard(|| {
        let t = &unsafe { handle(table, "table") }?.0;
        let slot = unsafe { self::out(out, "out") }?;
        let c = t.get(j).ok_or_else(|| {
            Error::Domain(format!(
                "index {j} outside {}..={}",
                t.kind().first_index(),
                t.j_max()
            ))
        })?;
        *slot = PtrigCoeff {
            value: c.value,
            err_est: c.err_est,
        };
        Ok(())
    })
}

fn criterion(r: CriterionReport) -> PtrigCriterion {
    PtrigCriterion {
        p: r.p,
        b1: r.b1,
        tail_computed: r.tail_computed,
        tail_remainder_bound: r.tail_remainder_bound,
        cutoff: r.cutoff,
        margin: r.margin,
        holds: r.holds,
        err_est: r.err_est,
    }
}

/// Basis criterion with cutoff `j` (odd, >= 3).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_basis_criterion(
    p: f64,
    j: usize,
    out: *mut PtrigCriterion,
) -> PtrigStatus {
    guard(|| {
        let slot = unsafe { self::out(out, "out") }?;
        *slot = criterion(basis_criterion(p, j)?);
        Ok(())
    })
}

/// Basis criterion from an existing cosine table.
///
/// # Safety
/// `table` must be a live table handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_criterion_from_table(
    table: *const PtrigCoeffTable,
    out: *mut PtrigCriterion,
) -> PtrigStatus {
    guard(|| {
        let t = &unsafe { handle(table, "table") }?.0;
        let slot = unsafe { self::out(out, "out") }?;
        *slot = criterion(criterion_from_table(t)?);
        Ok(())
    })
}

fn root(r: RootResult) -> PtrigRoot {
    PtrigRoot {
        root: r.root,
        residual: r.residual,
        bracket_lo: r.bracket.0,
        bracket_hi: r.bracket.1,
        iterations: r.iterations,
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_solve_p0(out: *mut PtrigRoot) -> PtrigStatus {
    guard(|| {
        let slot = unsafe { self::out(out, "out") }?;
        *slot = root(solve_p0()?);
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ptrig_solve_p1(out: *mut PtrigRoot) -> PtrigStatus {
    guard(|| {
        let slot = unsafe { self::out(out, "out") }?;
        *slot = root(solve_p1()?);
        Ok(())
    })
}
