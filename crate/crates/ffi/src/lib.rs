//! C ABI over the `fcseries` evaluators and scanners.
//!
//! Every fallible call returns an [`FcsStatus`]. On failure the message is
//! kept per thread and can be read with [`fcs_last_error_message`]. Handles
//! are opaque and must be released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fcseries::cli::{render_report, Format};
use fcseries::verify::{self, ScanGrid, VarKind};
use fcseries::{analytic, quadrature, series};
use fcseries::{AnglePoint, Error, EvalPoint, EvalResult, Report, Route, Tolerance};

/// Status codes. Values 2 and 3 match the CLI exit codes for the same failures.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcsStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    ToleranceUnreachable = 3,
    UnsupportedParameters = 4,
    InvalidGrid = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcsRoute {
    Series = 0,
    Quadrature = 1,
    ClosedForm = 2,
    /// Series for small radii, closed form otherwise, quadrature as fallback.
    Auto = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FcsScanKind {
    Consistency = 0,
    Monotonicity = 1,
    Inequality = 2,
    Identity = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcsEvalResult {
    pub value: f64,
    pub error_bound: f64,
    /// Route that produced the value; never `FCS_ROUTE_AUTO`.
    pub route: FcsRoute,
    /// Series terms or quadrature panels.
    pub work: u64,
    /// False when `error_bound` is a rounding budget rather than a proof.
    pub rigorous: bool,
}

/// Grid bounds. The variable is `x` for consistency and monotonicity scans
/// and `phi` (radians) for inequality scans.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcsGrid {
    pub var_min: f64,
    pub var_max: f64,
    pub var_count: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub r_count: usize,
    pub inset: f64,
}

/// Evaluation settings: a route and a tolerance.
pub struct FcsEvaluator {
    route: FcsRoute,
    tol: Tolerance,
}

/// A finished scan report.
pub struct FcsReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FcsStatus {
    match e.root() {
        Error::Domain(_) => FcsStatus::Domain,
        Error::UnsupportedParameters(_) => FcsStatus::UnsupportedParameters,
        Error::ToleranceUnreachable(_) => FcsStatus::ToleranceUnreachable,
        Error::InvalidGrid(_) => FcsStatus::InvalidGrid,
        Error::AtPoint { .. } => unreachable!("root() strips point annotations"),
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Error>) -> FcsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => FcsStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            FcsStatus::Panic
        }
    }
}

fn null_pointer(what: &str) -> FcsStatus {
    set_last_error(format!("{what} is null"));
    FcsStatus::NullPointer
}

fn route_of(r: Route) -> FcsRoute {
    match r {
        Route::Series => FcsRoute::Series,
        Route::Quadrature => FcsRoute::Quadrature,
        Route::ClosedForm => FcsRoute::ClosedForm,
    }
}

impl From<EvalResult> for FcsEvalResult {
    fn from(e: EvalResult) -> Self {
        FcsEvalResult {
            value: e.value,
            error_bound: e.error_bound,
            route: route_of(e.route),
            work: e.work,
            rigorous: e.rigorous,
        }
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fcs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fcs_version() -> *const c_char {
    const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Creates an evaluator. `tol` is the requested absolute accuracy.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn fcs_evaluator_new(
    route: FcsRoute,
    tol: f64,
    out: *mut *mut FcsEvaluator,
) -> FcsStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        let tol = Tolerance::new(tol)?;
        let handle = Box::new(FcsEvaluator { route, tol });
        // SAFETY: checked non-null above; caller guarantees validity
        unsafe { *out = Box::into_raw(handle) };
        Ok(())
    })
}

/// Releases an evaluator. NULL is ignored.
///
/// # Safety
/// `ev` must come from [`fcs_evaluator_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fcs_evaluator_free(ev: *mut FcsEvaluator) {
    if !ev.is_null() {
        // SAFETY: ownership returns from the caller
        drop(unsafe { Box::from_raw(ev) });
    }
}

fn eval_point(
    ev: &FcsEvaluator,
    p: EvalPoint,
    angle: Option<AnglePoint>,
) -> Result<EvalResult, Error> {
    match (ev.route, angle) {
        (FcsRoute::Series, Some(a)) => series::fourier_series(a, ev.tol),
        (FcsRoute::Series, None) => series::f_series(p, ev.tol),
        (FcsRoute::Quadrature, _) => quadrature::f_quad(p, ev.tol),
        (FcsRoute::ClosedForm, _) => analytic::f_closed(p),
        (FcsRoute::Auto, _) => verify::dispatch_eval(p, ev.tol),
    }
}

/// Evaluates `f(x, r)`.
///
/// # Safety
/// `ev` must be a live evaluator and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_eval_x(
    ev: *const FcsEvaluator,
    x: f64,
    r: f64,
    out: *mut FcsEvalResult,
) -> FcsStatus {
    if ev.is_null() || out.is_null() {
        return null_pointer("evaluator or out");
    }
    // SAFETY: non-null and live per the contract
    let ev = unsafe { &*ev };
    guard(|| {
        let res = eval_point(ev, EvalPoint::new(x, r)?, None)?;
        unsafe { *out = res.into() };
        Ok(())
    })
}

/// Evaluates the angle form `Σ (−1)^{k+1} r^k cos(kφ)/(k+2)`, `φ` in radians.
///
/// # Safety
/// `ev` must be a live evaluator and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_eval_phi(
    ev: *const FcsEvaluator,
    phi: f64,
    r: f64,
    out: *mut FcsEvalResult,
) -> FcsStatus {
    if ev.is_null() || out.is_null() {
        return null_pointer("evaluator or out");
    }
    let ev = unsafe { &*ev };
    guard(|| {
        let a = AnglePoint::new(phi, r)?;
        let res = eval_point(ev, a.to_eval_point()?, Some(a))?;
        unsafe { *out = res.into() };
        Ok(())
    })
}

/// Evaluates `∂f/∂x(x, r)` by quadrature at the evaluator's tolerance.
///
/// # Safety
/// `ev` must be a live evaluator and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_eval_dfdx(
    ev: *const FcsEvaluator,
    x: f64,
    r: f64,
    out: *mut FcsEvalResult,
) -> FcsStatus {
    if ev.is_null() || out.is_null() {
        return null_pointer("evaluator or out");
    }
    let ev = unsafe { &*ev };
    guard(|| {
        let res = quadrature::dfdx_quad(EvalPoint::new(x, r)?, ev.tol)?;
        unsafe { *out = res.into() };
        Ok(())
    })
}

/// `f(1, r) − f(cos φ, r)` for `φ ∈ (0, π)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_margin(phi: f64, r: f64, out: *mut f64) -> FcsStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        let m = analytic::margin(AnglePoint::new(phi, r)?)?;
        unsafe { *out = m };
        Ok(())
    })
}

fn default_grid(kind: FcsScanKind) -> ScanGrid {
    match kind {
        FcsScanKind::Consistency => ScanGrid::consistency_default(),
        FcsScanKind::Monotonicity => ScanGrid::monotonicity_default(),
        FcsScanKind::Inequality => ScanGrid::inequality_default(),
        FcsScanKind::Identity => verify::identity_grid(),
    }
}

/// Fills `out` with the default grid for `kind`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_default_grid(kind: FcsScanKind, out: *mut FcsGrid) -> FcsStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        let g = default_grid(kind);
        let vars = g.var_values();
        let rs = g.r_values();
        let grid = FcsGrid {
            var_min: vars[0],
            var_max: vars[vars.len() - 1],
            var_count: g.var_count(),
            r_min: rs[0],
            r_max: rs[rs.len() - 1],
            r_count: g.r_count(),
            inset: g.inset(),
        };
        unsafe { *out = grid };
        Ok(())
    })
}

/// Runs a scan. `grid` may be NULL for the default grid of `kind`; the
/// identity scan only accepts NULL.
///
/// # Safety
/// `grid` must be NULL or readable; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_scan(
    kind: FcsScanKind,
    grid: *const FcsGrid,
    tol: f64,
    out: *mut *mut FcsReport,
) -> FcsStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    // SAFETY: NULL or readable per the contract
    let grid = unsafe { grid.as_ref() }.copied();
    guard(|| {
        let tol = Tolerance::new(tol)?;
        let g = match grid {
            None => default_grid(kind),
            Some(_) if kind == FcsScanKind::Identity => {
                return Err(Error::InvalidGrid("the identity scan uses a fixed grid".into()))
            }
            Some(g) => {
                let var_kind =
                    if kind == FcsScanKind::Inequality { VarKind::PhiGrid } else { VarKind::XGrid };
                ScanGrid::new(
                    var_kind,
                    g.var_min,
                    g.var_max,
                    g.var_count,
                    g.r_min,
                    g.r_max,
                    g.r_count,
                    g.inset,
                )?
            }
        };
        let report = match kind {
            FcsScanKind::Consistency => verify::consistency_scan(&g, tol)?,
            FcsScanKind::Monotonicity => verify::monotonicity_scan(&g, tol)?,
            FcsScanKind::Inequality => verify::inequality_scan(&g, tol)?,
            FcsScanKind::Identity => verify::identity_scan(tol)?,
        };
        unsafe { *out = Box::into_raw(Box::new(FcsReport(report))) };
        Ok(())
    })
}

/// # Safety
/// `rep` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_passed(rep: *const FcsReport) -> bool {
    unsafe { rep.as_ref() }.is_some_and(|r| r.0.passed())
}

/// # Safety
/// `rep` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_points_checked(rep: *const FcsReport) -> usize {
    unsafe { rep.as_ref() }.map_or(0, |r| r.0.points_checked)
}

/// # Safety
/// `rep` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_violation_count(rep: *const FcsReport) -> usize {
    unsafe { rep.as_ref() }.map_or(0, |r| r.0.violations.len())
}

/// Smallest margin seen; NaN for a NULL report.
///
/// # Safety
/// `rep` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_min_margin(rep: *const FcsReport) -> f64 {
    unsafe { rep.as_ref() }.map_or(f64::NAN, |r| r.0.min_margin)
}

/// # Safety
/// `rep` must be a live report; `var` and `r` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_worst_point(
    rep: *const FcsReport,
    var: *mut f64,
    r: *mut f64,
) -> FcsStatus {
    if rep.is_null() || var.is_null() || r.is_null() {
        return null_pointer("report or output");
    }
    unsafe {
        let p = (*rep).0.worst_point;
        *var = p.var;
        *r = p.r;
    }
    FcsStatus::Ok
}

/// The report as JSON with `precision` significant digits (1 to 17).
/// Returns NULL on bad arguments; free the result with [`fcs_string_free`].
///
/// # Safety
/// `rep` must be NULL or a live report.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_to_json(rep: *const FcsReport, precision: u8) -> *mut c_char {
    let Some(rep) = (unsafe { rep.as_ref() }) else {
        null_pointer("report");
        return ptr::null_mut();
    };
    if !(1..=17).contains(&precision) {
        set_last_error(format!("precision must lie in [1, 17], got {precision}"));
        return ptr::null_mut();
    }
    let text = render_report(&rep.0, Format::Json, precision);
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// Releases a report. NULL is ignored.
///
/// # Safety
/// `rep` must come from [`fcs_scan`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fcs_report_free(rep: *mut FcsReport) {
    if !rep.is_null() {
        drop(unsafe { Box::from_raw(rep) });
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fcs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
