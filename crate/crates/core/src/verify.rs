//! Cross-route consistency checks and the grid scanners.
//!
//! Every scan evaluates its grid points in parallel, collects the outcomes in
//! grid order, and reduces them sequentially. The report is therefore the same
//! whatever the thread schedule. Ties on the minimum margin go to the first
//! point in row-major order (var index outer, r index inner).

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic;
use crate::domain::{AnglePoint, EvalPoint, EvalResult, Tolerance};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::series;

/// Default distance kept from the open ends of the domain.
pub const DEFAULT_INSET: f64 = 1e-3;
/// Absolute slack added to every pairwise agreement check.
pub const AGREEMENT_SLACK: f64 = 1e-12;
/// Forward differences are only taken between grid points at least this far apart.
pub const MIN_FORWARD_STEP: f64 = 1e-2;
/// Truncation orders checked by [`identity_scan`].
pub const IDENTITY_ORDERS: [u64; 3] = [5, 20, 80];

pub type EvalFn = fn(EvalPoint, Tolerance) -> Result<EvalResult>;

/// The evaluation routes a scan draws on.
///
/// [`Routes::standard`] wires in the real implementations; tests substitute
/// deliberately broken ones to make sure the scans can fail.
#[derive(Clone, Copy)]
pub struct Routes {
    pub series: EvalFn,
    pub quadrature: EvalFn,
    pub closed_form: fn(EvalPoint) -> Result<EvalResult>,
    pub derivative: EvalFn,
    pub at_one: fn(f64) -> Result<EvalResult>,
    pub generating_lhs: fn(EvalPoint) -> f64,
}

impl Routes {
    pub fn standard() -> Self {
        Routes {
            series: series::f_series,
            quadrature: quadrature::f_quad,
            closed_form: analytic::f_closed,
            derivative: quadrature::dfdx_quad,
            at_one: analytic::f_at_one_eval,
            generating_lhs: series::generating_lhs,
        }
    }

    /// Series below [`analytic::SMALL_RADIUS`], closed form otherwise, and
    /// quadrature if the chosen route fails.
    pub fn dispatch(&self, p: EvalPoint, tol: Tolerance) -> Result<EvalResult> {
        let first = if p.r() < analytic::SMALL_RADIUS {
            (self.series)(p, tol)
        } else {
            (self.closed_form)(p)
        };
        first.or_else(|_| (self.quadrature)(p, tol))
    }
}

impl Default for Routes {
    fn default() -> Self {
        Routes::standard()
    }
}

impl fmt::Debug for Routes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Routes").finish_non_exhaustive()
    }
}

/// Evaluates `f(x, r)` through the preferred route for the point.
pub fn dispatch_eval(p: EvalPoint, tol: Tolerance) -> Result<EvalResult> {
    Routes::standard().dispatch(p, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    /// The grid variable is `x = cos φ`.
    XGrid,
    /// The grid variable is the angle `φ` in radians.
    PhiGrid,
}

/// A rectangular grid over `(x, r)` or `(φ, r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    var_kind: VarKind,
    var_min: f64,
    var_max: f64,
    var_count: usize,
    r_min: f64,
    r_max: f64,
    r_count: usize,
    inset: f64,
}

impl ScanGrid {
    /// Builds a grid, enforcing `x ∈ [−1 + δ, 1]`, `φ ∈ [δ, π − δ]` and
    /// `r ∈ [δ, 1]` where `δ` is the inset.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        var_kind: VarKind,
        var_min: f64,
        var_max: f64,
        var_count: usize,
        r_min: f64,
        r_max: f64,
        r_count: usize,
        inset: f64,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidGrid(msg));
        if !(inset.is_finite() && inset > 0.0 && inset < 0.5) {
            return bad(format!("inset must lie in (0, 0.5), got {inset}"));
        }
        if var_count == 0 || r_count == 0 {
            return bad("grid counts must be at least 1".into());
        }
        let (lo, hi, name) = match var_kind {
            VarKind::XGrid => (-1.0 + inset, 1.0, "x"),
            VarKind::PhiGrid => (inset, PI - inset, "phi"),
        };
        for (v, what) in [(var_min, "min"), (var_max, "max")] {
            if !(v.is_finite() && v >= lo && v <= hi) {
                return bad(format!("{name} {what} must lie in [{lo}, {hi}], got {v}"));
            }
        }
        for (v, what) in [(r_min, "min"), (r_max, "max")] {
            if !(v.is_finite() && v >= inset && v <= 1.0) {
                return bad(format!("r {what} must lie in [{inset}, 1], got {v}"));
            }
        }
        if var_min > var_max || r_min > r_max {
            return bad("grid minimum exceeds maximum".into());
        }
        Ok(ScanGrid { var_kind, var_min, var_max, var_count, r_min, r_max, r_count, inset })
    }

    /// 40×20 over `x ∈ [−0.999, 1]`, `r ∈ [0.01, 1]`.
    pub fn consistency_default() -> Self {
        Self::new(VarKind::XGrid, -0.999, 1.0, 40, 0.01, 1.0, 20, DEFAULT_INSET).unwrap()
    }

    /// 40×20 over `x ∈ [−0.99, 0.999]`, `r ∈ [0.01, 1]`.
    pub fn monotonicity_default() -> Self {
        Self::new(VarKind::XGrid, -0.99, 0.999, 40, 0.01, 1.0, 20, DEFAULT_INSET).unwrap()
    }

    /// 100×100 over `φ ∈ [δ, π − δ]`, `r ∈ [δ, 1]` with `δ = 1e−3`.
    pub fn inequality_default() -> Self {
        Self::inequality_with_inset(DEFAULT_INSET)
    }

    /// The inequality grid with its angle range pulled in to `[δ, π − δ]`.
    /// The radius range stays `[1e−3, 1]`.
    pub fn inequality_with_inset(delta: f64) -> Self {
        Self::new(
            VarKind::PhiGrid,
            delta,
            PI - delta,
            100,
            DEFAULT_INSET,
            1.0,
            100,
            delta.min(DEFAULT_INSET),
        )
        .unwrap()
    }

    pub fn var_kind(&self) -> VarKind {
        self.var_kind
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn r_count(&self) -> usize {
        self.r_count
    }

    pub fn inset(&self) -> f64 {
        self.inset
    }

    pub fn len(&self) -> usize {
        self.var_count * self.r_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn var_values(&self) -> Vec<f64> {
        linspace(self.var_min, self.var_max, self.var_count)
    }

    pub fn r_values(&self) -> Vec<f64> {
        linspace(self.r_min, self.r_max, self.r_count)
    }

    /// All `(var, r)` pairs in row-major order.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let rs = self.r_values();
        self.var_values().into_iter().flat_map(|v| rs.iter().map(move |&r| (v, r))).collect()
    }

    fn require(&self, kind: VarKind, what: &str) -> Result<()> {
        if self.var_kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidGrid(format!(
                "{what} needs a {kind:?} grid, got {:?}",
                self.var_kind
            )))
        }
    }
}

/// `n` evenly spaced values with both ends hit exactly.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * (i as f64 / (n - 1) as f64) })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Consistency,
    Monotonicity,
    Inequality,
    Identity,
}

impl ReportKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReportKind::Consistency => "consistency",
            ReportKind::Monotonicity => "monotonicity",
            ReportKind::Inequality => "inequality",
            ReportKind::Identity => "identity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub var: f64,
    pub r: f64,
}

/// A failed check at `point`, with the observed quantity and the bound it
/// was held to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub point: GridPoint,
    pub check: String,
    pub observed: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub kind: ReportKind,
    pub points_checked: usize,
    pub violations: Vec<Violation>,
    pub min_margin: f64,
    pub worst_point: GridPoint,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One observation at a grid point.
struct Check {
    label: &'static str,
    /// Value reported through `min_margin` when `tracked`.
    margin: f64,
    observed: f64,
    bound: f64,
    ok: bool,
    tracked: bool,
}

impl Check {
    /// Passes iff `observed < bound`; the margin is the slack left.
    fn within(label: &'static str, observed: f64, bound: f64) -> Self {
        Check {
            label,
            margin: bound - observed,
            observed,
            bound,
            ok: observed < bound,
            tracked: true,
        }
    }

    /// Passes iff `observed > bound`; the margin is `observed` itself.
    fn exceeds(label: &'static str, observed: f64, bound: f64) -> Self {
        Check { label, margin: observed, observed, bound, ok: observed > bound, tracked: true }
    }

    fn untracked(mut self) -> Self {
        self.tracked = false;
        self
    }
}

struct Reducer {
    kind: ReportKind,
    violations: Vec<Violation>,
    min_margin: f64,
    worst_point: Option<GridPoint>,
}

impl Reducer {
    fn new(kind: ReportKind) -> Self {
        Reducer { kind, violations: Vec::new(), min_margin: f64::INFINITY, worst_point: None }
    }

    fn push(&mut self, point: GridPoint, check: &Check) {
        if check.tracked && (self.worst_point.is_none() || check.margin < self.min_margin) {
            self.min_margin = check.margin;
            self.worst_point = Some(point);
        }
        if !check.ok {
            self.violations.push(Violation {
                point,
                check: check.label.to_string(),
                observed: check.observed,
                bound: check.bound,
            });
        }
    }

    fn finish(self, points: &[(f64, f64)], started: Instant) -> Report {
        let first = points
            .first()
            .map_or(GridPoint { var: f64::NAN, r: f64::NAN }, |&(var, r)| GridPoint { var, r });
        Report {
            kind: self.kind,
            points_checked: points.len(),
            violations: self.violations,
            min_margin: self.min_margin,
            worst_point: self.worst_point.unwrap_or(first),
            elapsed: started.elapsed(),
        }
    }
}

/// Runs `check_point` over `points` in parallel and reduces in input order.
fn run_scan<F>(kind: ReportKind, points: &[(f64, f64)], check_point: F) -> Result<Report>
where
    F: Fn(f64, f64) -> Result<Vec<Check>> + Sync,
{
    let started = Instant::now();
    let outcomes: Vec<Result<Vec<Check>>> =
        points.par_iter().map(|&(v, r)| check_point(v, r).map_err(|e| e.at_point(v, r))).collect();
    let mut reducer = Reducer::new(kind);
    for (&(var, r), outcome) in points.iter().zip(outcomes) {
        for check in outcome? {
            reducer.push(GridPoint { var, r }, &check);
        }
    }
    Ok(reducer.finish(points, started))
}

fn agreement(label: &'static str, a: &EvalResult, b: &EvalResult) -> Check {
    let observed = (a.value - b.value).abs();
    Check::within(label, observed, a.error_bound + b.error_bound + AGREEMENT_SLACK)
}

/// Checks that series, quadrature and closed form agree pairwise within their
/// combined bounds plus [`AGREEMENT_SLACK`]. The series route joins only where
/// it accepts the radius.
pub fn consistency_scan(g: &ScanGrid, tol: Tolerance) -> Result<Report> {
    consistency_scan_with(&Routes::standard(), g, tol)
}

pub fn consistency_scan_with(routes: &Routes, g: &ScanGrid, tol: Tolerance) -> Result<Report> {
    g.require(VarKind::XGrid, "consistency scan")?;
    run_scan(ReportKind::Consistency, &g.points(), |x, r| {
        let p = EvalPoint::new(x, r)?;
        let quad = (routes.quadrature)(p, tol)?;
        let closed = (routes.closed_form)(p)?;
        let mut checks = vec![agreement("quadrature vs closed_form", &quad, &closed)];
        match (routes.series)(p, tol) {
            Ok(s) => {
                checks.push(agreement("series vs quadrature", &s, &quad));
                checks.push(agreement("series vs closed_form", &s, &closed));
            }
            Err(Error::UnsupportedParameters(_)) => {}
            Err(e) => return Err(e),
        }
        Ok(checks)
    })
}

/// Checks that `f` increases along `x` on every row of the grid and that
/// `∂f/∂x` is positive at every point.
///
/// Each grid point is compared with the first later point at least
/// [`MIN_FORWARD_STEP`] further along; the difference must exceed the two
/// error bounds. `min_margin` is the smallest such difference.
pub fn monotonicity_scan(g: &ScanGrid, tol: Tolerance) -> Result<Report> {
    monotonicity_scan_with(&Routes::standard(), g, tol)
}

pub fn monotonicity_scan_with(routes: &Routes, g: &ScanGrid, tol: Tolerance) -> Result<Report> {
    g.require(VarKind::XGrid, "monotonicity scan")?;
    if g.var_count < 3 {
        return Err(Error::InvalidGrid(format!(
            "monotonicity scan needs at least 3 x values, got {}",
            g.var_count
        )));
    }
    let started = Instant::now();
    let points = g.points();
    let evals = points
        .par_iter()
        .map(|&(x, r)| {
            let p = EvalPoint::new(x, r).map_err(|e| e.at_point(x, r))?;
            let f = routes.dispatch(p, tol).map_err(|e| e.at_point(x, r))?;
            let d = (routes.derivative)(p, tol).map_err(|e| e.at_point(x, r))?;
            Ok((f, d))
        })
        .collect::<Vec<Result<(EvalResult, EvalResult)>>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;

    let xs = g.var_values();
    let nr = g.r_count;
    let mut reducer = Reducer::new(ReportKind::Monotonicity);
    for (i, &x) in xs.iter().enumerate() {
        let next = (i + 1..xs.len()).find(|&j| xs[j] - x >= MIN_FORWARD_STEP);
        for j_r in 0..nr {
            let here = i * nr + j_r;
            let point = GridPoint { var: x, r: points[here].1 };
            let (f_here, dfdx) = &evals[here];
            if let Some(k) = next {
                let f_next = &evals[k * nr + j_r].0;
                let diff = f_next.value - f_here.value;
                let bound = f_here.error_bound + f_next.error_bound;
                reducer.push(point, &Check::exceeds("forward difference", diff, bound));
            }
            reducer.push(
                point,
                &Check::exceeds("dfdx positive", dfdx.value, dfdx.error_bound).untracked(),
            );
        }
    }
    Ok(reducer.finish(&points, started))
}

/// Checks `f(1, r) − f(cos φ, r) > 0` at every grid point. The margin has
/// to exceed the error bounds of both sides to count.
pub fn inequality_scan(g: &ScanGrid, tol: Tolerance) -> Result<Report> {
    inequality_scan_with(&Routes::standard(), g, tol)
}

pub fn inequality_scan_with(routes: &Routes, g: &ScanGrid, tol: Tolerance) -> Result<Report> {
    g.require(VarKind::PhiGrid, "inequality scan")?;
    run_scan(ReportKind::Inequality, &g.points(), |phi, r| {
        let p = AnglePoint::new(phi, r)?.to_eval_point()?;
        let top = (routes.at_one)(r)?;
        let inner = routes.dispatch(p, tol)?;
        let margin = top.value - inner.value;
        Ok(vec![Check::exceeds("margin", margin, top.error_bound + inner.error_bound)])
    })
}

/// The fixed 15×10 grid used by [`identity_scan`].
pub fn identity_grid() -> ScanGrid {
    ScanGrid::new(VarKind::XGrid, -0.9, 1.0, 15, 0.05, 0.95, 10, DEFAULT_INSET).unwrap()
}

/// Checks the generating-function identity behind the integral form:
///
/// * partial sums of `Σ_{k≥1} (−1)^{k+1} T_k(x) r^k` reach
///   `r(r + x)/(r² + 2xr + 1)` within `r^{N+1}/(1 − r)` for each order in
///   [`IDENTITY_ORDERS`], plus a rounding allowance of `16ε/(1 − r)²`;
/// * `(1 − xz)/(1 − 2xz + z²)` at `z = −r` equals `1 − r(r + x)/(r² + 2xr + 1)`
///   within `tol`.
pub fn identity_scan(tol: Tolerance) -> Result<Report> {
    identity_scan_with(&Routes::standard(), tol)
}

pub fn identity_scan_with(routes: &Routes, tol: Tolerance) -> Result<Report> {
    let g = identity_grid();
    run_scan(ReportKind::Identity, &g.points(), |x, r| {
        let p = EvalPoint::new(x, r)?;
        let lhs = (routes.generating_lhs)(p);
        let rounding = 16.0 * f64::EPSILON / ((1.0 - r) * (1.0 - r));
        let mut checks: Vec<Check> = IDENTITY_ORDERS
            .iter()
            .map(|&n| {
                let residual = (lhs - series::generating_partial_sum(p, n)).abs();
                let bound = r.powf(n as f64 + 1.0) / (1.0 - r) + rounding;
                let label = match n {
                    5 => "partial sum N=5",
                    20 => "partial sum N=20",
                    _ => "partial sum N=80",
                };
                Check::within(label, residual, bound)
            })
            .collect();
        let z = -r;
        let full = (1.0 - x * z) / (1.0 - 2.0 * x * z + z * z);
        let observed = (full - (1.0 - lhs)).abs();
        checks.push(Check::within("constant term", observed, tol.abs()));
        Ok(checks)
    })
}
