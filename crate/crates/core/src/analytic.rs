//! Closed forms of `f(x, r)`.
//!
//! ```text
//! f(1, r) = (log(1 + r) − r + r²/2) / r²
//! f(x, r) = r^{-2} [ r²/2 − xr + (x² − 1/2) log(r² + 2xr + 1)
//!                    + 2xw arctan(wr / (1 + xr)) ],   w = √(1 − x²)
//! ```
//!
//! The bracket cancels down to `O(r³)`, so for `r < SMALL_RADIUS` both
//! functions switch to a power series instead.

use crate::domain::{AnglePoint, EvalPoint, EvalResult, Route, Tolerance};
use crate::error::{Error, Result};
use crate::series;

/// Below this radius the closed forms lose too many digits to cancellation.
pub const SMALL_RADIUS: f64 = 1e-3;

/// Relative floating-point budget, in units of machine epsilon, used for the
/// (non-rigorous) closed-form error bound.
const ROUNDING_ULPS: f64 = 10.0;

/// The three summands of the closed-form bracket, before division by `r²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormParts {
    pub poly_part: f64,
    pub log_part: f64,
    pub atan_part: f64,
    pub w: f64,
}

impl ClosedFormParts {
    pub fn new(p: EvalPoint) -> Self {
        let (x, r) = (p.x(), p.r());
        // 1 − x² and r² + 2xr + 1 in forms that stay accurate near x = −1
        let w2 = ((1.0 - x) * (1.0 + x)).max(0.0);
        let w = w2.sqrt();
        // log(r² + 2xr + 1): log1p near 1, direct log near x = −1
        let y = r * (r + 2.0 * x);
        let log = if y.abs() < 0.5 { y.ln_1p() } else { ((r + x) * (r + x) + w2).ln() };
        ClosedFormParts {
            poly_part: r * r / 2.0 - x * r,
            log_part: (x * x - 0.5) * log,
            atan_part: 2.0 * x * w * (w * r / (1.0 + x * r)).atan(),
            w,
        }
    }

    pub fn sum(&self) -> f64 {
        self.poly_part + self.log_part + self.atan_part
    }

    /// `ROUNDING_ULPS · ε · (|poly| + |log| + |atan|)`, before division by `r²`.
    pub fn rounding_budget(&self) -> f64 {
        ROUNDING_ULPS
            * f64::EPSILON
            * (self.poly_part.abs() + self.log_part.abs() + self.atan_part.abs())
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("r must lie in (0, 1], got {r}")))
    }
}

/// `f(1, r)` with its error budget.
///
/// Small radii use `r/3 − r²/4 + r³/5 − r⁴/6 + r⁵/7`, whose remainder is
/// below `r⁶/8`.
pub fn f_at_one_eval(r: f64) -> Result<EvalResult> {
    check_radius(r)?;
    let (value, error_bound) = if r < SMALL_RADIUS {
        let v = r * (1.0 / 3.0 + r * (-0.25 + r * (0.2 + r * (-1.0 / 6.0 + r / 7.0))));
        (v, r.powi(6) / 8.0 + ROUNDING_ULPS * f64::EPSILON * v.abs())
    } else {
        let l = r.ln_1p();
        let r2 = r * r;
        let v = (l - r + r2 / 2.0) / r2;
        (v, ROUNDING_ULPS * f64::EPSILON * (l.abs() + r + r2 / 2.0) / r2)
    };
    Ok(EvalResult { value, error_bound, route: Route::ClosedForm, work: 0, rigorous: false })
}

/// `f(1, r) = (log(1 + r) − r + r²/2) / r²`.
pub fn f_at_one(r: f64) -> Result<f64> {
    f_at_one_eval(r).map(|e| e.value)
}

/// The plain formula, without the small-radius switch.
pub fn f_at_one_direct(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok((r.ln_1p() - r + r * r / 2.0) / (r * r))
}

/// `f(x, r)` from the closed-form antiderivative.
///
/// `x = 1` goes through [`f_at_one_eval`]; `r < SMALL_RADIUS` goes through the
/// series route at its tightest tolerance and is tagged accordingly.
pub fn f_closed(p: EvalPoint) -> Result<EvalResult> {
    let r = p.r();
    if r < SMALL_RADIUS {
        return series::f_series(p, Tolerance::new(series::TOL_FLOOR)?);
    }
    if p.x() == 1.0 {
        return f_at_one_eval(r);
    }
    Ok(from_parts(&ClosedFormParts::new(p), r))
}

/// Assembles an [`EvalResult`] from (possibly altered) closed-form parts.
pub fn from_parts(parts: &ClosedFormParts, r: f64) -> EvalResult {
    let r2 = r * r;
    EvalResult {
        value: parts.sum() / r2,
        error_bound: parts.rounding_budget() / r2,
        route: Route::ClosedForm,
        work: 0,
        rigorous: false,
    }
}

/// `f(1, r) − f(cos φ, r)`, positive for `φ ∈ (0, π)`.
pub fn margin(a: AnglePoint) -> Result<f64> {
    if a.phi() <= 0.0 {
        return Err(Error::domain(format!("margin needs phi in (0, pi), got {}", a.phi())));
    }
    let at_one = f_at_one(a.r())?;
    let inner = f_closed(a.to_eval_point()?)?;
    Ok(at_one - inner.value)
}
