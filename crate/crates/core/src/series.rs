//! Direct summation of `f(x, r) = Σ_{k≥1} (−1)^{k+1} r^k T_k(x) / (k + 2)`
//! and of its angle form with `cos kφ` in place of `T_k(x)`.
//!
//! Truncation uses `|T_k| ≤ 1`, which gives the tail bound
//! `|R_N| ≤ r^{N+1} / ((N + 3)(1 − r))`. The bound diverges as `r → 1`, so
//! `r > 1 − 1e−9` is refused here and left to the other routes.

use crate::domain::{AnglePoint, EvalPoint, EvalResult, Route, Tolerance};
use crate::error::{Error, Result};

/// Largest radius the series route accepts.
pub const MAX_RADIUS: f64 = 1.0 - 1e-9;
/// Tolerances are clamped into `[TOL_FLOOR, TOL_CEIL]`.
pub const TOL_FLOOR: f64 = 1e-15;
pub const TOL_CEIL: f64 = 1e-2;
/// Most terms a single evaluation may sum.
pub const MAX_TERMS: u64 = 10_000_000;

/// Bound on the tail `Σ_{k>n} r^k |T_k(x)| / (k + 2)`.
pub fn tail_bound(n: u64, r: f64) -> f64 {
    r.powf(n as f64 + 1.0) / ((n as f64 + 3.0) * (1.0 - r))
}

fn check_radius(r: f64) -> Result<()> {
    if r > MAX_RADIUS {
        return Err(Error::UnsupportedParameters(format!(
            "series route needs r <= 1 - 1e-9 (no uniform tail bound at r = 1), got r = {r}"
        )));
    }
    Ok(())
}

/// Sums `Σ (−1)^{k+1} r^k c_k / (k + 2)` in ascending `k` until the tail bound
/// meets `tol`. `next_c` yields `c_1, c_2, …` with `|c_k| ≤ 1`.
fn sum_to_tolerance(
    r: f64,
    tol: Tolerance,
    mut next_c: impl FnMut() -> f64,
) -> Result<(f64, f64, u64)> {
    check_radius(r)?;
    let tol = tol.clamped(TOL_FLOOR, TOL_CEIL).abs();
    if tail_bound(MAX_TERMS, r) > tol {
        return Err(Error::ToleranceUnreachable(format!(
            "series at r = {r} needs more than {MAX_TERMS} terms for tolerance {tol:e}"
        )));
    }
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut sign = 1.0;
    let mut k: u64 = 0;
    loop {
        k += 1;
        power *= r;
        sum += sign * power * next_c() / (k as f64 + 2.0);
        sign = -sign;
        let bound = tail_bound(k, r);
        if bound <= tol {
            return Ok((sum, bound, k));
        }
    }
}

/// Iterator over `T_1(x), T_2(x), …` by the three-term recurrence.
fn chebyshev_values(x: f64) -> impl FnMut() -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0);
    let mut first = true;
    move || {
        if first {
            first = false;
            cur = x;
        } else {
            let next = 2.0 * x * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// `f(x, r)` by truncated summation with a rigorous tail bound.
pub fn f_series(p: EvalPoint, tol: Tolerance) -> Result<EvalResult> {
    let (value, bound, n) = sum_to_tolerance(p.r(), tol, chebyshev_values(p.x()))?;
    Ok(EvalResult { value, error_bound: bound, route: Route::Series, work: n, rigorous: true })
}

/// `Σ (−1)^{k+1} r^k cos(kφ) / (k + 2)`, the same series written in the angle.
pub fn fourier_series(a: AnglePoint, tol: Tolerance) -> Result<EvalResult> {
    let phi = a.phi();
    let mut k = 0u64;
    let cosines = move || {
        k += 1;
        (k as f64 * phi).cos()
    };
    let (value, bound, n) = sum_to_tolerance(a.r(), tol, cosines)?;
    Ok(EvalResult { value, error_bound: bound, route: Route::Series, work: n, rigorous: true })
}

/// Partial sum `Σ_{k=1}^{n} (−1)^{k+1} r^k T_k(x) / (k + 2)`.
pub fn f_partial_sum(p: EvalPoint, n: u64) -> f64 {
    let mut t = chebyshev_values(p.x());
    let (mut sum, mut power, mut sign) = (0.0, 1.0, 1.0);
    for k in 1..=n {
        power *= p.r();
        sum += sign * power * t() / (k as f64 + 2.0);
        sign = -sign;
    }
    sum
}

/// `r(r + x) / (r² + 2xr + 1)`, the closed form of `Σ_{k≥1} (−1)^{k+1} T_k(x) r^k`.
pub fn generating_lhs(p: EvalPoint) -> f64 {
    let (x, r) = (p.x(), p.r());
    // r² + 2xr + 1 = (r + x)² + (1 − x)(1 + x) > 0 for x > −1
    let denom = (r + x) * (r + x) + (1.0 - x) * (1.0 + x);
    r * (r + x) / denom
}

/// Partial sum `Σ_{k=1}^{n} (−1)^{k+1} T_k(x) r^k`.
pub fn generating_partial_sum(p: EvalPoint, n: u64) -> f64 {
    let mut t = chebyshev_values(p.x());
    let (mut sum, mut power, mut sign) = (0.0, 1.0, 1.0);
    for _ in 1..=n {
        power *= p.r();
        sum += sign * power * t();
        sign = -sign;
    }
    sum
}
