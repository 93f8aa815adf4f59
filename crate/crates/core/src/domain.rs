//! Validated parameter types shared by every evaluation route.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Requested absolute accuracy.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(abs: f64) -> Result<Self> {
        if abs.is_finite() && abs > 0.0 {
            Ok(Tolerance(abs))
        } else {
            Err(Error::domain(format!("tolerance must be finite and > 0, got {abs}")))
        }
    }

    pub fn abs(self) -> f64 {
        self.0
    }

    /// Same tolerance scaled by a positive factor.
    pub fn scaled(self, factor: f64) -> Self {
        Tolerance(self.0 * factor)
    }

    pub(crate) fn clamped(self, lo: f64, hi: f64) -> Self {
        Tolerance(self.0.clamp(lo, hi))
    }
}

/// A point `(x, r)` with `x ∈ (−1, 1]` and `r ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPoint {
    x: f64,
    r: f64,
}

impl EvalPoint {
    pub fn new(x: f64, r: f64) -> Result<Self> {
        check_radius(r)?;
        if !(x.is_finite() && x > -1.0 && x <= 1.0) {
            return Err(Error::domain(format!("x must lie in (-1, 1], got {x}")));
        }
        Ok(EvalPoint { x, r })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn r(&self) -> f64 {
        self.r
    }
}

/// A point `(φ, r)` with `φ ∈ [0, π)` and `r ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePoint {
    phi: f64,
    r: f64,
}

impl AnglePoint {
    pub fn new(phi: f64, r: f64) -> Result<Self> {
        check_radius(r)?;
        if !(0.0..std::f64::consts::PI).contains(&phi) {
            return Err(Error::domain(format!("phi must lie in [0, pi), got {phi}")));
        }
        Ok(AnglePoint { phi, r })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The matching `(cos φ, r)` point.
    pub fn to_eval_point(self) -> Result<EvalPoint> {
        EvalPoint::new(self.phi.cos(), self.r)
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("r must lie in (0, 1], got {r}")))
    }
}

/// Which evaluation path produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Series,
    Quadrature,
    ClosedForm,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Series => "series",
            Route::Quadrature => "quadrature",
            Route::ClosedForm => "closed_form",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A value together with its reported error bound and the work spent.
///
/// `work` counts series terms or quadrature panels depending on `route`.
/// For the closed form the bound is a floating-point budget rather than a
/// proven bound; `rigorous` is false in that case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    pub error_bound: f64,
    pub route: Route,
    pub work: u64,
    pub rigorous: bool,
}
