//! Evaluation and verification of
//!
//! ```text
//! f(x, r) = Σ_{k≥1} (−1)^{k+1} r^k T_k(x) / (k + 2),   x ∈ (−1, 1], r ∈ (0, 1]
//! ```
//!
//! by three independent routes (truncated series, adaptive quadrature of an
//! integral representation, and a closed-form antiderivative), together with
//! scanners that check the routes against one another and check that
//! `f(cos φ, r)` is largest at `φ = 0`.

pub mod analytic;
pub mod chebyshev;
pub mod cli;
pub mod domain;
pub mod error;
pub mod quadrature;
pub mod series;
pub mod verify;

pub use domain::{AnglePoint, EvalPoint, EvalResult, Route, Tolerance};
pub use error::{Error, Result};
pub use verify::{Report, ReportKind, ScanGrid, VarKind};
