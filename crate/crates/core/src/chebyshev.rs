//! Chebyshev polynomials of the first kind.
//!
//! `cheb_t` is the production path (three-term recurrence). `cheb_t_trig`
//! evaluates `cos(k·arccos x)` and exists only to cross-check it.

use crate::error::{Error, Result};

/// Largest degree accepted by [`cheb_t`] and [`cheb_t_trig`].
pub const MAX_DEGREE: u64 = 1_000_000;

/// Coefficients `c_0..c_N` of a sum `Σ c_k T_k(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientList(Vec<f64>);

impl CoefficientList {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("coefficient list must not be empty"));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::domain(format!("coefficient c_{i} is not finite")));
        }
        Ok(CoefficientList(coeffs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Degree `N` of the highest term.
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    /// `Σ |c_k|`, the scale of the rounding error of any evaluation.
    pub fn abs_sum(&self) -> f64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

fn check_args(k: u64, x: f64) -> Result<()> {
    if k > MAX_DEGREE {
        return Err(Error::domain(format!("degree k must be at most {MAX_DEGREE}, got {k}")));
    }
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::domain(format!("x must lie in [-1, 1], got {x}")));
    }
    Ok(())
}

/// `T_k(x)` by the ascending recurrence `T_{k+1} = 2x T_k − T_{k−1}`.
pub fn cheb_t(k: u64, x: f64) -> Result<f64> {
    check_args(k, x)?;
    if k == 0 {
        return Ok(1.0);
    }
    let two_x = 2.0 * x;
    let (mut prev, mut cur) = (1.0, x);
    for _ in 1..k {
        let next = two_x * cur - prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `T_k(x) = cos(k·arccos x)`. Test oracle for [`cheb_t`]; loses accuracy
/// near `x = ±1` and is not used by any evaluation route.
pub fn cheb_t_trig(k: u64, x: f64) -> Result<f64> {
    check_args(k, x)?;
    Ok((k as f64 * x.acos()).cos())
}

/// `Σ_{k=0}^{N} c_k T_k(x)` by the Clenshaw backward recurrence.
pub fn clenshaw_sum(c: &CoefficientList, x: f64) -> Result<f64> {
    if x.is_nan() || x.abs() > 1.0 {
        return Err(Error::domain(format!("x must lie in [-1, 1], got {x}")));
    }
    let coeffs = c.as_slice();
    let two_x = 2.0 * x;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &ck in coeffs[1..].iter().rev() {
        let b0 = two_x * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    Ok(x * b1 - b2 + coeffs[0])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| -1.0 + 2.0 * i as f64 / (n - 1) as f64)
    }

    #[test]
    fn small_degree_values() {
        assert_eq!(cheb_t(0, 0.7).unwrap(), 1.0);
        assert_eq!(cheb_t(3, 0.5).unwrap(), -1.0);
        assert!((cheb_t(5, 0.3).unwrap() - 0.99888).abs() < 1e-15);
        assert_eq!(cheb_t_trig(2, 0.0).unwrap(), -1.0);
        assert_eq!(cheb_t_trig(4, 1.0).unwrap(), 1.0);
        assert!((cheb_t_trig(5, 0.3).unwrap() - 0.99888).abs() < 1e-12);
    }

    #[test]
    fn endpoints_are_exact() {
        for k in [0, 1, 2, 7, 100, 10_000, MAX_DEGREE] {
            assert_eq!(cheb_t(k, 1.0).unwrap(), 1.0);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(cheb_t(k, -1.0).unwrap(), sign);
        }
    }

    #[test]
    fn recurrence_matches_trig_form() {
        for k in 0..=200u64 {
            for x in grid(1001) {
                let rec = cheb_t(k, x).unwrap();
                let trig = cheb_t_trig(k, x).unwrap();
                assert!((rec - trig).abs() <= 1e-11, "k={k} x={x}: {rec} vs {trig}");
                assert!(rec.abs() <= 1.0 + 1e-12, "k={k} x={x}: |T| = {}", rec.abs());
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(cheb_t(3, 1.0 + 1e-12).is_err());
        assert!(cheb_t(MAX_DEGREE + 1, 0.5).is_err());
        assert!(cheb_t_trig(2, -1.5).is_err());
        assert!(cheb_t(2, f64::NAN).is_err());
        let c = CoefficientList::new(vec![1.0]).unwrap();
        assert!(clenshaw_sum(&c, 2.0).is_err());
        assert!(CoefficientList::new(vec![]).is_err());
        assert!(CoefficientList::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn clenshaw_small_cases() {
        let c = CoefficientList::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert_eq!(clenshaw_sum(&c, 0.5).unwrap(), 1.0);
        let single = CoefficientList::new(vec![-2.5]).unwrap();
        for x in [-1.0, 0.0, 0.3, 1.0] {
            assert_eq!(clenshaw_sum(&single, x).unwrap(), -2.5);
        }
    }

    fn naive(c: &CoefficientList, x: f64) -> f64 {
        c.as_slice().iter().enumerate().map(|(k, ck)| ck * cheb_t_trig(k as u64, x).unwrap()).sum()
    }

    #[test]
    fn clenshaw_on_series_coefficients() {
        // c_0 = 0, c_k = (−1)^{k+1} r^k / (k + 2)
        let r: f64 = 0.5;
        let coeffs: Vec<f64> = (0..=30)
            .map(|k| {
                if k == 0 {
                    0.0
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    sign * r.powi(k) / (k as f64 + 2.0)
                }
            })
            .collect();
        let c = CoefficientList::new(coeffs).unwrap();
        let x = 0.2;
        assert!((clenshaw_sum(&c, x).unwrap() - naive(&c, x)).abs() <= 1e-13);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn clenshaw_matches_naive(
                coeffs in prop::collection::vec(-10.0f64..10.0, 1..=101),
                x in -1.0f64..=1.0,
            ) {
                let c = CoefficientList::new(coeffs).unwrap();
                let naive: f64 = c.as_slice().iter().enumerate()
                    .map(|(k, ck)| ck * cheb_t(k as u64, x).unwrap())
                    .sum();
                let got = clenshaw_sum(&c, x).unwrap();
                prop_assert!((got - naive).abs() <= 1e-13 * c.abs_sum(),
                    "N={} x={x}: {got} vs {naive}", c.degree());
            }
        }
    }
}
