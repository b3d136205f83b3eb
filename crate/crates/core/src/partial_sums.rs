//! Lower bounds on `Re(f / S_n)` and `Re(S_n / f)` for functions whose
//! weighted coefficient sum `sum_{k>=1} d_k |a_k|` is at most 1.

use num_complex::Complex64;
use serde::Serialize;

use crate::classes::{
    check_alpha_nonneg, class_weight, scan_points, CoeffCheck, MARGIN_TOL, ZERO_TOL,
};
use crate::error::{invalid, Error, Result};
use crate::harness::report::CheckStatus;
use crate::series::{DiscGrid, LaurentFunction};

/// `d_k = 1 + alpha (k + 1)`.
pub fn dk(alpha: f64, k: usize) -> Result<f64> {
    check_alpha_nonneg(alpha)?;
    if k < 1 {
        return Err(invalid("k", "expected k >= 1"));
    }
    Ok(class_weight(alpha, k))
}

/// `sum_{k>=1} d_k |a_k| <= 1`; `a_0` does not enter.
pub fn hypothesis11(f: &LaurentFunction, alpha: f64) -> Result<CoeffCheck> {
    check_alpha_nonneg(alpha)?;
    let sum = f
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| class_weight(alpha, k) * a.norm())
        .sum();
    Ok(CoeffCheck::from_sum(sum))
}

/// `1/z - z^n / d_n`, which makes both ratio bounds sharp.
pub fn sharp_function(alpha: f64, n: usize) -> Result<LaurentFunction> {
    let d = dk(alpha, n)?;
    LaurentFunction::monomial(n, Complex64::new(-1.0 / d, 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioBoundReport {
    pub n: usize,
    pub d_n: f64,
    /// `1 - 1/d_n`.
    pub bound_f_over_s: f64,
    /// `d_n / (1 + d_n)`.
    pub bound_s_over_f: f64,
    pub observed_min_f_over_s: f64,
    pub observed_min_s_over_f: f64,
    pub witness_f_over_s: Option<[f64; 2]>,
    pub witness_s_over_f: Option<[f64; 2]>,
    pub hypothesis_holds: bool,
    pub hypothesis_margin: f64,
    pub samples_checked: usize,
    pub degenerate: usize,
}

impl RatioBoundReport {
    /// Smaller of the two observed-minus-bound gaps.
    pub fn margin(&self) -> f64 {
        (self.observed_min_f_over_s - self.bound_f_over_s)
            .min(self.observed_min_s_over_f - self.bound_s_over_f)
    }

    /// A violated bound while the hypothesis holds is a hard failure.
    pub fn status(&self) -> CheckStatus {
        if !self.hypothesis_holds {
            CheckStatus::Inapplicable
        } else if self.margin() < -MARGIN_TOL {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        }
    }
}

pub fn check_ratio_bounds(
    f: &LaurentFunction,
    alpha: f64,
    n: usize,
    grid: &DiscGrid,
) -> Result<RatioBoundReport> {
    check_ratio_bounds_at(f, alpha, n, &grid.points())
}

pub fn check_ratio_bounds_at(
    f: &LaurentFunction,
    alpha: f64,
    n: usize,
    points: &[Complex64],
) -> Result<RatioBoundReport> {
    let d = dk(alpha, n)?;
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let hyp = hypothesis11(f, alpha)?;
    let s = f.partial_sum(n)?;
    let ratio = |z: Complex64| {
        let gf = f.eval_g(z);
        let gs = s.eval_g(z);
        (gf.norm() >= ZERO_TOL && gs.norm() >= ZERO_TOL).then(|| gf / gs)
    };
    let f_over_s = scan_points(points, |z| ratio(z).map(|q| q.re));
    let s_over_f = scan_points(points, |z| ratio(z).map(|q| q.inv().re));
    if f_over_s.checked == 0 {
        return Err(Error::InvalidGrid(
            "every grid point is degenerate for the partial-sum ratio".into(),
        ));
    }
    Ok(RatioBoundReport {
        n,
        d_n: d,
        bound_f_over_s: 1.0 - 1.0 / d,
        bound_s_over_f: d / (1.0 + d),
        observed_min_f_over_s: f_over_s.min_margin,
        observed_min_s_over_f: s_over_f.min_margin,
        witness_f_over_s: f_over_s.argmin.map(|w| [w.re, w.im]),
        witness_s_over_f: s_over_f.argmin.map(|w| [w.re, w.im]),
        hypothesis_holds: hyp.holds,
        hypothesis_margin: hyp.margin,
        samples_checked: f_over_s.checked,
        degenerate: f_over_s.degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dk_values() {
        assert_eq!(dk(0.0, 5).unwrap(), 1.0);
        assert_eq!(dk(1.0, 1).unwrap(), 3.0);
        assert!(dk(1.0, 0).is_err());
        for k in 1..64 {
            assert!(dk(0.2, k + 1).unwrap() > dk(0.2, k).unwrap());
            assert!(dk(0.2, k).unwrap() > 1.0);
        }
    }

    #[test]
    fn hypothesis_examples() {
        assert_eq!(
            hypothesis11(&LaurentFunction::pole(), 1.0).unwrap().margin,
            1.0
        );
        for n in 1..6 {
            let c = hypothesis11(&sharp_function(1.5, n).unwrap(), 1.5).unwrap();
            assert!(c.holds && c.margin.abs() < 1e-15);
        }
        let alpha = 0.5;
        let f = LaurentFunction::from_real(&[0.0, 2.0 / (1.0 + 2.0 * alpha)]).unwrap();
        let c = hypothesis11(&f, alpha).unwrap();
        assert!(!c.holds);
        assert!((c.margin + 1.0).abs() < 1e-15);
        let grid = DiscGrid::new(vec![0.5, 0.9], 32).unwrap();
        let r = check_ratio_bounds(&f, alpha, 1, &grid).unwrap();
        assert_eq!(r.status(), CheckStatus::Inapplicable);
        // a_0 is ignored
        let g = LaurentFunction::from_real(&[5.0]).unwrap();
        assert!(hypothesis11(&g, 1.0).unwrap().holds);
    }

    #[test]
    fn pole_ratios_are_one() {
        let grid = DiscGrid::new(vec![0.5, 0.9], 32).unwrap();
        for n in 1..4 {
            let r = check_ratio_bounds(&LaurentFunction::pole(), 1.0, n, &grid).unwrap();
            assert_eq!(r.observed_min_f_over_s, 1.0);
            assert_eq!(r.observed_min_s_over_f, 1.0);
            assert_eq!(r.status(), CheckStatus::Pass);
        }
    }

    #[test]
    fn sharp_function_ratio_near_one() {
        let (alpha, n) = (1.0, 2);
        let f = sharp_function(alpha, n).unwrap();
        let s = f.partial_sum(n).unwrap();
        assert_eq!(s, LaurentFunction::pole());
        let z = Complex64::new(1.0 - 1e-4, 0.0);
        let q = f.eval_g(z) / s.eval_g(z);
        let expected = 1.0 - (1.0f64 - 1e-4).powi(3) / 4.0;
        assert!((q.re - expected).abs() < 1e-15);
        assert!((q.re - 0.75).abs() < 1e-3);
    }

    #[test]
    fn empty_plan_rejected() {
        assert!(matches!(
            check_ratio_bounds_at(&LaurentFunction::pole(), 1.0, 1, &[]),
            Err(Error::EmptyGrid)
        ));
    }
}
