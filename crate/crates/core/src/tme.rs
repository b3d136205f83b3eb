//! The negative-coefficient subclass `f = 1/z - sum_{n>=1} a_n z^n`,
//! `a_n >= 0`, where the coefficient test is an exact characterization.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::classes::{
    check_alpha_nonneg, check_me_at, class_weight, scan_points, CoeffCheck, MembershipVerdict,
    ROUNDING_SLACK,
};
use crate::error::{invalid, Error, Result};
use crate::series::{real_axis_refinement, DiscGrid, LaurentFunction};

/// Weight-vector sums must be within this of 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// `magnitudes[i]` is `a_{i+1}`, the modulus of the `-a_{i+1} z^{i+1}` term.
#[derive(Clone, Debug, PartialEq)]
pub struct TmeFunction {
    magnitudes: Vec<f64>,
}

impl TmeFunction {
    pub fn new(magnitudes: Vec<f64>) -> Result<Self> {
        if let Some((i, m)) = magnitudes
            .iter()
            .enumerate()
            .find(|(_, m)| !(m.is_finite() && **m >= 0.0))
        {
            return Err(invalid(
                "magnitudes",
                format!("a_{} = {m} must be finite and nonnegative", i + 1),
            ));
        }
        Ok(Self { magnitudes })
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// `a_n` for `n >= 1`, zero past the truncation.
    pub fn magnitude(&self, n: usize) -> f64 {
        assert!(n >= 1, "TME tails start at n = 1");
        self.magnitudes.get(n - 1).copied().unwrap_or(0.0)
    }

    pub fn to_laurent(&self) -> LaurentFunction {
        let coeffs = std::iter::once(Complex64::new(0.0, 0.0))
            .chain(self.magnitudes.iter().map(|&m| Complex64::new(-m, 0.0)))
            .collect();
        LaurentFunction::from_coeffs(coeffs).expect("finite magnitudes")
    }

    /// Exact inverse of [`TmeFunction::to_laurent`]; rejects series not of
    /// the form `1/z - sum a_n z^n` with real `a_n >= 0`.
    pub fn from_laurent(f: &LaurentFunction) -> Result<Self> {
        let coeffs = f.coeffs();
        if let Some(a0) = coeffs.first() {
            if *a0 != Complex64::new(0.0, 0.0) {
                return Err(invalid("series", "TME functions have no constant term"));
            }
        }
        let mut magnitudes = Vec::with_capacity(coeffs.len().saturating_sub(1));
        for (n, c) in coeffs.iter().enumerate().skip(1) {
            if c.im != 0.0 || c.re > 0.0 {
                return Err(invalid(
                    "series",
                    format!("coefficient {n} must be real and nonpositive"),
                ));
            }
            magnitudes.push(-c.re);
        }
        Self::new(magnitudes)
    }

    pub fn to_json(&self) -> Value {
        json!({ "magnitudes": self.magnitudes })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let list = value
            .get("magnitudes")
            .ok_or_else(|| Error::Schema("missing key \"magnitudes\"".into()))?
            .as_array()
            .ok_or_else(|| Error::Schema("\"magnitudes\" must be an array".into()))?;
        let magnitudes = list
            .iter()
            .enumerate()
            .map(|(i, v)| match v {
                Value::Null => Ok(f64::NAN),
                v => v
                    .as_f64()
                    .ok_or_else(|| Error::Schema(format!("magnitudes[{i}] is not a number"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(magnitudes)
    }

    /// Reads either the TME form or the general series form.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        if value.get("magnitudes").is_some() {
            Self::from_json(&value)
        } else {
            Self::from_laurent(&LaurentFunction::from_json(&value)?)
        }
    }
}

/// `sum_{n>=1} (1 + alpha (n+1)) a_n <= 1`, necessary and sufficient.
pub fn check_tme_exact(f: &TmeFunction, alpha: f64) -> Result<CoeffCheck> {
    check_alpha_nonneg(alpha)?;
    let sum = f
        .magnitudes
        .iter()
        .enumerate()
        .map(|(i, a)| class_weight(alpha, i + 1) * a)
        .sum();
    Ok(CoeffCheck::from_sum(sum))
}

/// Extreme point `1/z - z^n / (1 + alpha (n+1))`; `n = 0` gives `1/z`.
pub fn extreme_point(alpha: f64, n: usize) -> TmeFunction {
    let mut magnitudes = vec![0.0; n];
    if n >= 1 {
        magnitudes[n - 1] = 1.0 / class_weight(alpha, n);
    }
    TmeFunction { magnitudes }
}

/// Convex weights `lambda_0..lambda_N` over the extreme points, with
/// `lambda_0` on `1/z`.
pub fn decompose(f: &TmeFunction, alpha: f64) -> Result<Vec<f64>> {
    let check = check_tme_exact(f, alpha)?;
    if !check.holds {
        return Err(invalid(
            "series",
            format!("not a member (coefficient margin {})", check.margin),
        ));
    }
    let mut weights = Vec::with_capacity(f.magnitudes.len() + 1);
    weights.push(0.0);
    weights.extend(
        f.magnitudes
            .iter()
            .enumerate()
            .map(|(i, a)| class_weight(alpha, i + 1) * a),
    );
    let tail: f64 = weights[1..].iter().sum();
    // a boundary member may overshoot by a rounding error
    weights[0] = (1.0 - tail).max(0.0);
    Ok(weights)
}

/// `sum_k lambda_k f_k`, the inverse of [`decompose`].
pub fn recompose(weights: &[f64], alpha: f64) -> Result<TmeFunction> {
    check_alpha_nonneg(alpha)?;
    if weights.is_empty() {
        return Err(invalid("weights", "need at least the pole weight"));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(invalid(
            "weights",
            format!("weight {w} is negative or non-finite"),
        ));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(invalid("weights", format!("weights sum to {total}, not 1")));
    }
    let magnitudes = weights[1..]
        .iter()
        .enumerate()
        .map(|(i, w)| w / class_weight(alpha, i + 1))
        .collect();
    TmeFunction::new(magnitudes)
}

/// `(1/r - r/(1 + 2 alpha), 1/r + r/(1 + 2 alpha))` bounding `|f(z)|` on `|z| = r`.
pub fn distortion_bounds(alpha: f64, r: f64) -> Result<(f64, f64)> {
    check_alpha_nonneg(alpha)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(invalid("r", format!("expected 0 < r < 1, got {r}")));
    }
    let s = r / (1.0 + 2.0 * alpha);
    Ok((1.0 / r - s, 1.0 / r + s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistortionVerdict {
    /// Combined verdict on `min(lower slack, upper slack)`.
    pub verdict: MembershipVerdict,
    pub lower_slack: f64,
    pub lower_witness: Option<Complex64>,
    pub upper_slack: f64,
    pub upper_witness: Option<Complex64>,
}

pub fn check_distortion(f: &TmeFunction, alpha: f64, grid: &DiscGrid) -> Result<DistortionVerdict> {
    check_distortion_at(f, alpha, &grid.points())
}

pub fn check_distortion_at(
    f: &TmeFunction,
    alpha: f64,
    points: &[Complex64],
) -> Result<DistortionVerdict> {
    let check = check_tme_exact(f, alpha)?;
    if !check.holds {
        return Err(invalid("series", "distortion bounds apply to members only"));
    }
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let series = f.to_laurent();
    let inv = 1.0 / (1.0 + 2.0 * alpha);
    let modulus = |z: Complex64| {
        let r = z.norm();
        (series.eval_g(z).norm() / r, r)
    };
    let lower = scan_points(points, |z| {
        let (m, r) = modulus(z);
        Some(m - (1.0 / r - inv * r))
    });
    let upper = scan_points(points, |z| {
        let (m, r) = modulus(z);
        Some((1.0 / r + inv * r) - m)
    });
    let worst = if lower.min_margin <= upper.min_margin {
        lower
    } else {
        upper
    };
    Ok(DistortionVerdict {
        verdict: worst.verdict(),
        lower_slack: lower.min_margin,
        lower_witness: lower.argmin,
        upper_slack: upper.min_margin,
        upper_witness: upper.argmin,
    })
}

/// ME(alpha) scan along `z = 1 - 10^-k`, where non-members fail first.
pub fn refute_on_real_axis(f: &TmeFunction, alpha: f64) -> Result<MembershipVerdict> {
    check_me_at(&f.to_laurent(), alpha, &real_axis_refinement())
}

/// True when a TME coefficient sum sits within rounding of the boundary.
pub fn on_boundary(check: CoeffCheck) -> bool {
    check.margin.abs() <= ROUNDING_SLACK
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Status;

    #[test]
    fn laurent_conversion_is_exact() {
        let f = TmeFunction::new(vec![0.25, 0.0, 1.0 / 3.0]).unwrap();
        let l = f.to_laurent();
        assert_eq!(l.coeff(0), Complex64::new(0.0, 0.0));
        assert_eq!(l.coeff(3).re, -1.0 / 3.0);
        assert_eq!(TmeFunction::from_laurent(&l).unwrap(), f);
        assert!(TmeFunction::from_laurent(&LaurentFunction::from_real(&[0.1]).unwrap()).is_err());
        assert!(
            TmeFunction::from_laurent(&LaurentFunction::from_real(&[0.0, 0.1]).unwrap()).is_err()
        );
        assert!(TmeFunction::new(vec![-0.1]).is_err());
    }

    #[test]
    fn pole_is_interior() {
        let f = TmeFunction::new(vec![]).unwrap();
        let c = check_tme_exact(&f, 2.0).unwrap();
        assert!(c.holds);
        assert_eq!(c.margin, 1.0);
        assert_eq!(decompose(&f, 2.0).unwrap(), vec![1.0]);
        assert_eq!(recompose(&[1.0], 2.0).unwrap(), f);
    }

    #[test]
    fn extreme_points_sit_on_boundary() {
        for &alpha in &[0.0, 0.5, 1.0, 2.0, 7.0] {
            for n in 1..12 {
                let f = extreme_point(alpha, n);
                let c = check_tme_exact(&f, alpha).unwrap();
                assert!(
                    c.holds && on_boundary(c),
                    "alpha {alpha} n {n}: {}",
                    c.margin
                );
                let w = decompose(&f, alpha).unwrap();
                assert!((w[n] - 1.0).abs() < 1e-15);
                assert!(w[0].abs() < 1e-15);
            }
        }
    }

    #[test]
    fn half_half_combination() {
        let f = recompose(&[0.0, 0.5, 0.5], 1.0).unwrap();
        assert!((f.magnitude(1) - 1.0 / 6.0).abs() < 1e-16);
        assert!((f.magnitude(2) - 1.0 / 8.0).abs() < 1e-16);
        let c = check_tme_exact(&f, 1.0).unwrap();
        assert!(c.holds && on_boundary(c));
    }

    #[test]
    fn recompose_rejects_bad_weights() {
        assert!(recompose(&[0.5, 0.4], 1.0).is_err());
        assert!(recompose(&[1.2, -0.2], 1.0).is_err());
        assert!(recompose(&[], 1.0).is_err());
    }

    #[test]
    fn scaled_sharp_function_is_refuted() {
        for &alpha in &[0.5, 2.0] {
            for n in 1..6 {
                let sharp = extreme_point(alpha, n);
                let bumped =
                    TmeFunction::new(sharp.magnitudes().iter().map(|m| m * 1.01).collect())
                        .unwrap();
                assert!(!check_tme_exact(&bumped, alpha).unwrap().holds);
                assert!(decompose(&bumped, alpha).is_err());
                let v = refute_on_real_axis(&bumped, alpha).unwrap();
                assert_eq!(v.status, Status::NonMember);
                let w = v.witness.unwrap();
                assert_eq!(w.im, 0.0);
                assert!(w.re > 0.9);
            }
        }
    }

    #[test]
    fn distortion_values() {
        assert_eq!(distortion_bounds(0.0, 0.5).unwrap(), (1.5, 2.5));
        assert!(distortion_bounds(0.0, 1.0).is_err());
        assert!(distortion_bounds(0.0, 0.0).is_err());
    }

    #[test]
    fn equality_function_attains_both_bounds() {
        let alpha = 0.75;
        let f = extreme_point(alpha, 1).to_laurent();
        for &r in &[0.3, 0.6, 0.9] {
            let (lo, hi) = distortion_bounds(alpha, r).unwrap();
            let at_r = f.eval(Complex64::new(r, 0.0)).norm();
            let at_ir = f.eval(Complex64::new(0.0, r)).norm();
            assert!((at_r - lo).abs() < 1e-12);
            assert!((at_ir - hi).abs() < 1e-12);
        }
    }

    #[test]
    fn pole_distortion_is_interior() {
        let grid = DiscGrid::new(vec![0.2, 0.7], 32).unwrap();
        let v = check_distortion(&TmeFunction::new(vec![]).unwrap(), 1.0, &grid).unwrap();
        assert_eq!(v.verdict.status, Status::SampledMember);
        assert!(v.lower_slack > 0.0 && v.upper_slack > 0.0);
    }

    #[test]
    fn json_forms() {
        let f = TmeFunction::new(vec![0.1, 0.0, 0.05]).unwrap();
        assert_eq!(TmeFunction::from_json(&f.to_json()).unwrap(), f);
        assert!(TmeFunction::from_json(&json!({"magnitudes": [0.1, null]})).is_err());
        assert!(TmeFunction::from_json(&json!({"mags": []})).is_err());
    }
}
