//! Membership functionals for ME(alpha), MF(alpha) and the meromorphic
//! starlike class, sampled over a [`DiscGrid`], together with the
//! coefficient criteria that certify membership outright.
//!
//! With `g = z f`, the defining conditions become
//!
//! | class      | margin at `z`                          |
//! |------------|----------------------------------------|
//! | ME(alpha)  | `Re g - alpha |z g'|`                  |
//! | MF(alpha)  | `(1 - alpha) - |z g' / g|`             |
//! | starlike   | `(1 - alpha) - Re(z g' / g)`           |
//!
//! A class holds when the margin is positive on the whole punctured disc.
//! Sampling can only refute: a negative margin at a grid point is a proof of
//! non-membership, while positive margins everywhere are evidence.

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::series::{DiscGrid, LaurentFunction};

/// Strict inequalities are decided outside `(-MARGIN_TOL, MARGIN_TOL)`.
pub const MARGIN_TOL: f64 = 1e-9;
/// `|g(z)|` below this makes quotient functionals undefined at `z`.
pub const ZERO_TOL: f64 = 1e-12;
/// Floating-point allowance when comparing a coefficient sum against 1.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// Coefficient weight `1 + alpha (k + 1)` shared by the ME sufficiency test,
/// the TME characterization and the partial-sum hypothesis.
pub fn class_weight(alpha: f64, k: usize) -> f64 {
    1.0 + alpha * (k as f64 + 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Me,
    Mf,
    Starlike,
    Tme,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Me => "me",
            Family::Mf => "mf",
            Family::Starlike => "starlike",
            Family::Tme => "tme",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassSpec {
    pub family: Family,
    pub alpha: f64,
}

impl ClassSpec {
    pub fn new(family: Family, alpha: f64) -> Result<Self> {
        match family {
            Family::Me | Family::Tme => check_alpha_nonneg(alpha)?,
            Family::Mf | Family::Starlike => check_alpha_unit(alpha)?,
        }
        Ok(Self { family, alpha })
    }
}

pub(crate) fn check_alpha_nonneg(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(invalid(
            "alpha",
            format!("expected alpha >= 0, got {alpha}"),
        ))
    }
}

pub(crate) fn check_alpha_unit(alpha: f64) -> Result<()> {
    if (0.0..1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid(
            "alpha",
            format!("expected 0 <= alpha < 1, got {alpha}"),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    CertifiedMember,
    SampledMember,
    NonMember,
    Indeterminate,
}

impl Status {
    pub fn is_member(self) -> bool {
        matches!(self, Status::CertifiedMember | Status::SampledMember)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub status: Status,
    pub min_margin: f64,
    /// Point of minimal margin; always set for `NonMember`.
    pub witness: Option<Complex64>,
    pub samples_checked: usize,
    /// Points skipped because the functional is undefined there.
    pub degenerate: usize,
}

impl MembershipVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "min_margin": self.min_margin,
            "witness": self.witness.map(|w| [w.re, w.im]),
            "samples_checked": self.samples_checked,
            "degenerate": self.degenerate,
        })
    }
}

/// Result of a coefficient-sum criterion `sum <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoeffCheck {
    pub holds: bool,
    /// `1 - sum`.
    pub margin: f64,
}

impl CoeffCheck {
    pub(crate) fn from_sum(sum: f64) -> Self {
        Self {
            holds: sum <= 1.0 + ROUNDING_SLACK,
            margin: 1.0 - sum,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Best {
    margin: f64,
    index: usize,
}

impl Best {
    fn pick(self, other: Self) -> Self {
        if other.margin < self.margin || (other.margin == self.margin && other.index < self.index) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Acc {
    best: Option<Best>,
    checked: usize,
    degenerate: usize,
}

impl Acc {
    const EMPTY: Acc = Acc {
        best: None,
        checked: 0,
        degenerate: 0,
    };

    fn merge(self, other: Self) -> Self {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(a.pick(b)),
            (a, b) => a.or(b),
        };
        Acc {
            best,
            checked: self.checked + other.checked,
            degenerate: self.degenerate + other.degenerate,
        }
    }
}

/// Minimum of a pointwise margin over `points`.
///
/// `margin` returns `None` (or NaN) where the functional is undefined. The
/// reduction is a min-by-(margin, index) and gives the same answer for any
/// split of the work.
#[derive(Clone, Copy, Debug)]
pub struct Scan {
    pub min_margin: f64,
    pub argmin: Option<Complex64>,
    pub checked: usize,
    pub degenerate: usize,
}

pub fn scan_points<F>(points: &[Complex64], margin: F) -> Scan
where
    F: Fn(Complex64) -> Option<f64> + Sync,
{
    let acc = points
        .par_iter()
        .enumerate()
        .with_min_len(256)
        .fold(
            || Acc::EMPTY,
            |mut acc, (index, &z)| {
                match margin(z).filter(|m| !m.is_nan()) {
                    Some(m) => {
                        acc.checked += 1;
                        let cand = Best { margin: m, index };
                        acc.best = Some(acc.best.map_or(cand, |b| b.pick(cand)));
                    }
                    None => acc.degenerate += 1,
                }
                acc
            },
        )
        .reduce(|| Acc::EMPTY, Acc::merge);
    Scan {
        min_margin: acc.best.map_or(f64::INFINITY, |b| b.margin),
        argmin: acc.best.map(|b| points[b.index]),
        checked: acc.checked,
        degenerate: acc.degenerate,
    }
}

impl Scan {
    pub fn verdict(self) -> MembershipVerdict {
        let status = if self.min_margin < -MARGIN_TOL {
            Status::NonMember
        } else if self.degenerate > 0 || self.checked == 0 || self.min_margin < MARGIN_TOL {
            Status::Indeterminate
        } else {
            Status::SampledMember
        };
        MembershipVerdict {
            status,
            min_margin: self.min_margin,
            witness: self.argmin,
            samples_checked: self.checked,
            degenerate: self.degenerate,
        }
    }
}

fn nonempty(points: &[Complex64]) -> Result<()> {
    if points.is_empty() {
        Err(Error::EmptyGrid)
    } else {
        Ok(())
    }
}

/// `Re g(z) - alpha |z g'(z)|`; positive throughout the disc for ME(alpha).
pub fn me_functional(f: &LaurentFunction, alpha: f64, z: Complex64) -> f64 {
    let (g, gp) = f.eval_g_and_prime(z);
    g.re - alpha * (z * gp).norm()
}

/// `z g'(z) / g(z)`, which equals `z f'(z)/f(z) + 1`; `None` near zeros of `g`.
pub fn log_derivative(f: &LaurentFunction, z: Complex64) -> Option<Complex64> {
    let (g, gp) = f.eval_g_and_prime(z);
    (g.norm() >= ZERO_TOL).then(|| z * gp / g)
}

pub fn mf_margin(f: &LaurentFunction, alpha: f64, z: Complex64) -> Option<f64> {
    log_derivative(f, z).map(|q| (1.0 - alpha) - q.norm())
}

pub fn starlike_margin(f: &LaurentFunction, alpha: f64, z: Complex64) -> Option<f64> {
    log_derivative(f, z).map(|q| (1.0 - alpha) - q.re)
}

/// `-Re(z^2 f'(z))`, using `z^2 f' = z g' - g`.
pub fn remark2_margin(f: &LaurentFunction, z: Complex64) -> f64 {
    let (g, gp) = f.eval_g_and_prime(z);
    -(z * gp - g).re
}

pub fn check_me(f: &LaurentFunction, alpha: f64, grid: &DiscGrid) -> Result<MembershipVerdict> {
    check_me_at(f, alpha, &grid.points())
}

pub fn check_me_at(
    f: &LaurentFunction,
    alpha: f64,
    points: &[Complex64],
) -> Result<MembershipVerdict> {
    check_alpha_nonneg(alpha)?;
    nonempty(points)?;
    Ok(scan_points(points, |z| Some(me_functional(f, alpha, z))).verdict())
}

pub fn check_mf(f: &LaurentFunction, alpha: f64, grid: &DiscGrid) -> Result<MembershipVerdict> {
    check_mf_at(f, alpha, &grid.points())
}

pub fn check_mf_at(
    f: &LaurentFunction,
    alpha: f64,
    points: &[Complex64],
) -> Result<MembershipVerdict> {
    check_alpha_unit(alpha)?;
    nonempty(points)?;
    Ok(scan_points(points, |z| mf_margin(f, alpha, z)).verdict())
}

pub fn check_starlike(
    f: &LaurentFunction,
    alpha: f64,
    grid: &DiscGrid,
) -> Result<MembershipVerdict> {
    check_starlike_at(f, alpha, &grid.points())
}

pub fn check_starlike_at(
    f: &LaurentFunction,
    alpha: f64,
    points: &[Complex64],
) -> Result<MembershipVerdict> {
    check_alpha_unit(alpha)?;
    nonempty(points)?;
    Ok(scan_points(points, |z| starlike_margin(f, alpha, z)).verdict())
}

pub fn check_remark2(f: &LaurentFunction, grid: &DiscGrid) -> Result<MembershipVerdict> {
    let points = grid.points();
    nonempty(&points)?;
    Ok(scan_points(&points, |z| Some(remark2_margin(f, z))).verdict())
}

/// Dispatches on `spec.family`. TME is checked as ME on the same series;
/// the exact TME test lives in [`crate::tme`].
pub fn check_class(
    f: &LaurentFunction,
    spec: ClassSpec,
    grid: &DiscGrid,
) -> Result<MembershipVerdict> {
    match spec.family {
        Family::Me | Family::Tme => check_me(f, spec.alpha, grid),
        Family::Mf => check_mf(f, spec.alpha, grid),
        Family::Starlike => check_starlike(f, spec.alpha, grid),
    }
}

/// `sum_{n>=0} (1 + alpha (n+1)) |a_n| <= 1`, sufficient for ME(alpha).
pub fn coeff_sufficient_me(f: &LaurentFunction, alpha: f64) -> Result<CoeffCheck> {
    check_alpha_nonneg(alpha)?;
    let sum: f64 = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| class_weight(alpha, n) * a.norm())
        .sum();
    Ok(CoeffCheck::from_sum(sum))
}

/// Certifies by coefficients when possible, otherwise samples.
pub fn classify_me(f: &LaurentFunction, alpha: f64, grid: &DiscGrid) -> Result<MembershipVerdict> {
    let cert = coeff_sufficient_me(f, alpha)?;
    if cert.holds {
        return Ok(MembershipVerdict {
            status: Status::CertifiedMember,
            min_margin: cert.margin,
            witness: None,
            samples_checked: 0,
            degenerate: 0,
        });
    }
    check_me(f, alpha, grid)
}

/// Sharp bound on `|a_n|` over ME(alpha):
/// `2 / (sqrt(alpha^2 (n+1)^2 + 1) + alpha (n+1))`.
pub fn coeff_bound(alpha: f64, n: usize) -> f64 {
    let x = alpha * (n as f64 + 1.0);
    2.0 / ((x * x + 1.0).sqrt() + x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn exp_tail(degree: usize) -> LaurentFunction {
        let mut fact = 1.0;
        let coeffs = (0..=degree)
            .map(|n| {
                fact *= n as f64 + 1.0;
                c(1.0 / fact, 0.0)
            })
            .collect();
        LaurentFunction::from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn pole_has_unit_me_margin() {
        let f = LaurentFunction::pole();
        for alpha in [0.0, 1.0, 7.5] {
            assert_eq!(me_functional(&f, alpha, c(0.3, 0.8)), 1.0);
        }
        let v = check_me(&f, 2.0, &DiscGrid::default()).unwrap();
        assert_eq!(v.status, Status::SampledMember);
        assert_eq!(v.min_margin, 1.0);
    }

    #[test]
    fn me_functional_alpha_zero_is_re_g() {
        let f = LaurentFunction::from_real(&[0.4, -0.2, 0.1]).unwrap();
        let z = c(-0.5, 0.6);
        assert_eq!(me_functional(&f, 0.0, z), f.eval_g(z).re);
    }

    #[test]
    fn exp_fails_me_on_imaginary_axis() {
        let f = exp_tail(30);
        let z = c(0.0, 0.99);
        let closed = 0.99f64.cos() - 0.99;
        assert!((me_functional(&f, 1.0, z) - closed).abs() < 1e-12);
        assert!(closed < 0.0);
    }

    #[test]
    fn pole_is_mf_and_starlike() {
        let f = LaurentFunction::pole();
        let grid = DiscGrid::new(vec![0.5, 0.99], 16).unwrap();
        let v = check_mf(&f, 0.25, &grid).unwrap();
        assert_eq!(v.status, Status::SampledMember);
        assert!((v.min_margin - 0.75).abs() < 1e-15);
        let v = check_starlike(&f, 0.9, &grid).unwrap();
        assert_eq!(v.status, Status::SampledMember);
    }

    #[test]
    fn starlike_margin_closed_form_for_square() {
        // f = (1 - z)^2 / z: Re(z f'/f) = -Re((1 + z)/(1 - z))
        let f = LaurentFunction::from_real(&[-2.0, 1.0]).unwrap();
        let z = c(0.3, -0.45);
        let one = c(1.0, 0.0);
        let expected = ((one + z) / (one - z)).re;
        assert!((starlike_margin(&f, 0.0, z).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_of_g_is_degenerate() {
        // g = 1 - 4 z^2 vanishes at z = 1/2
        let f = LaurentFunction::from_real(&[0.0, -4.0]).unwrap();
        assert!(mf_margin(&f, 0.0, c(0.5, 0.0)).is_none());
        let pts = [c(0.5, 0.0), c(0.1, 0.0)];
        let v = check_mf_at(&f, 0.0, &pts).unwrap();
        assert_eq!(v.degenerate, 1);
        assert_eq!(v.status, Status::Indeterminate);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = LaurentFunction::pole();
        assert!(matches!(check_me_at(&f, 1.0, &[]), Err(Error::EmptyGrid)));
        assert!(check_mf(&f, 1.0, &DiscGrid::default()).is_err());
        assert!(check_starlike(&f, -0.1, &DiscGrid::default()).is_err());
        assert!(check_me(&f, -1.0, &DiscGrid::default()).is_err());
        assert!(ClassSpec::new(Family::Mf, 1.0).is_err());
        assert!(ClassSpec::new(Family::Me, 3.0).is_ok());
    }

    #[test]
    fn coefficient_sufficiency() {
        assert!(
            coeff_sufficient_me(&LaurentFunction::pole(), 1.0)
                .unwrap()
                .holds
        );
        let f = LaurentFunction::from_real(&[0.9]).unwrap();
        let r = coeff_sufficient_me(&f, 1.0).unwrap();
        assert!(!r.holds);
        assert!((r.margin + 0.8).abs() < 1e-15);
        let v = classify_me(&f, 1.0, &DiscGrid::default()).unwrap();
        assert_ne!(v.status, Status::CertifiedMember);
    }

    #[test]
    fn coeff_bound_values() {
        for n in 0..10 {
            assert_eq!(coeff_bound(0.0, n), 2.0);
        }
        // 2 (sqrt 2 - 1)
        assert!((coeff_bound(1.0, 0) - 0.828_427_124_746_190_1).abs() < 1e-15);
        for &alpha in &[0.1, 0.5, 1.0, 3.0] {
            for n in 0..30 {
                assert!(coeff_bound(alpha, n + 1) < coeff_bound(alpha, n));
                assert!(coeff_bound(alpha + 0.1, n) < coeff_bound(alpha, n));
            }
        }
    }

    #[test]
    fn positive_real_part_examples() {
        let grid = DiscGrid::default();
        let v = check_remark2(&LaurentFunction::pole(), &grid).unwrap();
        assert_eq!(v.status, Status::SampledMember);
        assert!((v.min_margin - 1.0).abs() < 1e-15);

        // f = 1/z + 3z: -Re(3 z^2 - 1) at z = 0.9 is -1.43
        let f = LaurentFunction::from_real(&[0.0, 3.0]).unwrap();
        assert!((remark2_margin(&f, c(0.9, 0.0)) + 1.43).abs() < 1e-14);
        assert_eq!(check_remark2(&f, &grid).unwrap().status, Status::NonMember);
    }

    #[test]
    fn scan_is_split_invariant() {
        let f = LaurentFunction::from_coeffs(vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap();
        let pts = DiscGrid::new(vec![0.3, 0.6, 0.95], 64).unwrap().points();
        let par = scan_points(&pts, |z| Some(me_functional(&f, 1.0, z)));
        let (mut best, mut at) = (f64::INFINITY, 0);
        for (i, &z) in pts.iter().enumerate() {
            let m = me_functional(&f, 1.0, z);
            if m < best {
                best = m;
                at = i;
            }
        }
        assert_eq!(par.min_margin, best);
        assert_eq!(par.argmin, Some(pts[at]));
    }
}
