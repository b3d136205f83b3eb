//! Convolution characterization of ME(alpha) and delta-neighborhoods.
//!
//! For the kernel `h_gamma(z) = (1 + z(alpha e^{i gamma} - 1)) / (z (1 - z)^2)`
//! with tail coefficients `c_k = 1 + alpha (k+1) e^{i gamma}`,
//!
//! ```text
//! z (f * h_gamma)(z) = g(z) + alpha e^{i gamma} z g'(z),
//! ```
//!
//! so `f` is in ME(alpha) exactly when the real part of this stays positive
//! for every phase. The minimum over the phase is `Re g - alpha |z g'|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::classes::{check_alpha_nonneg, check_me, scan_points, MembershipVerdict, Status};
use crate::error::{invalid, Error, Result};
use crate::harness::report::{Check, CheckStatus, VerificationReport};
use crate::series::{DiscGrid, LaurentFunction};

pub const DEFAULT_GAMMA_SAMPLES: usize = 256;
/// Tail indices perturbed by [`neighborhood_sample`] beyond those of `f`.
pub const NEIGHBORHOOD_SUPPORT: usize = 8;

/// Wraps an angle into `(-pi, pi]`.
pub fn normalize_phase(gamma: f64) -> f64 {
    let mut g = gamma.rem_euclid(2.0 * PI);
    if g > PI {
        g -= 2.0 * PI;
    }
    g
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    alpha: f64,
    gamma: f64,
}

impl KernelSpec {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        check_alpha_nonneg(alpha)?;
        if !gamma.is_finite() {
            return Err(invalid("gamma", "phase must be finite"));
        }
        Ok(Self {
            alpha,
            gamma: normalize_phase(gamma),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Kernel series with `c_k = 1 + alpha (k+1) e^{i gamma}` for `k = 0..=degree`.
pub fn kernel(spec: KernelSpec, degree: usize) -> LaurentFunction {
    let rot = Complex64::from_polar(spec.alpha, spec.gamma);
    let coeffs = (0..=degree)
        .map(|k| Complex64::new(1.0, 0.0) + rot * (k as f64 + 1.0))
        .collect();
    LaurentFunction::from_coeffs(coeffs).expect("finite kernel coefficients")
}

/// `Re z (f * h_gamma)(z)`, evaluated literally through the Hadamard product.
pub fn convolution_functional(f: &LaurentFunction, spec: KernelSpec, z: Complex64) -> f64 {
    let h = kernel(spec, f.truncation_degree().unwrap_or(0));
    f.hadamard(&h).eval_g(z).re
}

/// Phase-independent pieces of `z (f * h_gamma) = p0 + e^{i gamma} p1`.
struct SplitConvolution {
    plain: LaurentFunction,
    weighted: LaurentFunction,
}

impl SplitConvolution {
    fn new(f: &LaurentFunction, alpha: f64) -> Self {
        let degree = f.truncation_degree().unwrap_or(0);
        let ones = LaurentFunction::from_real(&vec![1.0; degree + 1]).expect("finite");
        let weights: Vec<f64> = (0..=degree).map(|k| alpha * (k as f64 + 1.0)).collect();
        let weights = LaurentFunction::from_real(&weights).expect("finite");
        Self {
            plain: f.hadamard(&ones),
            weighted: f.hadamard(&weights),
        }
    }

    fn at(&self, z: Complex64) -> (Complex64, Complex64) {
        // the weighted kernel part has no pole term, so drop the leading 1
        let p1 = self.weighted.eval_g(z) - Complex64::new(1.0, 0.0);
        (self.plain.eval_g(z), p1)
    }
}

/// Minimum of `Re(p0 + e^{i gamma} p1)` over `gamma_j = -pi + 2 pi (j+1)/m`.
///
/// The phases form a coset of the step lattice through `pi`, so the minimum
/// sits at the lattice phase closest to `pi - arg p1`.
fn sampled_phase_min(p0: Complex64, p1: Complex64, gamma_samples: usize) -> f64 {
    let step = 2.0 * PI / gamma_samples as f64;
    let target = PI - p1.arg();
    let u = (target - PI) / step;
    let miss = (u - u.round()).abs() * step;
    p0.re - p1.norm() * miss.cos()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionVerdict {
    /// Decided on the exact phase minimum.
    pub verdict: MembershipVerdict,
    /// Grid minimum over the sampled phases only.
    pub sampled_min_margin: f64,
    pub gamma_samples: usize,
}

pub fn check_thm31(
    f: &LaurentFunction,
    alpha: f64,
    grid: &DiscGrid,
    gamma_samples: usize,
) -> Result<ConvolutionVerdict> {
    check_alpha_nonneg(alpha)?;
    if gamma_samples < 4 {
        return Err(invalid(
            "gamma_samples",
            format!("expected >= 4, got {gamma_samples}"),
        ));
    }
    let points = grid.points();
    if points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let split = SplitConvolution::new(f, alpha);
    let exact = scan_points(&points, |z| {
        let (p0, p1) = split.at(z);
        Some(p0.re - p1.norm())
    });
    let sampled = scan_points(&points, |z| {
        let (p0, p1) = split.at(z);
        Some(sampled_phase_min(p0, p1, gamma_samples))
    });
    Ok(ConvolutionVerdict {
        verdict: exact.verdict(),
        sampled_min_margin: sampled.min_margin,
        gamma_samples,
    })
}

/// Checks ME(alpha) for `(f - eps/z) / (1 - eps)`.
pub fn stability_premise(
    f: &LaurentFunction,
    alpha: f64,
    eps: f64,
    grid: &DiscGrid,
) -> Result<MembershipVerdict> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid("eps", format!("expected 0 < eps < 1, got {eps}")));
    }
    check_me(&f.scale_tail(1.0 / (1.0 - eps)), alpha, grid)
}

/// Seeded perturbations `g` of `f` with `delta_distance(f, g) <= delta`.
///
/// Samples cycle through four shapes: a single-index spike on the sphere,
/// spread mass on the sphere, and two interior draws. Half of all samples
/// therefore lie exactly on `sum k |a_k - b_k| = delta`.
pub fn neighborhood_sample(
    f: &LaurentFunction,
    delta: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<LaurentFunction>> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(invalid(
            "delta",
            format!("expected delta >= 0, got {delta}"),
        ));
    }
    if count < 1 {
        return Err(invalid("count", "expected count >= 1"));
    }
    let support = f.len().saturating_sub(1).max(NEIGHBORHOOD_SUPPORT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut weights = vec![0.0f64; support];
        let radius = match i % 4 {
            0 => {
                weights[rng.gen_range(0..support)] = 1.0;
                delta
            }
            1 => {
                fill_simplex(&mut rng, &mut weights);
                delta
            }
            _ => {
                fill_simplex(&mut rng, &mut weights);
                delta * rng.gen::<f64>()
            }
        };
        let mut coeffs: Vec<Complex64> = (0..=support).map(|k| f.coeff(k)).collect();
        for (slot, (k, w)) in coeffs[1..].iter_mut().zip((1..=support).zip(&weights)) {
            let phase = rng.gen_range(-PI..PI);
            if *w > 0.0 {
                *slot += Complex64::from_polar(radius * w / k as f64, phase);
            }
        }
        out.push(LaurentFunction::from_coeffs(coeffs)?);
    }
    Ok(out)
}

fn fill_simplex(rng: &mut ChaCha8Rng, weights: &mut [f64]) {
    for w in weights.iter_mut() {
        *w = -(1.0 - rng.gen::<f64>()).ln();
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
}

/// Neighborhood radius `1 / (1 + 2 alpha)` guaranteed around `1/z`.
pub fn pole_neighborhood_radius(alpha: f64) -> f64 {
    1.0 / (1.0 + 2.0 * alpha)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityParams {
    pub alpha: f64,
    pub eps: f64,
    /// Sampling radius as a multiple of `1/(1 + 2 alpha)`.
    pub scale: f64,
    pub count: usize,
    pub seed: u64,
}

/// Samples the neighborhood of radius `scale / (1 + 2 alpha)` and checks
/// every sample for ME(alpha) on `grid`.
///
/// The claim is only asserted when the premise holds and `scale <= 1`; for
/// other inputs the sampling still runs and its findings are reported as
/// inapplicable.
pub fn check_thm32(
    f: &LaurentFunction,
    params: StabilityParams,
    grid: &DiscGrid,
) -> Result<VerificationReport> {
    let StabilityParams {
        alpha,
        eps,
        scale,
        count,
        seed,
    } = params;
    check_alpha_nonneg(alpha)?;
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(invalid(
            "scale",
            format!("expected scale >= 0, got {scale}"),
        ));
    }
    let radius_star = pole_neighborhood_radius(alpha);
    let delta = radius_star * scale;

    let mut report = VerificationReport::new("thm3.2");
    report
        .input("alpha", json!(alpha))
        .input("eps", json!(eps))
        .input("delta_star", json!(radius_star))
        .input("delta", json!(delta))
        .input("count", json!(count))
        .input("seed", json!(seed))
        .input("grid", grid.to_json());

    let premise = stability_premise(f, alpha, eps, grid)?;
    let premise_ok = premise.status.is_member();
    report.push(
        Check::new(
            "premise",
            if premise_ok {
                CheckStatus::Pass
            } else {
                CheckStatus::Inapplicable
            },
        )
        .margin(premise.min_margin)
        .witness(premise.witness)
        .detail(format!(
            "(f - eps/z)/(1 - eps) verdict {:?}",
            premise.status
        )),
    );
    report.push(
        Check::new(
            "radius_order",
            if delta < eps {
                CheckStatus::Pass
            } else {
                CheckStatus::Indeterminate
            },
        )
        .margin(eps - delta)
        .detail("delta < eps"),
    );

    let applies = premise_ok && scale <= 1.0;
    let samples = neighborhood_sample(f, delta, count, seed)?;
    let verdicts = samples
        .iter()
        .map(|g| check_me(g, alpha, grid))
        .collect::<Result<Vec<_>>>()?;
    let refuted = verdicts
        .iter()
        .filter(|v| v.status == Status::NonMember)
        .count();
    let unsure = verdicts
        .iter()
        .filter(|v| v.status == Status::Indeterminate)
        .count();
    let worst = verdicts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.min_margin.total_cmp(&b.1.min_margin))
        .expect("count >= 1");

    let status = if !applies {
        CheckStatus::Inapplicable
    } else if refuted > 0 {
        CheckStatus::Fail
    } else if unsure > 0 {
        CheckStatus::Indeterminate
    } else {
        CheckStatus::Pass
    };
    let mut detail = format!(
        "{} samples: {} members, {} refuted, {} indeterminate",
        count,
        count - refuted - unsure,
        refuted,
        unsure
    );
    if refuted > 0 {
        detail.push_str(&format!(
            "; worst sample #{} coeffs {}",
            worst.0,
            samples[worst.0].to_json()["coeffs"]
        ));
    }
    report.push(
        Check::new("neighborhood_membership", status)
            .margin(worst.1.min_margin)
            .witness(worst.1.witness)
            .detail(detail)
            .count("refuted", refuted)
            .count("members", count - refuted - unsure),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::me_functional;
    use crate::extremal::remark1_witness;

    #[test]
    fn phase_normalization() {
        assert_eq!(normalize_phase(PI), PI);
        assert!((normalize_phase(-PI) - PI).abs() < 1e-15);
        assert!((normalize_phase(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert_eq!(KernelSpec::new(1.0, 0.25).unwrap().gamma(), 0.25);
    }

    #[test]
    fn alpha_zero_kernel_is_identity() {
        let h = kernel(KernelSpec::new(0.0, 1.3).unwrap(), 6);
        assert!(h.coeffs().iter().all(|c| *c == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn kernel_modulus_bound() {
        for &gamma in &[0.0, 0.4, -2.0, PI] {
            let h = kernel(KernelSpec::new(1.5, gamma).unwrap(), 20);
            for (k, c) in h.coeffs().iter().enumerate() {
                let bound = 1.0 + 1.5 * (k as f64 + 1.0);
                assert!(c.norm() <= bound + 1e-12);
                if gamma == 0.0 {
                    assert!((c.norm() - bound).abs() < 1e-12);
                } else {
                    assert!(c.norm() < bound - 1e-6);
                }
            }
        }
    }

    #[test]
    fn sampled_phase_min_matches_brute_force() {
        let p0 = Complex64::new(0.7, -0.2);
        for &arg in &[0.0, 0.3, 1.0, -2.9, PI] {
            let p1 = Complex64::from_polar(0.45, arg);
            for m in [4usize, 7, 16, 256] {
                let brute = (0..m)
                    .map(|j| {
                        let gamma = -PI + 2.0 * PI * (j as f64 + 1.0) / m as f64;
                        (p0 + Complex64::from_polar(1.0, gamma) * p1).re
                    })
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    (sampled_phase_min(p0, p1, m) - brute).abs() < 1e-14,
                    "arg {arg} m {m}"
                );
            }
        }
    }

    #[test]
    fn pole_passes_convolution_test() {
        let grid = DiscGrid::new(vec![0.5, 0.99], 16).unwrap();
        let v = check_thm31(&LaurentFunction::pole(), 2.0, &grid, 8).unwrap();
        assert_eq!(v.verdict.status, Status::SampledMember);
        assert_eq!(v.verdict.min_margin, 1.0);
        assert_eq!(v.sampled_min_margin, 1.0);
        assert!(check_thm31(&LaurentFunction::pole(), 2.0, &grid, 3).is_err());
    }

    #[test]
    fn premise_on_scaled_witness() {
        let eps = 0.3;
        let f = remark1_witness(2).unwrap().scale_tail(1.0 - eps);
        let grid = DiscGrid::default();
        let v = stability_premise(&f, 1.0, eps, &grid).unwrap();
        assert!(v.status.is_member() || v.status == Status::Indeterminate);
        // linearity in the tail: the functional of f itself stays above eps
        let min = grid
            .points()
            .iter()
            .map(|&z| me_functional(&f, 1.0, z))
            .fold(f64::INFINITY, f64::min);
        assert!(min >= eps - 1e-12, "{min}");
        assert!(stability_premise(&f, 1.0, 1.0, &grid).is_err());
        assert!(stability_premise(&f, 1.0, 0.0, &grid).is_err());
    }

    #[test]
    fn zero_radius_neighborhood_is_f() {
        let f = LaurentFunction::from_real(&[0.1, 0.2, -0.05]).unwrap();
        for g in neighborhood_sample(&f, 0.0, 12, 3).unwrap() {
            assert_eq!(g.delta_distance(&f), 0.0);
            assert_eq!(g.coeff(0), f.coeff(0));
        }
    }

    #[test]
    fn neighborhood_respects_radius() {
        let f = LaurentFunction::from_real(&[0.1, 0.2, -0.05]).unwrap();
        let delta = 0.37;
        let samples = neighborhood_sample(&f, delta, 200, 11).unwrap();
        for (i, g) in samples.iter().enumerate() {
            let d = f.delta_distance(g);
            assert!(d <= delta + 1e-12);
            if i % 4 < 2 {
                assert!((d - delta).abs() < 1e-9, "sample {i} at {d}");
            }
        }
        assert_eq!(samples, neighborhood_sample(&f, delta, 200, 11).unwrap());
        assert_ne!(samples, neighborhood_sample(&f, delta, 200, 12).unwrap());
    }

    #[test]
    fn stability_fails_away_from_the_pole() {
        // f sits on the boundary after the eps-shift; a neighbor at full
        // radius 1/(1 + 2 alpha) along z leaves ME(alpha)
        let alpha = 1.0;
        let eps = 0.5;
        let a1 = (1.0 - eps) / (1.0 + 2.0 * alpha);
        let f = LaurentFunction::from_real(&[0.0, a1]).unwrap();
        let g = LaurentFunction::from_real(&[0.0, a1 + pole_neighborhood_radius(alpha)]).unwrap();
        assert!((f.delta_distance(&g) - pole_neighborhood_radius(alpha)).abs() < 1e-15);
        let grid = DiscGrid::default();
        assert!(stability_premise(&f, alpha, eps, &grid).unwrap().status != Status::NonMember);
        assert_eq!(
            check_me(&g, alpha, &grid).unwrap().status,
            Status::NonMember
        );
    }
}
