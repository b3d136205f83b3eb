//! Seeded generators for random series used by the Monte Carlo suites.
//!
//! All generators draw a point `lambda` uniformly on a simplex, scale it by
//! a random level, and divide by the class weights, so the weighted
//! coefficient sum equals the level exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::classes::class_weight;
use crate::series::LaurentFunction;
use crate::tme::TmeFunction;

pub fn simplex<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..len).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter_mut().for_each(|x| *x /= total);
    }
    w
}

fn phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(-PI..PI))
}

/// Series on indices `first..=degree` with `sum weight(n) |a_n| = level`.
fn weighted_series<R: Rng>(
    rng: &mut R,
    alpha: f64,
    first: usize,
    degree: usize,
    level: f64,
) -> LaurentFunction {
    let lambda = simplex(rng, degree + 1 - first);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    for (n, l) in (first..=degree).zip(lambda) {
        coeffs[n] = phase(rng) * (level * l / class_weight(alpha, n));
    }
    LaurentFunction::from_coeffs(coeffs).expect("finite coefficients")
}

/// Complex series with weighted coefficient sum uniform in `[0, max_level)`;
/// levels above 1 give a mix of members and non-members.
pub fn random_series<R: Rng>(
    rng: &mut R,
    alpha: f64,
    max_degree: usize,
    max_level: f64,
) -> LaurentFunction {
    let degree = rng.gen_range(0..=max_degree);
    let level = max_level * rng.gen::<f64>();
    weighted_series(rng, alpha, 0, degree, level)
}

/// Member of ME(alpha) certified by the coefficient-sum test.
pub fn random_certified_me<R: Rng>(rng: &mut R, alpha: f64, max_degree: usize) -> LaurentFunction {
    let degree = rng.gen_range(0..=max_degree);
    let level = rng.gen::<f64>();
    weighted_series(rng, alpha, 0, degree, level)
}

/// Series with `a_0 = 0` satisfying `sum_{k>=1} d_k |a_k| <= 1`.
pub fn random_hypothesis11_member<R: Rng>(
    rng: &mut R,
    alpha: f64,
    max_degree: usize,
) -> LaurentFunction {
    let degree = rng.gen_range(1..=max_degree.max(1));
    let level = rng.gen::<f64>();
    weighted_series(rng, alpha, 1, degree, level)
}

pub fn random_tme_member<R: Rng>(rng: &mut R, alpha: f64, max_degree: usize) -> TmeFunction {
    let degree = rng.gen_range(1..=max_degree.max(1));
    let level = rng.gen::<f64>();
    let magnitudes = simplex(rng, degree)
        .into_iter()
        .enumerate()
        .map(|(i, l)| level * l / class_weight(alpha, i + 1))
        .collect();
    TmeFunction::new(magnitudes).expect("nonnegative magnitudes")
}
