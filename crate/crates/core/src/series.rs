//! Truncated Laurent series with a normalized simple pole at the origin.
//!
//! A [`LaurentFunction`] stores the tail coefficients of
//! `f(z) = 1/z + a_0 + a_1 z + ... + a_N z^N`. Every functional in this crate
//! is evaluated through the analytic companion `g(z) = z f(z)`, which is a
//! polynomial with `g(0) = 1`, so the pole never has to be touched
//! numerically.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};

/// A truncated series `1/z + sum_n a_n z^n`, with `coeffs[n] = a_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentFunction {
    coeffs: Vec<Complex64>,
}

impl Default for LaurentFunction {
    fn default() -> Self {
        Self::pole()
    }
}

impl LaurentFunction {
    /// `f(z) = 1/z`.
    pub fn pole() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Result<Self> {
        for (index, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite {
                    index,
                    re: c.re,
                    im: c.im,
                });
            }
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Series with a single tail term `value * z^index`.
    pub fn monomial(index: usize, value: Complex64) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); index + 1];
        coeffs[index] = value;
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero past the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Highest represented tail index, `None` for the bare pole.
    pub fn truncation_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `g(z) = 1 + sum_n a_n z^(n+1)` by Horner's rule.
    pub fn eval_g(&self, z: Complex64) -> Complex64 {
        let inner = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
        Complex64::new(1.0, 0.0) + z * inner
    }

    /// `g'(z) = sum_n (n+1) a_n z^n`.
    pub fn eval_g_prime(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (n, &a)| {
                acc * z + a * (n as f64 + 1.0)
            })
    }

    /// `(g(z), g'(z))` in one pass.
    pub fn eval_g_and_prime(&self, z: Complex64) -> (Complex64, Complex64) {
        // Horner on p(z) = sum a_n z^n, carrying p'; then g = 1 + z p, g' = p + z p'.
        let zero = Complex64::new(0.0, 0.0);
        let (p, dp) = self
            .coeffs
            .iter()
            .rev()
            .fold((zero, zero), |(p, dp), &a| (p * z + a, dp * z + p));
        (Complex64::new(1.0, 0.0) + z * p, p + z * dp)
    }

    /// `f(z) = g(z) / z`; undefined at the origin.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_g(z) / z
    }

    /// Coefficient-wise product; the result is truncated to the shorter input.
    pub fn hadamard(&self, other: &Self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// `S_n(z) = 1/z + sum_{k=1}^{n-1} a_k z^k`.
    ///
    /// The constant term `a_0` is dropped: the sum starts at `k = 1`.
    pub fn partial_sum(&self, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("n", "partial sums are indexed from 1"));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut coeffs: Vec<Complex64> = (0..n)
            .map(|k| if k == 0 { zero } else { self.coeff(k) })
            .collect();
        while coeffs.last() == Some(&zero) {
            coeffs.pop();
        }
        Ok(Self { coeffs })
    }

    /// Weighted distance `sum_{k>=1} k |a_k - b_k|`; index 0 carries no weight.
    pub fn delta_distance(&self, other: &Self) -> f64 {
        let len = self.len().max(other.len());
        (1..len)
            .map(|k| k as f64 * (self.coeff(k) - other.coeff(k)).norm())
            .sum()
    }

    /// Multiplies every tail coefficient by `s`, keeping the pole.
    pub fn scale_tail(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>()
        })
    }

    /// Parses `{"coeffs": [[re, im], ...]}`.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Schema("series document must be a JSON object".into()))?;
        let coeffs = obj
            .get("coeffs")
            .ok_or_else(|| Error::Schema("missing key \"coeffs\"".into()))?
            .as_array()
            .ok_or_else(|| Error::Schema("\"coeffs\" must be an array".into()))?;
        let mut out = Vec::with_capacity(coeffs.len());
        for (index, entry) in coeffs.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Schema(format!("coeffs[{index}] must be a [re, im] pair")))?;
            let mut parts = [0.0f64; 2];
            for (slot, part) in parts.iter_mut().zip(pair) {
                *slot = match part {
                    // serde_json writes non-finite floats as null
                    Value::Null => f64::NAN,
                    v => v.as_f64().ok_or_else(|| {
                        Error::Schema(format!("coeffs[{index}] has a non-numeric component"))
                    })?,
                };
            }
            out.push(Complex64::new(parts[0], parts[1]));
        }
        Self::from_coeffs(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        Self::from_json(&value)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("series serializes");
        fs::write(path, text + "\n").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Polar sampling plan over the punctured unit disc.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscGrid {
    radii: Vec<f64>,
    angular_samples: usize,
}

pub const DEFAULT_ANGULAR_SAMPLES: usize = 2048;

const DEFAULT_RADII: [f64; 12] = [
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.999, 0.9999,
];

impl Default for DiscGrid {
    fn default() -> Self {
        Self {
            radii: DEFAULT_RADII.to_vec(),
            angular_samples: DEFAULT_ANGULAR_SAMPLES,
        }
    }
}

impl DiscGrid {
    pub fn new(radii: Vec<f64>, angular_samples: usize) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if angular_samples < 8 {
            return Err(Error::InvalidGrid(format!(
                "angular_samples must be at least 8, got {angular_samples}"
            )));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidGrid(format!("radius {r} outside (0, 1)")));
        }
        if radii.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGrid(
                "radii must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            radii,
            angular_samples,
        })
    }

    /// Default schedule cut at `rmax`, with `rmax` itself as the outermost circle.
    pub fn with_rmax(rmax: f64, angular_samples: usize) -> Result<Self> {
        if !(rmax > 0.0 && rmax < 1.0) {
            return Err(Error::InvalidGrid(format!("rmax {rmax} outside (0, 1)")));
        }
        let mut radii: Vec<f64> = DEFAULT_RADII
            .iter()
            .copied()
            .filter(|&r| r < rmax)
            .collect();
        radii.push(rmax);
        Self::new(radii, angular_samples)
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_samples(&self) -> usize {
        self.angular_samples
    }

    pub fn max_radius(&self) -> f64 {
        *self.radii.last().expect("grid has at least one radius")
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angular_samples
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All sample points, radius-major, `theta_j = 2 pi j / angular_samples`.
    pub fn points(&self) -> Vec<Complex64> {
        let step = 2.0 * PI / self.angular_samples as f64;
        let unit: Vec<Complex64> = (0..self.angular_samples)
            .map(|j| Complex64::from_polar(1.0, step * j as f64))
            .collect();
        self.radii
            .iter()
            .flat_map(|&r| unit.iter().map(move |u| u * r))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({ "radii": self.radii, "angular_samples": self.angular_samples })
    }
}

/// Points `1 - 10^-k` on the positive real axis, `k = 1..=8`.
pub fn real_axis_refinement() -> Vec<Complex64> {
    (1..=8)
        .map(|k| Complex64::new(1.0 - 10f64.powi(-k), 0.0))
        .collect()
}
