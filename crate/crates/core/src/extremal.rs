//! Sharp and separating functions, truncated to a chosen degree.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::series::LaurentFunction;

/// Truncation used for the geometric-tail extremals unless told otherwise.
pub const DEFAULT_DEGREE: usize = 64;
/// Truncation of the exponential tail of `e^z / z`.
pub const EXP_DEGREE: usize = 30;

/// `c = sqrt(1 + alpha^2) - alpha`, the positive root of `c^2 + 2 alpha c - 1 = 0`.
pub fn theorem21_constant(alpha: f64) -> f64 {
    (1.0 + alpha * alpha).sqrt() - alpha
}

/// `f(z) = (1 + c z) / (z - c z^2)`, so `z f = (1 + c z)/(1 - c z)` and
/// `a_n = 2 c^(n+1)`.
pub fn theorem21_extremal(alpha: f64, degree: usize) -> Result<LaurentFunction> {
    if !(alpha >= 1.0 && alpha.is_finite()) {
        return Err(invalid(
            "alpha",
            format!("expected alpha >= 1, got {alpha}"),
        ));
    }
    if degree < 1 {
        return Err(invalid("degree", "expected degree >= 1"));
    }
    let c = theorem21_constant(alpha);
    let coeffs = (0..=degree)
        .scan(c, |pow, _| {
            let a = 2.0 * *pow;
            *pow *= c;
            Some(Complex64::new(a, 0.0))
        })
        .collect();
    LaurentFunction::from_coeffs(coeffs)
}

/// Sum of the dropped coefficient moduli, `sum_{n > degree} 2 c^(n+1)`.
pub fn theorem21_tail_bound(alpha: f64, degree: usize) -> f64 {
    let c = theorem21_constant(alpha);
    2.0 * c.powi(degree as i32 + 2) / (1.0 - c)
}

/// `d_n = sqrt(alpha^2 n^2 + 1) - alpha n`, the root in `(0, 1]` of
/// `1 - d^2 - 2 alpha n d = 0`.
pub fn theorem23_constant(alpha: f64, n: usize) -> f64 {
    let x = alpha * n as f64;
    (x * x + 1.0).sqrt() - x
}

/// `z f(z) = (1 + d_n z^n) / (1 - d_n z^n)`, whose tail is
/// `sum_{m>=1} 2 d_n^m z^(m n - 1)`.
pub fn theorem23_extremal(alpha: f64, n: usize, degree: usize) -> Result<LaurentFunction> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(invalid(
            "alpha",
            format!("expected alpha >= 0, got {alpha}"),
        ));
    }
    if n < 1 {
        return Err(invalid("n", "expected n >= 1"));
    }
    let d = theorem23_constant(alpha, n);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
    let mut pow = d;
    let mut index = n - 1;
    while index <= degree {
        coeffs[index] = Complex64::new(2.0 * pow, 0.0);
        pow *= d;
        index += n;
    }
    LaurentFunction::from_coeffs(coeffs)
}

/// `1/z + z^n / (n + 2)`.
pub fn remark1_witness(n: usize) -> Result<LaurentFunction> {
    if n < 1 {
        return Err(invalid("n", "expected n >= 1"));
    }
    LaurentFunction::monomial(n, Complex64::new(1.0 / (n as f64 + 2.0), 0.0))
}

/// `e^z / z = 1/z + sum_n z^n / (n+1)!`, truncated at `degree`.
pub fn mf_not_me_witness(degree: usize) -> Result<LaurentFunction> {
    if degree < 10 {
        return Err(invalid(
            "degree",
            format!("expected degree >= 10, got {degree}"),
        ));
    }
    let coeffs = (0..=degree)
        .scan(1.0f64, |fact, n| {
            *fact *= n as f64 + 1.0;
            Some(Complex64::new(1.0 / *fact, 0.0))
        })
        .collect();
    LaurentFunction::from_coeffs(coeffs)
}

/// `(1 - z)^2 / z = 1/z - 2 + z`.
pub fn starlike_not_mf_witness() -> LaurentFunction {
    LaurentFunction::from_real(&[-2.0, 1.0]).expect("finite coefficients")
}

/// Named constructors exposed on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremal {
    Thm21,
    Thm23,
    Rem1,
    Expz,
    Onemz2,
}

impl Extremal {
    pub const ALL: [Extremal; 5] = [
        Extremal::Thm21,
        Extremal::Thm23,
        Extremal::Rem1,
        Extremal::Expz,
        Extremal::Onemz2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Extremal::Thm21 => "thm21",
            Extremal::Thm23 => "thm23",
            Extremal::Rem1 => "rem1",
            Extremal::Expz => "expz",
            Extremal::Onemz2 => "onemz2",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Extremal::Thm21 => "(1 + c z)/(z - c z^2), c = sqrt(1 + alpha^2) - alpha; needs --alpha >= 1",
            Extremal::Thm23 => "z f = (1 + d z^n)/(1 - d z^n), d = sqrt(alpha^2 n^2 + 1) - alpha n; needs --alpha, --n",
            Extremal::Rem1 => "1/z + z^n/(n + 2); needs --n",
            Extremal::Expz => "e^z / z truncated (degree >= 10, default 30)",
            Extremal::Onemz2 => "(1 - z)^2 / z",
        }
    }

    /// Builds the function; `degree` defaults per constructor.
    pub fn build(self, alpha: f64, n: usize, degree: Option<usize>) -> Result<LaurentFunction> {
        match self {
            Extremal::Thm21 => theorem21_extremal(alpha, degree.unwrap_or(DEFAULT_DEGREE)),
            Extremal::Thm23 => theorem23_extremal(alpha, n, degree.unwrap_or(DEFAULT_DEGREE)),
            Extremal::Rem1 => remark1_witness(n),
            Extremal::Expz => mf_not_me_witness(degree.unwrap_or(EXP_DEGREE)),
            Extremal::Onemz2 => Ok(starlike_not_mf_witness()),
        }
    }
}

impl fmt::Display for Extremal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Extremal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Extremal::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| invalid("name", format!("unknown extremal `{s}`")))
    }
}
