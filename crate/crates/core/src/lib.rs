//! Numerical toolkit for meromorphic functions `f(z) = 1/z + sum a_n z^n`
//! on the punctured unit disc.
//!
//! The crate represents truncated series ([`LaurentFunction`]), decides
//! membership in the classes ME(alpha), MF(alpha), the meromorphic starlike
//! class and its negative-coefficient subclass by coefficient criteria and by
//! dense sampling ([`classes`], [`tme`]), builds the sharp and separating
//! functions ([`extremal`]), and checks the convolution, neighborhood and
//! partial-sum results ([`convolution`], [`partial_sums`]). The
//! [`harness`] runs those checks as named suites and writes JSON reports.

pub mod classes;
pub mod convolution;
pub mod error;
pub mod extremal;
pub mod harness;
pub mod partial_sums;
pub mod sampling;
pub mod series;
pub mod tme;

pub use classes::{ClassSpec, Family, MembershipVerdict, Status};
pub use error::{Error, Result};
pub use harness::{run_suite, Suite, SuiteParams, VerificationReport};
pub use num_complex::Complex64;
pub use series::{DiscGrid, LaurentFunction};
pub use tme::TmeFunction;
