//! Exact computation of harmonic-form spaces for almost Hermitian structures
//! on Lie algebras, at the level of left-invariant forms.
//!
//! Everything is computed over `ℚ` or `ℚ(i)`: no floating point is involved.
//! The usual entry point is [`suite::OperatorSuite::assemble`] followed by
//! [`harmonics::full_report`] and the check suites in [`verify`].

pub mod catalog;
pub mod cli;
pub mod exterior;
pub mod field;
pub mod harmonics;
pub mod linalg;
pub mod manifold;
pub mod report;
pub mod specfile;
pub mod suite;
pub mod verify;

use num_complex::Complex;
use num_rational::BigRational;

pub type Rational = BigRational;
/// Gaussian rationals `ℚ(i)`.
pub type Scalar = Complex<BigRational>;
pub type Matrix = linalg::MatrixOver<Scalar>;
pub type RealMatrix = linalg::MatrixOver<Rational>;
pub type Subspace = linalg::SubspaceOver<Scalar>;
pub type RealSubspace = linalg::SubspaceOver<Rational>;

pub use harmonics::{full_report, Family, HarmonicQuery, HarmonicReport};
pub use manifold::ManifoldSpec;
pub use suite::OperatorSuite;
pub use verify::{CheckResult, CheckStatus};
