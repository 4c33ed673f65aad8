//! Positive solutions of
//!
//! ```text
//! u''(t) + lambda a(t) f(u(t)) = 0,   0 < t < 1,
//! u'(0) = 0,   u(1) = alpha * int_0^eta u(s) ds,
//! ```
//!
//! with `0 < eta < 1`, `0 < alpha < 1/eta`, `a >= 0` and `f >= 0`.
//!
//! The crate evaluates the problem's Green's function and its cone bounds,
//! computes the weight constants `Lambda1`/`Lambda2` and the resulting
//! interval of `lambda` with a guaranteed positive solution, estimates the
//! growth limits `f0`/`finf`, and searches for a positive solution as a fixed
//! point of the integral operator, checked by an independent residual
//! verifier.
//!
//! ```
//! use conebvp::{constants, exprlang, kernel, quadrature::QuadratureSettings};
//!
//! let p = kernel::validate_params(2.0, 1.0 / 3.0).unwrap();
//! let a = exprlang::parse("1", "t").unwrap();
//! let c = constants::compute_constants(&p, &a, &QuadratureSettings::default()).unwrap();
//! assert!((c.lambda1 - 1.5).abs() < 1e-12);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod constants;
pub mod error;
pub mod exprlang;
pub mod kernel;
pub mod problem;
pub mod quadrature;
pub mod solver;
pub mod verifier;

pub use constants::{AsymptoticValue, LambdaConstants, LambdaInterval};
pub use error::{Error, Result};
pub use exprlang::Expression;
pub use kernel::BvpParams;
pub use problem::BvpProblem;
pub use quadrature::QuadratureSettings;
pub use solver::{GridFunction, SolveOutcome, SolveSettings, SolveStatus};
pub use verifier::VerificationReport;
