//! Reference values computed without the recursion.
//!
//! Two independent routes are provided:
//!
//! * [`exact`]: multiply the Hermite polynomials with big-integer
//!   coefficients, integrate against the Gaussian moment formula and keep
//!   the normalization symbolic; the result is rendered with a 200-bit
//!   significand.
//! * [`quadrature`]: Gauss-Hermite quadrature after rescaling the Gaussian,
//!   exact for these polynomial integrands up to rounding.
//!
//! Nothing here touches [`crate::recursion`].

pub mod bigfloat;
pub mod exact;
pub mod poly;
pub mod quadrature;

use thiserror::Error;

use crate::index::{IndexError, IndexTuple};

pub use bigfloat::HighPrecisionFloat;
pub use exact::{exact_u, exact_w, exact_y, ExactOracle, ExactValue};
pub use poly::{gaussian_weighted_integral, hermite_poly, poly_mul, IntPolynomial};
pub use quadrature::{gauss_hermite, quadrature_value, quadrature_value_auto, GaussHermite};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("Gaussian weight exp(-a x^2) needs a > 0, got {0}")]
    BadWeight(u32),
    #[error("quadrature needs at least {required} nodes, got {given}")]
    InsufficientNodes { required: usize, given: usize },
    #[error("{tuple} exceeds the oracle's max degree {max_degree}")]
    DegreeOutOfRange { tuple: IndexTuple, max_degree: u32 },
    #[error(transparent)]
    Index(#[from] IndexError),
}

/// `|approx - exact| / |exact|`, or `|approx|` when the exact value is zero.
pub fn relative_error(approx: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        approx.abs()
    } else {
        ((approx - exact) / exact).abs()
    }
}
