//! Tables of integrals of products of Hermite polynomials.
//!
//! Three normalized integral families are covered:
//!
//! * `W(i,j,k,l)`, four Hermite polynomials under `exp(-2x^2)`,
//! * `Y(i,j,k,l)`, products of two derivative brackets `H_i' H_j - H_i H_j'`
//!   under `exp(-2x^2)`,
//! * `U(i,j,k,l,m,n)`, six Hermite polynomials under `exp(-3x^2)`.
//!
//! W and U tables are generated level by level with factorial-free
//! recurrences ([`recursion`]); Y is a four-term combination of W values.
//! The [`oracle`] module evaluates the same integrals independently with
//! exact rational arithmetic and with Gauss-Hermite quadrature.
//!
//! ```
//! use hpint::{build_w_table, IndexTuple};
//!
//! let w = build_w_table(2).unwrap();
//! let v = w.value(&IndexTuple::four([1, 1, 0, 0])).unwrap().value;
//! assert!((v - 0.199_471_140_200_716_35).abs() < 1e-15);
//! ```

pub mod ci;
pub mod cli;
pub mod index;
pub mod oracle;
pub mod recursion;
pub mod tableio;

pub use index::{canonicalize, parity_nonzero, Arity, CanonicalKey, IndexSpace, IndexTuple, IntegralKind};
pub use recursion::{
    build_table, build_u_table, build_w_table, u_value, w_value, y_value, BuildOptions, IntegralTable, QueryResult,
    ZeroReason,
};
