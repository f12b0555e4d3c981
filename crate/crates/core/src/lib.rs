//! Character sums over finite fields.
//!
//! Exact arithmetic in `F_q` and its extensions, dense polynomials, brute-force
//! additive and multiplicative sum oracles, Artin-Schreier reduction and
//! invariance decompositions, local data at infinity, and the bound and
//! main-term formulas for translation- and homothety-invariant polynomials.

pub mod arith;
pub mod boundbook;
pub mod charsum;
pub mod error;
pub mod ffield;
pub mod invariance;
pub mod localdata;
pub mod poly;
mod powbasis;

pub use boundbook::{BoundKind, BoundReport, Hypothesis};
pub use charsum::{AdditiveChar, MultChar, SumOptions};
pub use error::{Error, Result};
pub use ffield::{make_ext, make_field, ExtCtx, Field, FieldCtx, FqElem};
pub use poly::{Parity, Poly, Roots};

/// Polynomial over the base field `k`.
pub type PolyK = Poly<FieldCtx>;
/// Polynomial over an extension `k_r`.
pub type PolyKr = Poly<ExtCtx>;

/// A character value or character sum.
pub type CharValue = num_complex::Complex<f64>;
