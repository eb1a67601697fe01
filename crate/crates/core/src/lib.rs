//! Exact computations with Frobenius, Cartier operators and test ideals
//! over prime fields.

pub mod basis_change;
pub mod cartier;
pub mod error;
pub mod field;
pub mod fractal;
pub mod frobenius;
pub mod ideal;
pub mod poly;
pub mod thresholds;

pub use cartier::{CartierAlgebraSpec, MixedPair, RelativeChart, TauConfig};
pub use error::{Error, Result};
pub use field::{PrimeModulus, Scalar};
pub use ideal::Ideal;
pub use poly::{parse_poly, parse_poly_list, Monomial, Polynomial, Ring};
