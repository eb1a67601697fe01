//! Scalars, rings and sparse Laurent polynomials.

mod monomial;
mod parse;
mod polynomial;
mod ring;

pub use monomial::Monomial;

pub use parse::split_top_level;
pub use parse::{parse_poly, parse_poly_list};
pub use polynomial::{invert_unit, Polynomial};
pub use ring::Ring;
