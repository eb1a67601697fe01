//! Ideals and their canonical arithmetic via reduced Gröbner bases.

mod groebner;
#[allow(clippy::module_inception)]
mod ideal;

pub use groebner::{TermOrder, DEFAULT_SPAIR_BUDGET};
pub use ideal::{div_exact, hash_text, Ideal};
