//! Exact positivity certificates on compact semi-algebraic sets.
//!
//! Polynomials are handled exactly over the rationals in the monomial basis and in the
//! Bernstein basis of a simplex D̂ containing the unit ball. A certificate writes
//! f = Σ p_α B_{m,α} + λ Σ s_i² g_i with p_α ≥ 0, which proves f ≥ 0 on S ∩ D̂ and can be
//! re-checked by exact expansion. The `loja` module estimates the Łojasiewicz data that
//! governs the certificate degree.

pub mod approx;
pub mod certify;
pub mod cli;
pub mod error;
pub mod grid;
pub mod loja;
pub mod numfmt;
pub mod polyalg;
pub mod rational;

pub use error::{Error, Result};
