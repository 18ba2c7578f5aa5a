//! Exact multivariate polynomials in the monomial basis and in the Bernstein basis of the
//! rationalized simplex D̂.

mod bernstein;
mod domain;
mod index;
pub mod json;
mod monomial;

pub use bernstein::{
    bernstein_eval, bernstein_to_mono, bnorm, elevate, linear_combine, mono_to_bernstein, multiply, BernsteinPoly,
    FloatEvaluator,
};
pub(crate) use bernstein::Scaled;
pub use domain::SimplexDomain;
pub(crate) use index::Layout;
pub use index::MultiIndex;
pub use monomial::{FloatPoly, MonomialPoly};
