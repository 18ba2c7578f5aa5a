//! Distance functions F, G and E, the CQC data σ_J and c₂, the E/G constant and its
//! condition-number form, KKT diagnostics at projections, and empirical exponent fits.
//!
//! Everything here is floating point except F, G and the certificate-derived constant,
//! which are exact.

mod cqc;
mod distance;
mod fit;
mod kkt;
mod report;

pub use cqc::{active_set, hessian_bound_c2, jacobian, jacobian_sigma, sigma_j, SigmaReport};
pub use distance::{
    eval_e_distance, eval_f_distance, eval_f_distance_f64, eval_g_distance, eval_g_distance_f64, DistanceSample, Projection, Projector,
};
pub use fit::{empirical_loja_fit, LojaFit, LojaPair};
pub use kkt::{kkt_certificate, KKTChecks, KKTData};
pub use report::{
    cert_loja_constant, check_f_le_cg, condition_bound, eckart_young_witness, exponent_formula_bounds, g_star, loja_eg_constant, loja_report,
    AffinePerturbation, CertLojaConstant, ConditionBound, ExponentBound, GStar, LojaOptions, LojaReport, Objective, SampleChecks,
    SingularWitness,
};
