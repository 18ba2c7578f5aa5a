//! Positivity certificates on S ∩ D̂: normalization, the δ/λ/ν chain, construction of
//! p = f − λΣs_i²g_i, Polya elevation, exact verification and degree budgets.

mod budget;
mod build;
mod certificate;
mod params;
mod system;

pub use budget::{degree_chain, theoretical_degree, BudgetInputs, BudgetMode, DegreeBudget};
pub use build::{build_certificate, estimate_fstar, CertifyOptions};
pub use certificate::{verify_certificate, verify_with_system, Certificate, CertificateJson, CheckResult, VerifyReport};
pub use params::{params_consistent, putinar_params, CertParams, CertParamsJson};
pub use system::{check_ball_containment, constraint_norm, normalize_system, BallCheck, BallStatus, SemialgSystem};
