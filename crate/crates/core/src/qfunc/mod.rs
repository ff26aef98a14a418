//! q-special functions: the two q-exponentials, the q-derivative, the
//! q,2-gamma function with its bridge factor `c(a, t)`, and the exact
//! coefficients of the q-exponential addition decompositions.

mod context;
mod decomposition;
mod exp;
mod gamma;
mod lambda;

pub use context::{QContext, DEFAULT_MAX_TERMS, DEFAULT_TOL};
pub use decomposition::{
    verify_addition_decomposition, CoefficientMismatch, DecompositionReport,
    MAX_DECOMPOSITION_ORDER,
};
pub use exp::{qderivative, qexp, qpoch_inf, qpow_ratio, ExpForm, ExpKind};
pub use gamma::{c_factor, gamma_q2_closed};
pub use lambda::{
    exp_coefficient, lambda_coeff, lambda_parts, lambda_summand, LambdaKind, LambdaTable,
};
