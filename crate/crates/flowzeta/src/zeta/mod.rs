//! Twisted zeta functions of symbolic flows: local factors, transfer
//! matrices, Euler products, flat-trace determinants and the flow zeta.

mod flat;
mod flow;
mod local;
mod markov;

pub use flat::{
    abs_det_i_minus_dt, exterior_trace, flat_determinant_series, flat_determinants, flat_trace_sums, flat_trace_sums_all,
    markov_ratio_series, word_sign_identity,
};
pub use flow::{correction_polynomial, zeta_flow_rational, FlowZeta};
pub use local::{char_poly_reversed, local_zeta_factor, reduce, xi_poly, LocalFactor, Mode};
pub use markov::{
    det_i_minus_h, det_i_minus_zh, euler_product_at_one, euler_product_from_orbits, euler_product_series, h_matrix, log_series_from_word_sums,
    markov_determinant_series, periodic_word_sums, periodic_word_sums_brute, transfer_matrix, zeta_markov_closed_form,
};

use crate::algebra::AlgebraError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ZetaError {
    #[error("edge '{0}' has no derivative data")]
    MissingDerivative(String),
    #[error("edge '{0}' has non-hyperbolic derivative data")]
    NonHyperbolic(String),
    #[error("flat determinants are defined for k = 0, 1, 2, not {0}")]
    Degree(usize),
    #[error("correction denominator vanishes identically")]
    ZeroCorrection,
    #[error(transparent)]
    Series(#[from] AlgebraError),
}
