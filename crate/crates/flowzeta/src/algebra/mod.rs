//! Field-generic algebra kernel: matrices, polynomials in `u`, truncated
//! series in `z`, polynomial determinants and Smith normal form.

pub mod matrix;
pub mod poly;
pub mod polymat;
pub mod series;
pub mod snf;

pub use matrix::Matrix;
pub use poly::UPoly;
pub use polymat::{poly_matrix_det, PolyMatrix};
pub use series::ZSeries;
pub use snf::{smith_normal_form, IntMatrix, Smith};

/// Precondition failures of the series operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("constant term precondition violated: {0}")]
    ConstantTerm(&'static str),
}
