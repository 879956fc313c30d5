//! The flow zeta function via the Markov correction.

use crate::algebra::UPoly;
use crate::model::SymbolicFlowModel;
use crate::scalar::Scalar;

use super::local::{reduce, xi_poly};
use super::markov::zeta_markov_closed_form;
use super::ZetaError;

/// Reduced rational function in `u` with its behaviour at `u = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowZeta<S> {
    pub numerator: UPoly<S>,
    pub denominator: UPoly<S>,
    /// Order of vanishing at `u = 1` (negative for a pole).
    pub order_at_one: i64,
    /// Value of `ζ / (u - 1)^order` at `u = 1`.
    pub leading: S,
}

/// Product of the correction factors: `ξ(T_γ, ρ(γ))` over `Γˢ` and, unless
/// punctured, `ξ(T_γ, ε_γ ρ(γ))` over `Γᵘ`.
pub fn correction_polynomial<S: Scalar>(model: &SymbolicFlowModel<S>, punctured: bool) -> UPoly<S> {
    let tol = model.tolerance();
    let mut den = UPoly::one();
    for o in &model.gamma_s {
        den = &den * &xi_poly(model.return_time(&o.cycle), &model.holonomy(&o.cycle), tol);
    }
    if !punctured {
        for o in &model.gamma_u {
            den = &den * &xi_poly(model.return_time(&o.cycle), &model.epsilon_holonomy(&o.cycle), tol);
        }
    }
    den
}

/// `ζ_{φ,ρ} = det(I - G(u)) / (∏_{Γˢ} ξ(T, ρ) ∏_{Γᵘ} ξ(T, ερ))`, reduced, with its
/// order of vanishing and leading value at `u = 1`. The punctured variant
/// omits the `Γᵘ` factors.
pub fn zeta_flow_rational<S: Scalar>(model: &SymbolicFlowModel<S>, punctured: bool) -> Result<FlowZeta<S>, ZetaError> {
    let tol = model.tolerance();
    let num = zeta_markov_closed_form(model);
    let den = correction_polynomial(model, punctured);
    if den.near_zero(tol) {
        return Err(ZetaError::ZeroCorrection);
    }
    let (numerator, denominator) = if num.near_zero(tol) { (UPoly::zero(), UPoly::one()) } else { reduce(&num, &den, tol) };
    let (order_at_one, leading) = match numerator.deflate_at_one(tol) {
        None => (i64::MAX, S::zero()),
        Some((a, va)) => {
            let (b, vb) = denominator.deflate_at_one(tol).ok_or(ZetaError::ZeroCorrection)?;
            (a as i64 - b as i64, va / vb)
        }
    };
    Ok(FlowZeta { numerator, denominator, order_at_one, leading })
}
