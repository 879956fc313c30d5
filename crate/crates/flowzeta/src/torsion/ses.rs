//! Multiplicativity of torsion in short exact sequences of based complexes.

use crate::scalar::Scalar;

use super::{acyclic_torsion, BasedChainComplex, TorsionError};

/// Torsions of `A ⊂ B` and `C = B / A` and whether `τ(B) = τ(A) τ(C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SesCheck<S> {
    pub sub: S,
    pub total: S,
    pub quotient: S,
    pub holds: bool,
}

/// Checks `τ(B) = τ(A) τ(B/A)` for the subcomplex `A` spanned by the cells
/// `sub[k]` of `B`; the quotient is spanned by the remaining cells, so the
/// sequence `0 → A → B → B/A → 0` is basis compatible. `A` and `B/A` must
/// be acyclic.
pub fn ses_torsion_check<S: Scalar>(b: &BasedChainComplex<S>, sub: &[Vec<usize>], tol: f64) -> Result<SesCheck<S>, TorsionError> {
    if sub.len() != b.dims().len() || sub.iter().zip(b.dims()).any(|(s, &n)| s.iter().any(|&i| i >= n)) {
        return Err(TorsionError::Shape("subcomplex selection does not match the complex".into()));
    }
    if !b.is_closed_selection(sub, tol) {
        return Err(TorsionError::NotSubcomplex);
    }
    let rest: Vec<Vec<usize>> = sub.iter().zip(b.dims()).map(|(s, &n)| (0..n).filter(|i| !s.contains(i)).collect()).collect();
    let a = b.select(sub);
    let c = b.select(&rest);
    let ta = acyclic_torsion(&a, tol)?;
    let tc = acyclic_torsion(&c, tol)?;
    let tb = acyclic_torsion(b, tol)?;
    let holds = tb.approx_eq(&(ta.clone() * tc.clone()), tol);
    Ok(SesCheck { sub: ta, total: tb, quotient: tc, holds })
}
