//! Reidemeister torsion of a based chain complex.
//!
//! For each degree `k` pick cells `R_k` whose boundaries form a basis of
//! `im ∂_k`. The rows `∂(R_{k+1})`, the homology representatives `h_k` and
//! the unit vectors of `R_k` then form a basis of `C_k`; with `M_k` the
//! matrix of these rows in cell coordinates,
//! `τ(C) = ∏_k |det M_k|^{(-1)^k}`.
//! Under this convention `0 → C_1 → C_0 → 0` with matrix `A` has torsion
//! `|det A|` and `0 → C_2 → C_1 → 0` has `|det A|^{-1}`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::Matrix;
use crate::scalar::Scalar;

use super::{BasedChainComplex, TorsionError};

/// Homology representatives per degree, as row vectors in cell coordinates.
/// Degrees beyond the end of the list, and empty entries, mean "acyclic here".
pub type HomologyBases<S> = Vec<Vec<Vec<S>>>;

/// The order in which the cells of each degree are tried when choosing
/// the lifts `R_k`; `rows[k]` is a permutation of the cells of degree `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotOrder {
    rows: Vec<Vec<usize>>,
}

impl PivotOrder {
    pub fn natural<S: Scalar>(c: &BasedChainComplex<S>) -> Self {
        PivotOrder { rows: c.dims().iter().map(|&n| (0..n).collect()).collect() }
    }

    pub fn reversed<S: Scalar>(c: &BasedChainComplex<S>) -> Self {
        PivotOrder { rows: c.dims().iter().map(|&n| (0..n).rev().collect()).collect() }
    }

    pub fn shuffled<S: Scalar>(c: &BasedChainComplex<S>, rng: &mut impl Rng) -> Self {
        let mut order = Self::natural(c);
        for r in &mut order.rows {
            r.shuffle(rng);
        }
        order
    }

    /// An explicit order; each entry must be a permutation of `0..dims[k]`.
    pub fn from_rows(rows: Vec<Vec<usize>>) -> Self {
        PivotOrder { rows }
    }
}

/// Cells (rows of `b`, tried in `order`) whose rows are linearly independent
/// and span the row space of `b`. Float backends pick the largest remaining
/// entry as pivot and treat magnitudes up to `tol` as zero.
pub fn independent_rows<S: Scalar>(b: &Matrix<S>, order: &[usize], tol: f64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<S>)> = Vec::new();
    let mut chosen = Vec::new();
    for &r in order {
        let mut v = b.row(r).to_vec();
        for (pc, bv) in &basis {
            if v[*pc].is_zero() {
                continue;
            }
            let f = v[*pc].clone();
            for (x, y) in v.iter_mut().zip(bv) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        let pivot = if S::EXACT {
            v.iter().position(|x| !x.is_zero())
        } else {
            (0..v.len()).max_by(|&i, &j| v[i].magnitude().total_cmp(&v[j].magnitude())).filter(|&i| !v[i].near_zero(tol))
        };
        let Some(pc) = pivot else { continue };
        let inv = S::one() / v[pc].clone();
        let v = v.into_iter().map(|x| x * inv.clone()).collect();
        basis.push((pc, v));
        chosen.push(r);
    }
    chosen
}

/// Torsion with homology representatives `omega` and the natural pivot order.
pub fn reidemeister_torsion<S: Scalar>(c: &BasedChainComplex<S>, omega: &HomologyBases<S>, tol: f64) -> Result<S, TorsionError> {
    reidemeister_torsion_with(c, omega, &PivotOrder::natural(c), tol)
}

/// Torsion of a complex that must be acyclic.
pub fn acyclic_torsion<S: Scalar>(c: &BasedChainComplex<S>, tol: f64) -> Result<S, TorsionError> {
    acyclic_torsion_with(c, &PivotOrder::natural(c), tol)
}

pub fn acyclic_torsion_with<S: Scalar>(c: &BasedChainComplex<S>, order: &PivotOrder, tol: f64) -> Result<S, TorsionError> {
    match reidemeister_torsion_with(c, &Vec::new(), order, tol) {
        Err(TorsionError::MissingHomologyBasis(k)) => Err(TorsionError::NotAcyclic(k)),
        other => other,
    }
}

/// Torsion with an explicit pivot order.
pub fn reidemeister_torsion_with<S: Scalar>(
    c: &BasedChainComplex<S>,
    omega: &HomologyBases<S>,
    order: &PivotOrder,
    tol: f64,
) -> Result<S, TorsionError> {
    c.check_boundary_square(tol)?;
    let top = c.top();
    if order.rows.len() != top + 1 || order.rows.iter().zip(c.dims()).any(|(r, &n)| !is_permutation(r, n)) {
        return Err(TorsionError::Shape("pivot order is not a permutation of the cells".into()));
    }
    // lifts[k] = R_k, empty for k = 0
    let lifts: Vec<Vec<usize>> = (0..=top)
        .map(|k| c.boundary_ref(k).map_or_else(Vec::new, |b| independent_rows(b, &order.rows[k], tol)))
        .collect();
    let empty = Vec::new();
    let mut tau = S::one();
    for k in 0..=top {
        let n = c.dim(k);
        let upper: &[usize] = if k < top { &lifts[k + 1] } else { &[] };
        let betti = n - lifts[k].len() - upper.len();
        let h = omega.get(k).unwrap_or(&empty);
        if betti > 0 && h.is_empty() {
            return Err(TorsionError::MissingHomologyBasis(k));
        }
        if h.len() != betti {
            return Err(TorsionError::HomologyBasisSize { degree: k, expected: betti, got: h.len() });
        }
        if h.iter().any(|v| v.len() != n) {
            return Err(TorsionError::Shape(format!("homology vector of wrong length in degree {k}")));
        }
        if let Some(b) = c.boundary_ref(k) {
            let hm = Matrix::from_fn(h.len(), n, |i, j| h[i][j].clone());
            if !(&hm * b).is_zero(tol) {
                return Err(TorsionError::NotCycle(k));
            }
        }
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(n);
        if let Some(b) = c.boundary_ref(k + 1) {
            rows.extend(upper.iter().map(|&r| b.row(r).to_vec()));
        }
        rows.extend(h.iter().cloned());
        rows.extend(lifts[k].iter().map(|&r| (0..n).map(|j| if j == r { S::one() } else { S::zero() }).collect()));
        let det = Matrix::from_fn(n, n, |i, j| rows[i][j].clone()).det(tol);
        if det.near_zero(tol) {
            return Err(TorsionError::DegenerateHomologyBasis(k));
        }
        let a = det.abs_value();
        tau = if k % 2 == 0 { tau * a } else { tau / a };
    }
    Ok(tau)
}

fn is_permutation(r: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    r.len() == n && r.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn two_term(degree: usize, a: Matrix<Q>) -> BasedChainComplex<Q> {
        let n = a.rows();
        let mut dims = vec![0; degree + 1];
        dims[degree] = n;
        dims[degree - 1] = n;
        let boundaries = (1..=degree).map(|k| if k == degree { a.clone() } else { Matrix::zeros(dims[k], dims[k - 1]) }).collect();
        BasedChainComplex::new(dims, boundaries).unwrap()
    }

    #[test]
    fn single_map_by_degree() {
        let a = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(1), q(3)]]);
        assert_eq!(acyclic_torsion(&two_term(1, a.clone()), 0.0).unwrap(), q(5));
        assert_eq!(acyclic_torsion(&two_term(2, a.clone()), 0.0).unwrap(), Q::new(1.into(), 5.into()));
        assert_eq!(acyclic_torsion(&two_term(3, a), 0.0).unwrap(), q(5));
    }

    #[test]
    fn missing_homology_is_reported() {
        let c = two_term(1, Matrix::from_rows(vec![vec![q(0)]]));
        assert_eq!(acyclic_torsion(&c, 0.0), Err(TorsionError::NotAcyclic(0)));
        let omega = vec![vec![vec![q(1)]], vec![vec![q(1)]]];
        assert_eq!(reidemeister_torsion(&c, &omega, 0.0).unwrap(), q(1));
    }

    #[test]
    fn pivot_choice_does_not_matter() {
        // 0 → Q² → Q³ → Q → 0, acyclic
        let d2 = Matrix::from_rows(vec![vec![q(1), q(7), q(0)], vec![q(0), q(2), q(1)]]);
        let d1 = Matrix::from_rows(vec![vec![q(7)], vec![q(-1)], vec![q(2)]]);
        assert!((&d2 * &d1).is_zero(0.0));
        let c = BasedChainComplex::new(vec![1, 3, 2], vec![d1, d2]).unwrap();
        let a = acyclic_torsion(&c, 0.0).unwrap();
        let b = acyclic_torsion_with(&c, &PivotOrder::reversed(&c), 0.0).unwrap();
        assert_eq!(a, b);
    }
}
