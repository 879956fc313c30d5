//! Based chain complexes over a scalar field and over the integers.
//!
//! Boundaries use the row-vector convention: `boundary(k)` has one row per
//! cell of degree `k` and one column per cell of degree `k - 1`, so
//! `∂∂ = 0` reads `boundary(k) * boundary(k - 1) = 0`.

use num_rational::BigRational;

use crate::algebra::{IntMatrix, Matrix};
use crate::scalar::Scalar;

use super::TorsionError;

/// A finite chain complex `C_top → ⋯ → C_0` with distinguished cell bases.
#[derive(Clone, Debug, PartialEq)]
pub struct BasedChainComplex<S> {
    dims: Vec<usize>,
    /// `boundaries[k - 1]` is `∂_k : C_k → C_{k-1}`.
    boundaries: Vec<Matrix<S>>,
    labels: Vec<Vec<String>>,
}

impl<S: Scalar> BasedChainComplex<S> {
    /// Builds a complex from its boundary matrices `∂_1, …, ∂_top`, checking
    /// shapes. `dims` has one entry per degree `0..=top`.
    pub fn new(dims: Vec<usize>, boundaries: Vec<Matrix<S>>) -> Result<Self, TorsionError> {
        check_shapes(&dims, boundaries.iter().map(|b| (b.rows(), b.cols())))?;
        let labels = dims.iter().enumerate().map(|(k, &n)| (0..n).map(|i| format!("c{k}_{i}")).collect()).collect();
        Ok(BasedChainComplex { dims, boundaries, labels })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        assert!(labels.len() == self.dims.len() && labels.iter().zip(&self.dims).all(|(l, &n)| l.len() == n));
        self.labels = labels;
        self
    }

    /// Highest degree.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn labels(&self, k: usize) -> &[String] {
        &self.labels[k]
    }

    /// `∂_k`; a zero-sized matrix outside `1..=top`.
    pub fn boundary(&self, k: usize) -> Matrix<S> {
        if k >= 1 && k <= self.top() {
            self.boundaries[k - 1].clone()
        } else {
            Matrix::zeros(self.dim(k), if k == 0 { 0 } else { self.dim(k - 1) })
        }
    }

    pub(crate) fn boundary_ref(&self, k: usize) -> Option<&Matrix<S>> {
        (k >= 1 && k <= self.top()).then(|| &self.boundaries[k - 1])
    }

    /// Largest entry of `∂_{k} ∂_{k-1}` over all `k`.
    pub fn boundary_square_deviation(&self) -> f64 {
        (2..=self.top())
            .map(|k| {
                let p = &self.boundaries[k - 1] * &self.boundaries[k - 2];
                p.max_deviation(&Matrix::zeros(p.rows(), p.cols()))
            })
            .fold(0.0, f64::max)
    }

    /// Fails with the first degree where `∂∂ ≠ 0`.
    pub fn check_boundary_square(&self, tol: f64) -> Result<(), TorsionError> {
        for k in 2..=self.top() {
            if !(&self.boundaries[k - 1] * &self.boundaries[k - 2]).is_zero(tol) {
                return Err(TorsionError::BoundarySquare(k));
            }
        }
        Ok(())
    }

    pub fn rank_of_boundary(&self, k: usize, tol: f64) -> usize {
        self.boundary_ref(k).map_or(0, |b| b.rank(tol))
    }

    /// Betti numbers over the scalar field.
    pub fn betti(&self, tol: f64) -> Vec<usize> {
        (0..=self.top())
            .map(|k| self.dims[k] - self.rank_of_boundary(k, tol) - self.rank_of_boundary(k + 1, tol))
            .collect()
    }

    pub fn is_acyclic(&self, tol: f64) -> bool {
        self.betti(tol).iter().all(|&b| b == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// The complex spanned by the listed cells in each degree: a subcomplex
    /// when the selection is closed under `∂`, a quotient when its
    /// complement is. Boundary terms on unselected cells are dropped.
    pub fn select(&self, cells: &[Vec<usize>]) -> Self {
        assert_eq!(cells.len(), self.dims.len(), "one cell list per degree");
        let dims = cells.iter().map(Vec::len).collect();
        let boundaries = (1..=self.top()).map(|k| self.boundaries[k - 1].submatrix(&cells[k], &cells[k - 1])).collect();
        let labels = cells.iter().enumerate().map(|(k, c)| c.iter().map(|&i| self.labels[k][i].clone()).collect()).collect();
        BasedChainComplex { dims, boundaries, labels }
    }

    /// True when the boundary of every selected cell only involves selected cells.
    pub fn is_closed_selection(&self, cells: &[Vec<usize>], tol: f64) -> bool {
        (1..=self.top()).all(|k| {
            let b = &self.boundaries[k - 1];
            cells[k].iter().all(|&i| (0..b.cols()).all(|j| cells[k - 1].contains(&j) || b[(i, j)].near_zero(tol)))
        })
    }

    /// Rewrites the complex in new bases: row `i` of `change[k]` gives the
    /// `i`-th new basis vector of `C_k` in old coordinates.
    pub fn change_basis(&self, change: &[Matrix<S>], tol: f64) -> Result<Self, TorsionError> {
        assert_eq!(change.len(), self.dims.len(), "one basis change per degree");
        let inverses = change
            .iter()
            .enumerate()
            .map(|(k, u)| u.inverse(tol).ok_or(TorsionError::SingularBasisChange(k)))
            .collect::<Result<Vec<_>, _>>()?;
        let boundaries = (1..=self.top()).map(|k| &(&change[k] * &self.boundaries[k - 1]) * &inverses[k - 1]).collect();
        Ok(BasedChainComplex { dims: self.dims.clone(), boundaries, labels: self.labels.clone() })
    }

    /// Direct sum, degreewise, with the cells of `self` first.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let top = self.top().max(other.top());
        let dims: Vec<usize> = (0..=top).map(|k| self.dim(k) + other.dim(k)).collect();
        let boundaries = (1..=top)
            .map(|k| {
                let mut b = Matrix::zeros(dims[k], dims[k - 1]);
                if let Some(x) = self.boundary_ref(k) {
                    b.add_block(0, 0, x);
                }
                if let Some(y) = other.boundary_ref(k) {
                    b.add_block(self.dim(k), self.dim(k - 1), y);
                }
                b
            })
            .collect();
        let labels = (0..=top)
            .map(|k| {
                let mut l: Vec<String> = self.labels.get(k).cloned().unwrap_or_default();
                l.extend(other.labels.get(k).cloned().unwrap_or_default());
                l
            })
            .collect();
        BasedChainComplex { dims, boundaries, labels }
    }
}

/// An integer chain complex with cell bases, in the same convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntComplex {
    dims: Vec<usize>,
    boundaries: Vec<IntMatrix>,
    labels: Vec<Vec<String>>,
}

impl IntComplex {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, TorsionError> {
        check_shapes(&dims, boundaries.iter().map(|b| (b.rows(), b.cols())))?;
        let labels = dims.iter().enumerate().map(|(k, &n)| (0..n).map(|i| format!("c{k}_{i}")).collect()).collect();
        Ok(IntComplex { dims, boundaries, labels })
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Self {
        assert!(labels.len() == self.dims.len() && labels.iter().zip(&self.dims).all(|(l, &n)| l.len() == n));
        self.labels = labels;
        self
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    pub fn labels(&self, k: usize) -> &[String] {
        &self.labels[k]
    }

    /// `∂_k`; a zero-sized matrix outside `1..=top`.
    pub fn boundary(&self, k: usize) -> IntMatrix {
        if k >= 1 && k <= self.top() {
            self.boundaries[k - 1].clone()
        } else {
            IntMatrix::zeros(self.dim(k), if k == 0 { 0 } else { self.dim(k - 1) })
        }
    }

    pub fn check_boundary_square(&self) -> Result<(), TorsionError> {
        for k in 2..=self.top() {
            if !(&self.boundaries[k - 1] * &self.boundaries[k - 2]).is_zero() {
                return Err(TorsionError::BoundarySquare(k));
            }
        }
        Ok(())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }

    /// The same complex over the rationals.
    pub fn to_rational(&self) -> BasedChainComplex<BigRational> {
        BasedChainComplex {
            dims: self.dims.clone(),
            boundaries: self.boundaries.iter().map(IntMatrix::to_rational).collect(),
            labels: self.labels.clone(),
        }
    }

    /// See [`BasedChainComplex::select`].
    pub fn select(&self, cells: &[Vec<usize>]) -> Self {
        assert_eq!(cells.len(), self.dims.len(), "one cell list per degree");
        IntComplex {
            dims: cells.iter().map(Vec::len).collect(),
            boundaries: (1..=self.top()).map(|k| self.boundaries[k - 1].submatrix(&cells[k], &cells[k - 1])).collect(),
            labels: cells.iter().enumerate().map(|(k, c)| c.iter().map(|&i| self.labels[k][i].clone()).collect()).collect(),
        }
    }
}

fn check_shapes(dims: &[usize], shapes: impl ExactSizeIterator<Item = (usize, usize)>) -> Result<(), TorsionError> {
    if dims.is_empty() || shapes.len() + 1 != dims.len() {
        return Err(TorsionError::Shape("need one boundary per degree above 0".into()));
    }
    for (i, (r, c)) in shapes.enumerate() {
        let k = i + 1;
        if r != dims[k] || c != dims[k - 1] {
            return Err(TorsionError::Shape(format!("boundary {k} is {r}x{c}, expected {}x{}", dims[k], dims[k - 1])));
        }
    }
    Ok(())
}

/// The twisted complex of the circle with one vertex and one edge and
/// monodromy `a`: `∂ e = (a - I) · pt`.
pub fn circle_complex<S: Scalar>(a: &Matrix<S>) -> BasedChainComplex<S> {
    let m = a.rows();
    let d = a - &Matrix::identity(m);
    BasedChainComplex::new(vec![m, m], vec![d]).expect("square monodromy")
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = BigRational;

    #[test]
    fn shapes_are_checked() {
        let bad = BasedChainComplex::<Q>::new(vec![1, 2], vec![Matrix::zeros(1, 2)]);
        assert!(matches!(bad, Err(TorsionError::Shape(_))));
    }

    #[test]
    fn select_and_sum() {
        let a = circle_complex(&Matrix::<Q>::scalar(1, Q::from_integer((-1).into())));
        let s = a.direct_sum(&a);
        assert_eq!(s.dims(), &[2, 2]);
        assert_eq!(s.select(&[vec![1], vec![1]]), a);
        assert!(s.is_closed_selection(&[vec![0], vec![0]], 0.0));
        assert_eq!(s.euler_characteristic(), 0);
    }
}
