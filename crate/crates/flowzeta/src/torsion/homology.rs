//! Integer homology via Smith normal form and canonical homology bases.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{smith_normal_form, IntMatrix};

use super::{reidemeister_torsion, HomologyBases, IntComplex, TorsionError};

/// `H_k ≅ ℤ^betti ⊕ ⨁ ℤ/t` for the listed invariant factors `t > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, t| a * t)
    }

    pub fn is_infinite_cyclic(&self) -> bool {
        self.betti == 1 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".into()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology of every degree, from the ranks and invariant factors of the boundaries.
pub fn complex_homology(c: &IntComplex) -> Result<Vec<HomologyGroup>, TorsionError> {
    c.check_boundary_square()?;
    let snfs: Vec<_> = (0..=c.top() + 1).map(|k| smith_normal_form(&c.boundary(k))).collect();
    Ok((0..=c.top())
        .map(|k| HomologyGroup { betti: c.dim(k) - snfs[k].rank() - snfs[k + 1].rank(), torsion: snfs[k + 1].torsion() })
        .collect())
}

/// Order of `H_1` when it is finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum H1Order {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for H1Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            H1Order::Finite(n) => write!(f, "{n}"),
            H1Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// `|H_1|`: the product of the invariant factors when the first Betti number vanishes.
pub fn h1_order(c: &IntComplex) -> Result<H1Order, TorsionError> {
    let h = complex_homology(c)?;
    let h1 = h.get(1).cloned().unwrap_or(HomologyGroup { betti: 0, torsion: Vec::new() });
    Ok(if h1.betti > 0 { H1Order::Infinite } else { H1Order::Finite(h1.torsion_order()) })
}

/// A `ℤ`-basis of the free part of `H_k`, as integer cycles.
///
/// The rows of `U` past the rank of `∂_k` in the Smith form `U ∂_k V = D`
/// are a basis `K` of the cycles. Writing `∂_{k+1} = Y K` and taking the
/// Smith form `U' Y V' = D'`, the rows of `V'^{-1} K` past the rank of `Y`
/// project to a basis of `H_k / torsion`.
pub fn integral_homology_basis(c: &IntComplex, k: usize) -> Vec<Vec<BigInt>> {
    let n = c.dim(k);
    let lower = smith_normal_form(&c.boundary(k));
    let r = lower.rank();
    let kernel: Vec<Vec<BigInt>> = (r..n).map(|i| lower.u.row(i).to_vec()).collect();
    if kernel.is_empty() {
        return Vec::new();
    }
    let upper = c.boundary(k + 1);
    // Cycle coordinates: x = y U, so y = x U^{-1}, and the entries of y past r are the K-coordinates.
    let coords = &upper * &lower.u_inv;
    let y = IntMatrix::from_fn(upper.rows(), n - r, |i, j| coords[(i, r + j)].clone());
    let s = smith_normal_form(&y);
    let kmat = IntMatrix::from_fn(n - r, n, |i, j| kernel[i][j].clone());
    let rotated = &s.v_inv * &kmat;
    (s.rank()..n - r).map(|i| rotated.row(i).to_vec()).collect()
}

/// Integral homology bases of every degree, over the rationals.
pub fn canonical_homology_bases(c: &IntComplex) -> HomologyBases<BigRational> {
    (0..=c.top())
        .map(|k| {
            integral_homology_basis(c, k)
                .into_iter()
                .map(|v| v.into_iter().map(BigRational::from_integer).collect())
                .collect()
        })
        .collect()
}

/// Torsion of an integer complex over `ℚ`, with homology volume forms
/// given by integral bases of the free parts of homology.
pub fn integral_torsion(c: &IntComplex) -> Result<BigRational, TorsionError> {
    reidemeister_torsion(&c.to_rational(), &canonical_homology_bases(c), 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_differentials() {
        let c = IntComplex::new(vec![1, 2, 1], vec![IntMatrix::zeros(2, 1), IntMatrix::zeros(1, 2)]).unwrap();
        let h = complex_homology(&c).unwrap();
        assert_eq!(h.iter().map(|g| g.betti).collect::<Vec<_>>(), vec![1, 2, 1]);
        assert!(h.iter().all(|g| g.torsion.is_empty()));
    }

    #[test]
    fn multiplication_map() {
        let c = IntComplex::new(vec![1, 1], vec![IntMatrix::from_i64(1, 1, &[&[6]])]).unwrap();
        let h = complex_homology(&c).unwrap();
        assert_eq!(h[0].torsion, vec![BigInt::from(6)]);
        assert_eq!(h[0].to_string(), "Z/6");
    }

    #[test]
    fn circle_homology_basis() {
        // one vertex, one loop: H_0 = Z, H_1 = Z
        let c = IntComplex::new(vec![1, 1], vec![IntMatrix::zeros(1, 1)]).unwrap();
        assert_eq!(integral_homology_basis(&c, 1), vec![vec![BigInt::from(1)]]);
        assert_eq!(integral_torsion(&c).unwrap(), q(1, 1));
    }

    #[test]
    fn lens_like_complex() {
        // one cell in each degree 0..3, ∂_2 = 5: H_1 = Z/5 and torsion 1/5
        let c = IntComplex::new(
            vec![1, 1, 1, 1],
            vec![IntMatrix::zeros(1, 1), IntMatrix::from_i64(1, 1, &[&[5]]), IntMatrix::zeros(1, 1)],
        )
        .unwrap();
        assert_eq!(h1_order(&c).unwrap(), H1Order::Finite(5.into()));
        assert_eq!(integral_torsion(&c).unwrap(), q(1, 5));
    }

    #[test]
    fn basis_of_a_two_cycle_graph() {
        // two vertices joined by three edges: H_1 = Z^2
        let d1 = IntMatrix::from_i64(3, 2, &[&[-1, 1], &[-1, 1], &[1, -1]]);
        let c = IntComplex::new(vec![2, 3], vec![d1.clone()]).unwrap();
        let basis = integral_homology_basis(&c, 1);
        assert_eq!(basis.len(), 2);
        let m = IntMatrix::from_rows(basis);
        assert!((&m * &d1).is_zero());
        assert_eq!(smith_normal_form(&m).factors, vec![BigInt::from(1), BigInt::from(1)]);
    }
}
