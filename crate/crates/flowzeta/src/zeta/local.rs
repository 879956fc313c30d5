//! The auxiliary function `ξ` and local zeta factors of designated orbits.

use crate::algebra::{Matrix, UPoly};
use crate::model::{prong_leaf_data, ProngError, ProngSpec};
use crate::scalar::Scalar;

/// `det(I - t X)` as a polynomial in `t`, from the power traces `tr Xᵏ`
/// via Newton's identities. Float backends clean entries below `tol`.
pub fn char_poly_reversed<S: Scalar>(x: &Matrix<S>, tol: f64) -> UPoly<S> {
    let m = x.rows();
    let mut traces = Vec::with_capacity(m);
    let mut power = x.clone();
    for k in 0..m {
        traces.push(power.trace());
        if k + 1 < m {
            power = &power * x;
        }
    }
    // e_k = (1/k) Σ_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i; the coefficient of t^k is (-1)^k e_k.
    let mut e = vec![S::one()];
    for k in 1..=m {
        let mut acc = S::zero();
        for i in 1..=k {
            let term = e[k - i].clone() * traces[i - 1].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        e.push(acc / S::from_i64(k as i64));
    }
    let coeffs = e.into_iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c }).collect();
    let p = UPoly::from_coeffs(coeffs);
    if S::EXACT {
        p
    } else {
        p.cleaned(tol)
    }
}

/// `ξ(T, ρ) = det(I - u^T ρ)`, a polynomial of degree `m·T` in `u`.
pub fn xi_poly<S: Scalar>(t: u64, rho: &Matrix<S>, tol: f64) -> UPoly<S> {
    assert!(t >= 1, "return time must be positive");
    char_poly_reversed(rho, tol).compose_power(t as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Unstable,
    Stable,
}

/// Local zeta factor as a rational function in `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor<S> {
    pub numerator: UPoly<S>,
    pub denominator: UPoly<S>,
    pub mode: Mode,
}

impl<S: Scalar> LocalFactor<S> {
    /// Equality of rational functions by cross-multiplication.
    pub fn same_function(&self, other: &Self, tol: f64) -> bool {
        let a = &self.numerator * &other.denominator;
        let b = &other.numerator * &self.denominator;
        a.approx_eq(&b, tol)
    }
}

/// Divides numerator and denominator by their monic gcd. Exact backends
/// reduce fully; float backends reduce with `tol`-cleaned remainders.
pub fn reduce<S: Scalar>(num: &UPoly<S>, den: &UPoly<S>, tol: f64) -> (UPoly<S>, UPoly<S>) {
    let g = num.gcd(den, tol);
    if g.degree().unwrap_or(0) == 0 {
        return (num.clone(), den.clone());
    }
    let (qn, _) = num.div_rem(&g);
    let (qd, _) = den.div_rem(&g);
    // Normalize so the denominator has constant term 1 (or lowest term 1).
    let norm = qd.coeffs().iter().find(|c| !c.near_zero(tol)).cloned().unwrap_or_else(S::one);
    let inv = S::one() / norm;
    (qn.scale(&inv).cleaned(tol), qd.scale(&inv).cleaned(tol))
}

/// Local factor of an orbit with return time `t`, holonomy `rho` and prong data `spec`.
///
/// Unstable mode is `∏ ξ(rᵢᵘ T, ρ^{rᵢᵘ}) / ξ(T, ρ)`; stable mode uses the
/// stable wraps and `ε ρ` with `ε = spec.epsilon`. Regular orbits use
/// [`ProngSpec::regular`].
pub fn local_zeta_factor<S: Scalar>(
    spec: &ProngSpec,
    t: u64,
    rho: &Matrix<S>,
    mode: Mode,
    tol: f64,
) -> Result<LocalFactor<S>, ProngError> {
    let leaves = prong_leaf_data(spec)?;
    let (wraps, base) = match mode {
        Mode::Unstable => (leaves.unstable_wraps, rho.clone()),
        Mode::Stable => (leaves.stable_wraps, rho.scale(&S::from_i64(spec.epsilon as i64))),
    };
    let numerator = wraps
        .iter()
        .fold(UPoly::one(), |acc, &r| &acc * &xi_poly(r as u64 * t, &base.pow(r), tol));
    let denominator = xi_poly(t, &base, tol);
    let (numerator, denominator) = reduce(&numerator, &denominator, tol);
    Ok(LocalFactor { numerator, denominator, mode })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn one_by_one(v: i64) -> Matrix<Q> {
        Matrix::scalar(1, Q::from_integer(v.into()))
    }

    #[test]
    fn char_poly_matches_determinant() {
        let x = Matrix::from_rows(vec![
            vec![Q::new(1.into(), 2.into()), Q::from_integer(2.into()), Q::from_integer(0.into())],
            vec![Q::from_integer((-1).into()), Q::from_integer(3.into()), Q::new(1.into(), 3.into())],
            vec![Q::from_integer(4.into()), Q::from_integer(0.into()), Q::from_integer((-2).into())],
        ]);
        let rows = (0..3)
            .map(|i| {
                (0..3)
                    .map(|j| {
                        let c = if i == j { Q::from_integer(1.into()) } else { Q::from_integer(0.into()) };
                        UPoly::from_coeffs(vec![c, -x[(i, j)].clone()])
                    })
                    .collect()
            })
            .collect();
        assert_eq!(char_poly_reversed(&x, 0.0), crate::algebra::poly_matrix_det(&rows, 0.0));
    }

    #[test]
    fn xi_of_signs() {
        assert_eq!(xi_poly(1, &one_by_one(1), 0.0), UPoly::from_i64s(&[1, -1]));
        assert_eq!(xi_poly(1, &one_by_one(-1), 0.0), UPoly::from_i64s(&[1, 1]));
    }

    #[test]
    fn xi_of_rational_rotation() {
        let c = Q::new(3.into(), 5.into());
        let s = Q::new(4.into(), 5.into());
        let rot = Matrix::from_rows(vec![vec![c.clone(), -s.clone()], vec![s, c.clone()]]);
        let expected = UPoly::from_coeffs(vec![Q::from_integer(1.into()), Q::from_integer(0.into()), -c * Q::from_integer(2.into()), Q::from_integer(0.into()), Q::from_integer(1.into())]);
        assert_eq!(xi_poly(2, &rot, 0.0), expected);
    }

    #[test]
    fn regular_orbit_factors() {
        let plus = local_zeta_factor(&ProngSpec::regular(1, 1), 1, &one_by_one(1), Mode::Unstable, 0.0).unwrap();
        assert!(plus.same_function(&LocalFactor { numerator: UPoly::from_i64s(&[1, -1]), denominator: UPoly::one(), mode: Mode::Unstable }, 0.0));
        let minus = local_zeta_factor(&ProngSpec::regular(-1, 1), 1, &one_by_one(1), Mode::Unstable, 0.0).unwrap();
        assert!(minus.same_function(&LocalFactor { numerator: UPoly::from_i64s(&[1, 1]), denominator: UPoly::one(), mode: Mode::Unstable }, 0.0));
    }

    #[test]
    fn three_prong_rotation_factor() {
        let spec = ProngSpec { n: 3, epsilon: 1, a: 2 };
        let f = local_zeta_factor(&spec, 1, &one_by_one(1), Mode::Unstable, 0.0).unwrap();
        assert_eq!(f.numerator, UPoly::from_i64s(&[1, 1, 1]));
        assert_eq!(f.denominator, UPoly::one());
    }
}
