//! Determinants of square matrices with polynomial entries.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::matrix::Matrix;
use crate::algebra::poly::UPoly;
use crate::scalar::Scalar;

/// Square matrix of polynomials in `u`, stored as rows.
pub type PolyMatrix<S> = Vec<Vec<UPoly<S>>>;

/// Determinant of a square polynomial matrix.
///
/// Exact backends use fraction-free (Bareiss) elimination, where every
/// division is exact in `K[u]`. Float backends evaluate at roots of unity
/// with partial-pivot elimination and interpolate; coefficients with
/// magnitude at most `tol` are dropped.
pub fn poly_matrix_det<S: Scalar>(m: &PolyMatrix<S>, tol: f64) -> UPoly<S> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "polynomial determinant of a non-square matrix");
    if n == 0 {
        return UPoly::one();
    }
    if S::EXACT {
        bareiss(m)
    } else {
        evaluate_interpolate(m, tol)
    }
}

fn bareiss<S: Scalar>(m: &PolyMatrix<S>) -> UPoly<S> {
    let n = m.len();
    let mut a = m.clone();
    let mut negate = false;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

fn evaluate_interpolate<S: Scalar>(m: &PolyMatrix<S>, tol: f64) -> UPoly<S> {
    let n = m.len();
    // Row-degree sum bounds the determinant degree.
    let bound: usize = m.iter().map(|r| r.iter().filter_map(UPoly::degree).max().unwrap_or(0)).sum();
    let points = bound + 1;
    let values: Vec<Complex64> = (0..points)
        .map(|k| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / points as f64);
            let at = Matrix::from_fn(n, n, |i, j| eval_c64(&m[i][j], w));
            at.det(tol)
        })
        .collect();
    let coeffs = (0..points)
        .map(|j| {
            let sum: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (j * k % points) as f64 / points as f64))
                .sum();
            S::from_c64(sum / points as f64)
        })
        .collect();
    UPoly::from_coeffs(coeffs).cleaned(tol)
}

fn eval_c64<S: Scalar>(p: &UPoly<S>, x: Complex64) -> Complex64 {
    p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c.to_c64())
}

/// Naive Laplace expansion along the first row; exponential cost, used as a test oracle.
pub fn cofactor_det<S: Scalar>(m: &PolyMatrix<S>) -> UPoly<S> {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut acc = UPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: PolyMatrix<S> =
            m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = &m[0][j] * &cofactor_det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::BigRational;

    type P = UPoly<BigRational>;

    #[test]
    fn one_by_one() {
        let m = vec![vec![P::from_i64s(&[1, -1])]];
        assert_eq!(poly_matrix_det(&m, 0.0), P::from_i64s(&[1, -1]));
    }

    #[test]
    fn diagonal_product() {
        let m = vec![vec![P::from_i64s(&[1, -1]), P::zero()], vec![P::zero(), P::from_i64s(&[1, 1])]];
        assert_eq!(poly_matrix_det(&m, 0.0), P::from_i64s(&[1, 0, -1]));
    }

    #[test]
    fn zero_leading_pivot_is_swapped() {
        let m = vec![vec![P::zero(), P::from_i64s(&[0, 1])], vec![P::from_i64s(&[2]), P::from_i64s(&[5, 5])]];
        assert_eq!(poly_matrix_det(&m, 0.0), P::from_i64s(&[0, -2]));
    }

    #[test]
    fn float_backend_matches_exact() {
        let ints = [[1, -2, 0], [3, 0, 1], [0, 1, 1]];
        let exact: Vec<Vec<P>> =
            ints.iter().map(|r| r.iter().map(|&c| P::from_i64s(&[c, 1, -c])).collect()).collect();
        let float: Vec<Vec<UPoly<Complex64>>> = ints
            .iter()
            .map(|r| r.iter().map(|&c| UPoly::from_i64s(&[c, 1, -c])).collect())
            .collect();
        let e = poly_matrix_det(&exact, 0.0);
        let f = poly_matrix_det(&float, 1e-10);
        assert!(f.approx_eq(&e.map(Complex64::from_rational), 1e-9));
    }
}
