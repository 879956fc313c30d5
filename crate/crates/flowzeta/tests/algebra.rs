use flowzeta::algebra::polymat::cofactor_det;
use flowzeta::algebra::{poly_matrix_det, smith_normal_form, IntMatrix, Matrix, PolyMatrix, UPoly, ZSeries};
use flowzeta::torsion::random::random_invertible;
use flowzeta::Exact;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> Exact {
    Exact::from_integer(n.into())
}

fn random_int_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-4i64..=4)))
}

fn random_poly(rng: &mut impl Rng, deg: usize) -> UPoly<Exact> {
    UPoly::from_coeffs((0..=deg).map(|_| q(rng.gen_range(-3..=3))).collect())
}

#[test]
fn smith_form_reconstructs_and_divides() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..40 {
        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let m = random_int_matrix(&mut rng, r, c);
        let s = smith_normal_form(&m);
        let (u, v, d) = (s.u.to_rational(), s.v.to_rational(), s.d.to_rational());
        assert_eq!(&(&u * &m.to_rational()) * &v, d);
        assert_eq!(&u * &s.u_inv.to_rational(), Matrix::identity(r));
        assert_eq!(&v * &s.v_inv.to_rational(), Matrix::identity(c));
        assert_eq!(s.rank(), m.to_rational().rank(0.0));
        for w in s.factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "{} does not divide {}", w[0], w[1]);
        }
        if r == c {
            let product = s.factors.iter().fold(BigInt::one(), |a, f| a * f);
            let det = if s.rank() == r { product } else { BigInt::zero() };
            assert_eq!(det, m.det().magnitude().clone().into());
        }
    }
}

#[test]
fn determinant_is_multiplicative_and_inverse_is_two_sided() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=4 {
        let a = random_invertible(&mut rng, n);
        let b = random_invertible(&mut rng, n);
        assert_eq!((&a * &b).det(0.0), a.det(0.0) * b.det(0.0));
        let inv = a.inverse(0.0).expect("invertible");
        assert_eq!(&a * &inv, Matrix::identity(n));
        assert_eq!(&inv * &a, Matrix::identity(n));
    }
}

#[test]
fn polynomial_division_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let (da, dd) = (rng.gen_range(0..6), rng.gen_range(0..4));
        let a = random_poly(&mut rng, da);
        let d = random_poly(&mut rng, dd);
        if d.is_zero() {
            continue;
        }
        let (quot, rem) = a.div_rem(&d);
        assert_eq!(&(&quot * &d) + &rem, a);
        assert!(rem.is_zero() || rem.degree() < d.degree());
    }
}

#[test]
fn polynomial_determinants_agree_with_cofactors_and_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=3 {
        let m: PolyMatrix<Exact> = (0..n).map(|_| (0..n).map(|_| random_poly(&mut rng, 2)).collect()).collect();
        let det = poly_matrix_det(&m, 0.0);
        assert_eq!(det, cofactor_det(&m));
        for x in [-2, 0, 3] {
            let at = Matrix::from_fn(n, n, |i, j| m[i][j].eval(&q(x)));
            assert_eq!(det.eval(&q(x)), at.det(0.0));
        }
    }
}

#[test]
fn series_exp_and_log_are_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let order = 7;
    let mut coeffs = vec![UPoly::zero()];
    coeffs.extend((1..=order).map(|_| random_poly(&mut rng, 2)));
    let s = ZSeries::from_coeffs(order, coeffs);
    let e = s.exp().expect("zero constant term");
    assert_eq!(e.log().expect("unit constant term"), s);
    let inv = e.inverse().expect("unit constant term");
    assert_eq!(e.mul(&inv), ZSeries::one(order));
}
