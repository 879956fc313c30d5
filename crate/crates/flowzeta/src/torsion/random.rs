//! Seeded random complexes for the torsion property suites.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::algebra::{IntMatrix, Matrix};

use super::{BasedChainComplex, IntComplex};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Random integer matrix with determinant `±1`: a product of elementary
/// row operations and a signed permutation.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> Matrix<BigRational> {
    let mut m = Matrix::<BigRational>::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let k = q(rng.gen_range(-2..=2));
        for c in 0..n {
            let v = m[(i, c)].clone() + k.clone() * m[(j, c)].clone();
            m[(i, c)] = v;
        }
    }
    for i in (1..n).rev() {
        m.swap_rows(i, rng.gen_range(0..=i));
    }
    let r = rng.gen_range(0..n);
    for c in 0..n {
        m[(r, c)] = -m[(r, c)].clone();
    }
    m
}

/// Random invertible rational matrix (unimodular times a random diagonal).
pub fn random_invertible(rng: &mut impl Rng, n: usize) -> Matrix<BigRational> {
    let u = random_unimodular(rng, n);
    let d = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            let num = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
            BigRational::new(num.into(), rng.gen_range(1..=3).into())
        } else {
            q(0)
        }
    });
    &d * &u
}

/// Random acyclic rational complex of top degree `top`: a direct sum of
/// elementary pieces `ℚ^r → ℚ^r` with random invertible maps, written in
/// random bases of every chain group.
pub fn random_acyclic_complex(rng: &mut impl Rng, top: usize, max_piece: usize) -> BasedChainComplex<BigRational> {
    assert!(top >= 1);
    // piece k maps degree k to degree k - 1
    let pieces: Vec<usize> = (0..=top).map(|k| if k == 0 { 0 } else { rng.gen_range(1..=max_piece.max(1)) }).collect();
    let dims: Vec<usize> = (0..=top).map(|k| pieces[k] + pieces.get(k + 1).copied().unwrap_or(0)).collect();
    // C_k = (source block of piece k) ⊕ (target block of piece k + 1)
    let boundaries: Vec<Matrix<BigRational>> = (1..=top)
        .map(|k| {
            let mut b = Matrix::zeros(dims[k], dims[k - 1]);
            let a = random_invertible(rng, pieces[k]);
            // rows: first pieces[k] cells of C_k; columns: target block of C_{k-1}, after its own source block
            b.add_block(0, pieces[k - 1], &a);
            b
        })
        .collect();
    let c = BasedChainComplex::new(dims.clone(), boundaries).expect("consistent shapes");
    let change: Vec<Matrix<BigRational>> = dims.iter().map(|&n| random_invertible(rng, n)).collect();
    c.change_basis(&change, 0.0).expect("invertible basis change")
}

/// Random integer complex with one 0-cell, `g` 1-cells, `g` 2-cells and one
/// 3-cell, `∂_1 = ∂_3 = 0` and `∂_2` a random matrix with nonzero
/// determinant, so that `H_1` is finite of order `|det ∂_2|`.
pub fn random_homology_sphere_complex(rng: &mut impl Rng, max_genus: usize) -> IntComplex {
    let g = rng.gen_range(1..=max_genus.max(1));
    loop {
        let d2 = IntMatrix::from_fn(g, g, |_, _| BigInt::from(rng.gen_range(-3..=3)));
        if d2.det() == BigInt::from(0) {
            continue;
        }
        return IntComplex::new(vec![1, g, g, 1], vec![IntMatrix::zeros(g, 1), d2, IntMatrix::zeros(1, g)]).expect("consistent shapes");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_complexes_are_acyclic() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let c = random_acyclic_complex(&mut rng, 3, 2);
            c.check_boundary_square(0.0).unwrap();
            assert!(c.is_acyclic(0.0));
        }
    }

    #[test]
    fn unimodular_has_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unimodular(&mut rng, 4);
        assert_eq!(u.det(0.0).abs_value_int(), 1);
    }

    trait AbsInt {
        fn abs_value_int(&self) -> i64;
    }

    impl AbsInt for BigRational {
        fn abs_value_int(&self) -> i64 {
            use num_traits::{Signed, ToPrimitive};
            self.abs().to_integer().to_i64().unwrap()
        }
    }
}
