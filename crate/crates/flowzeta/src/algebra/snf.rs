//! Integer matrices and Smith normal form.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::matrix::Matrix;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        IntMatrix { rows: r, cols: c, data }
    }

    /// Builds an empty-column-aware matrix: `rows x cols` from `i64` rows.
    pub fn from_i64(rows: usize, cols: usize, entries: &[&[i64]]) -> Self {
        assert_eq!(entries.len(), rows);
        let mut m = Self::zeros(rows, cols);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn to_rational(&self) -> Matrix<BigRational> {
        Matrix::from_fn(self.rows, self.cols, |i, j| BigRational::from_integer(self[(i, j)].clone()))
    }

    /// Determinant of a square integer matrix (exact).
    pub fn det(&self) -> BigInt {
        let d = self.to_rational().det(0.0);
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    pub fn rank(&self) -> usize {
        self.to_rational().rank(0.0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = &self[(src, c)] * k;
            self[(dst, c)] += v;
        }
    }

    /// `col[dst] += k * col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = &self[(r, src)] * k;
            self[(r, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in integer product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form `U * M * V = D` together with the inverses of `U` and `V`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub factors: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Invariant factors greater than one (the torsion part of the cokernel).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|f| !f.is_one()).cloned().collect()
    }
}

/// Row and column operations applied to the working matrix and mirrored
/// into the transforms and their inverses.
struct Work {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        self.u.add_row(dst, src, k);
        self.u_inv.add_col(src, dst, &-k);
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        self.v.add_col(dst, src, k);
        self.v_inv.add_row(src, dst, &-k);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }
}

/// Smith normal form by repeated minimal-pivot elimination.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut w = Work {
        a: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = &w.a[(i, j)];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..r {
            if w.a[(i, t)].is_zero() {
                continue;
            }
            let q = w.a[(i, t)].div_floor(&w.a[(t, t)]);
            w.add_row(i, t, &-q);
            if !w.a[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..c {
            if w.a[(t, j)].is_zero() {
                continue;
            }
            let q = w.a[(t, j)].div_floor(&w.a[(t, t)]);
            w.add_col(j, t, &-q);
            if !w.a[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            // A smaller remainder exists; pick it as the next pivot.
            continue;
        }
        // Enforce divisibility of the remaining block by the pivot.
        let pivot = w.a[(t, t)].clone();
        let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.a[(i, j)].is_multiple_of(&pivot)));
        if let Some(i) = offender {
            w.add_row(t, i, &BigInt::one());
            continue;
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let factors = (0..r.min(c)).map(|i| w.a[(i, i)].clone()).filter(|x| !x.is_zero()).collect();
    Smith { d: w.a, u: w.u, u_inv: w.u_inv, v: w.v, v_inv: w.v_inv, factors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert_eq!(&s.u * &s.u_inv, IntMatrix::identity(m.rows()));
        assert_eq!(&s.v * &s.v_inv, IntMatrix::identity(m.cols()));
        for w in s.factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn identity_has_unit_factors() {
        let s = check(&IntMatrix::identity(4));
        assert_eq!(s.factors, vec![BigInt::one(); 4]);
    }

    #[test]
    fn diagonal_two_three() {
        let s = check(&IntMatrix::from_i64(2, 2, &[&[2, 0], &[0, 3]]));
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn rectangular_with_kernel() {
        let s = check(&IntMatrix::from_i64(2, 3, &[&[2, 4, 4], &[-6, 6, 12]]));
        assert_eq!(s.factors, vec![BigInt::from(2), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check(&IntMatrix::zeros(2, 3));
        assert!(s.factors.is_empty());
    }
}
