//! Dense matrices over a [`Scalar`] field.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from nested rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols: c, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn scalar(n: usize, s: S) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Selects the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`, adding to existing entries.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix<S>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                let v = self[(r0 + i, c0 + j)].clone() + block[(i, j)].clone();
                self[(r0 + i, c0 + j)] = v;
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.near_zero(tol))
    }

    /// Largest entrywise deviation `max |a_ij - b_ij|`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a.clone() - b.clone()).magnitude())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols)
            && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// `A* A = I` within `tol` (exactly on exact backends).
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && (&self.conj_transpose() * self).approx_eq(&Matrix::identity(self.rows), tol)
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Vec<T> {
        self.data.iter().map(f).collect()
    }

    /// Determinant: fraction-free elimination when exact, partial pivoting otherwise.
    pub fn det(&self, tol: f64) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if S::EXACT {
            self.det_bareiss()
        } else {
            self.det_pivoted(tol)
        }
    }

    fn det_bareiss(&self) -> S {
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        let mut a = self.clone();
        let mut sign = S::one();
        let mut prev = S::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return S::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone())
                        / prev.clone();
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn det_pivoted(&self, _tol: f64) -> S {
        let n = self.rows;
        let mut a = self.clone();
        let mut det = S::one();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[(i, k)].magnitude().total_cmp(&a[(j, k)].magnitude()))
                .expect("nonempty pivot range");
            if a[(p, k)].magnitude() == 0.0 {
                return S::zero();
            }
            if p != k {
                a.swap_rows(k, p);
                det = -det;
            }
            let pivot = a[(k, k)].clone();
            det = det * pivot.clone();
            for i in k + 1..n {
                let f = a[(i, k)].clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for j in k..n {
                    let v = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                    a[(i, j)] = v;
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self, tol: f64) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv: Matrix<S> = Matrix::identity(n);
        for k in 0..n {
            let p = if S::EXACT {
                (k..n).find(|&i| !a[(i, k)].is_zero())?
            } else {
                let p = (k..n).max_by(|&i, &j| a[(i, k)].magnitude().total_cmp(&a[(j, k)].magnitude()))?;
                if a[(p, k)].near_zero(tol) {
                    return None;
                }
                p
            };
            a.swap_rows(k, p);
            inv.swap_rows(k, p);
            let pivot = a[(k, k)].clone();
            for j in 0..n {
                a[(k, j)] = a[(k, j)].clone() / pivot.clone();
                inv[(k, j)] = inv[(k, j)].clone() / pivot.clone();
            }
            for i in 0..n {
                if i == k || a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(k, j)].clone();
                    inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(k, j)].clone();
                }
            }
        }
        Some(inv)
    }

    /// Basis of the left null space `{x : x A = 0}` as rows, via reduced echelon form.
    pub fn left_kernel(&self, tol: f64) -> Vec<Vec<S>> {
        self.transpose().right_kernel(tol)
    }

    /// Basis of `{x : A x = 0}`.
    pub fn right_kernel(&self, tol: f64) -> Vec<Vec<S>> {
        let (rref, pivots) = self.rref(tol);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rref[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, tol: f64) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let p = if S::EXACT {
                (r..self.rows).find(|&i| !a[(i, c)].is_zero())
            } else {
                (r..self.rows)
                    .max_by(|&i, &j| a[(i, c)].magnitude().total_cmp(&a[(j, c)].magnitude()))
                    .filter(|&i| !a[(i, c)].near_zero(tol))
            };
            let Some(p) = p else { continue };
            a.swap_rows(r, p);
            let pivot = a[(r, c)].clone();
            for j in 0..self.cols {
                a[(r, j)] = a[(r, j)].clone() / pivot.clone();
            }
            for i in 0..self.rows {
                if i == r || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..self.cols {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(r, j)].clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.rref(tol).1.len()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, rhs.cols, |i, j| S::dot((0..self.cols).map(|k| (&self[(i, k)], &rhs[(k, j)]))))
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;
    fn neg(self) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a.clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn bareiss_matches_known_determinant() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1), q(3)], vec![q(0), q(-1), q(4)], vec![q(5), q(2), q(1)]]);
        // 2(-1-8) - 1(0-20) + 3(0+5) = -18 + 20 + 15
        assert_eq!(m.det(0.0), q(17));
    }

    #[test]
    fn pivoted_det_agrees_with_exact() {
        let m = Matrix::<f64>::from_rows(vec![vec![0.0, 1.0, 3.0], vec![2.0, -1.0, 4.0], vec![5.0, 2.0, 1.0]]);
        assert!((m.det(1e-12) - (-(2.0 - 20.0) + 3.0 * (4.0 + 5.0))).abs() < 1e-12);
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]);
        let inv = m.inverse(0.0).unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
    }

    #[test]
    fn kernel_dimension() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let k = m.right_kernel(0.0);
        assert_eq!(k.len(), 2);
        for v in k {
            let col = Matrix::from_rows(v.into_iter().map(|x| vec![x]).collect());
            assert!((&m * &col).is_zero(0.0));
        }
    }
}
