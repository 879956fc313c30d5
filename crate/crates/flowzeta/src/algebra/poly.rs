//! Univariate polynomials in `u = e^{-s}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Dense polynomial with trailing zero coefficients trimmed.
///
/// `coeffs[k]` is the coefficient of `u^k`; the zero polynomial has no
/// coefficients and degree `None` (that is, minus infinity).
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UPoly<S> {
    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * u^k`.
    pub fn monomial(c: S, k: usize) -> Self {
        let mut v = vec![S::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| S::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `u^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero test with tolerance on every coefficient.
    pub fn near_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.near_zero(tol))
    }

    pub fn lead(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![S::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        UPoly { coeffs: v }
    }

    /// Substitutes `u -> u^t`.
    pub fn compose_power(&self, t: usize) -> Self {
        assert!(t >= 1);
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![S::zero(); (self.coeffs.len() - 1) * t + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * t] = c.clone();
        }
        UPoly { coeffs: v }
    }

    /// Drops coefficients of degree above `n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().take(n + 1).cloned().collect())
    }

    /// Sets coefficients with `|c| <= tol` to zero and re-trims.
    pub fn cleaned(&self, tol: f64) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().map(|c| if c.near_zero(tol) { S::zero() } else { c.clone() }).collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Euclidean division over the field: `self = q * d + r`, `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![S::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Monic normalisation (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Monic greatest common divisor. Remainders are cleaned with `tol`
    /// (a no-op on exact backends).
    pub fn gcd(&self, other: &Self, tol: f64) -> Self {
        let mut a = self.cleaned(tol);
        let mut b = other.cleaned(tol);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.cleaned(tol);
        }
        a.monic()
    }

    /// Multiplicity of the root `u = 1` and the value of `p / (u-1)^k` at 1.
    ///
    /// Returns `None` for the zero polynomial.
    pub fn deflate_at_one(&self, tol: f64) -> Option<(usize, S)> {
        if self.near_zero(tol) {
            return None;
        }
        let one = S::one();
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let v = p.eval(&one);
            if !v.near_zero(tol) || p.degree().unwrap_or(0) == 0 {
                return Some((k, v));
            }
            p = p.synthetic_div_one();
            k += 1;
        }
    }

    /// Quotient of division by `(u - 1)`, discarding the remainder.
    fn synthetic_div_one(&self) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut q = vec![S::zero(); n - 1];
        let mut carry = S::zero();
        for k in (1..n).rev() {
            carry = carry + self.coeffs[k].clone();
            q[k - 1] = carry.clone();
        }
        Self::from_coeffs(q)
    }

    /// Largest coefficient deviation.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).map(|k| (self.coeff(k) - other.coeff(k)).magnitude()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k).approx_eq(&other.coeff(k), tol))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UPoly<T> {
        UPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl<S: Scalar> Add for &UPoly<S> {
    type Output = UPoly<S>;
    fn add(self, rhs: &UPoly<S>) -> UPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &UPoly<S> {
    type Output = UPoly<S>;
    fn sub(self, rhs: &UPoly<S>) -> UPoly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Mul for &UPoly<S> {
    type Output = UPoly<S>;
    fn mul(self, rhs: &UPoly<S>) -> UPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::from_coeffs(v)
    }
}

impl<S: Scalar> Neg for &UPoly<S> {
    type Output = UPoly<S>;
    fn neg(self) -> UPoly<S> {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for UPoly<S> {
            type Output = UPoly<S>;
            fn $m(self, rhs: UPoly<S>) -> UPoly<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> fmt::Display for UPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c:?}"),
                1 => format!("({c:?})*u"),
                _ => format!("({c:?})*u^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = UPoly<BigRational>;

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(P::zero().degree(), None);
        assert_eq!(P::from_i64s(&[0, 0]).degree(), None);
        assert_eq!(P::from_i64s(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn division_reconstructs() {
        let a = P::from_i64s(&[1, 0, 0, -1]);
        let d = P::from_i64s(&[1, -1]);
        let (q, r) = a.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, P::from_i64s(&[1, 1, 1]));
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        let a = P::from_i64s(&[1, 0, -1]);
        let b = P::from_i64s(&[1, 0, 0, -1]);
        assert_eq!(a.gcd(&b, 0.0), P::from_i64s(&[-1, 1]));
    }

    #[test]
    fn deflation_counts_root_multiplicity() {
        let p = &P::from_i64s(&[1, -1]).pow(2) * &P::from_i64s(&[3, 1]);
        let (k, v) = p.deflate_at_one(0.0).unwrap();
        assert_eq!(k, 2);
        assert_eq!(v, BigRational::from_i64(4));
    }
}
