//! Truncated power series in the auxiliary variable `z` with polynomial coefficients.

use crate::algebra::poly::UPoly;
use crate::algebra::AlgebraError;
use crate::scalar::Scalar;

/// Power series `c_0 + c_1 z + ... + c_N z^N` with `c_n` polynomials in `u`.
///
/// The truncation order `N` is fixed at construction and every operation
/// preserves it; combining series of different orders is a programming error.
#[derive(Clone, Debug, PartialEq)]
pub struct ZSeries<S> {
    order: usize,
    coeffs: Vec<UPoly<S>>,
}

impl<S: Scalar> ZSeries<S> {
    pub fn zero(order: usize) -> Self {
        ZSeries { order, coeffs: vec![UPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = UPoly::one();
        s
    }

    /// Builds a series from leading coefficients; missing ones are zero and
    /// extra ones are dropped.
    pub fn from_coeffs(order: usize, coeffs: Vec<UPoly<S>>) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().enumerate().take(order + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &UPoly<S> {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[UPoly<S>] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: UPoly<S>) {
        if n <= self.order {
            self.coeffs[n] = c;
        }
    }

    pub fn add_to_coeff(&mut self, n: usize, c: &UPoly<S>) {
        if n <= self.order {
            self.coeffs[n] = &self.coeffs[n] + c;
        }
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order, other.order, "series truncation orders differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_order(other);
        ZSeries { order: self.order, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_order(other);
        ZSeries { order: self.order, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        ZSeries { order: self.order, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_order(other);
        let mut out = Self::zero(self.order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(self.order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        ZSeries { order: self.order, coeffs: self.coeffs.iter().map(|a| a.scale(s)).collect() }
    }

    /// Multiplicative inverse; the constant term must be a nonzero constant.
    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        let c0 = &self.coeffs[0];
        if c0.degree() != Some(0) {
            return Err(AlgebraError::ConstantTerm("inverse needs a nonzero constant z^0 coefficient"));
        }
        let inv0 = S::one() / c0.coeff(0);
        let mut out = Self::zero(self.order);
        out.coeffs[0] = UPoly::constant(inv0.clone());
        for n in 1..=self.order {
            let mut acc = UPoly::zero();
            for k in 1..=n {
                acc = &acc + &(&self.coeffs[k] * &out.coeffs[n - k]);
            }
            out.coeffs[n] = (-&acc).scale(&inv0);
        }
        Ok(out)
    }

    pub fn div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// `exp(S)`; requires `c_0 = 0`.
    pub fn exp(&self) -> Result<Self, AlgebraError> {
        if !self.coeffs[0].is_zero() {
            return Err(AlgebraError::ConstantTerm("exp needs a zero constant term"));
        }
        // n E_n = sum_{k=1..n} k S_k E_{n-k}
        let mut e = Self::zero(self.order);
        e.coeffs[0] = UPoly::one();
        for n in 1..=self.order {
            let mut acc = UPoly::zero();
            for k in 1..=n {
                if self.coeffs[k].is_zero() {
                    continue;
                }
                acc = &acc + &(&self.coeffs[k] * &e.coeffs[n - k]).scale(&S::from_i64(k as i64));
            }
            e.coeffs[n] = acc.scale(&(S::one() / S::from_i64(n as i64)));
        }
        Ok(e)
    }

    /// `log(S)`; requires `c_0 = 1`.
    pub fn log(&self) -> Result<Self, AlgebraError> {
        if self.coeffs[0] != UPoly::one() {
            return Err(AlgebraError::ConstantTerm("log needs constant term 1"));
        }
        // n L_n = n S_n - sum_{k=1..n-1} k L_k S_{n-k}
        let mut l = Self::zero(self.order);
        for n in 1..=self.order {
            let mut acc = self.coeffs[n].scale(&S::from_i64(n as i64));
            for k in 1..n {
                if l.coeffs[k].is_zero() {
                    continue;
                }
                acc = &acc - &(&l.coeffs[k] * &self.coeffs[n - k]).scale(&S::from_i64(k as i64));
            }
            l.coeffs[n] = acc.scale(&(S::one() / S::from_i64(n as i64)));
        }
        Ok(l)
    }

    /// Largest deviation over all coefficients of all `z^n` terms.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.check_order(other);
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.max_deviation(b)).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.order == other.order && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.approx_eq(b, tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert_eq!(ZSeries::<Q>::zero(12).exp().unwrap(), ZSeries::one(12));
    }

    #[test]
    fn log_of_geometric_series() {
        let n = 12;
        let geo = ZSeries::from_coeffs(n, vec![UPoly::<Q>::one(); n + 1]);
        let l = geo.log().unwrap();
        assert!(l.coeff(0).is_zero());
        for k in 1..=n {
            assert_eq!(l.coeff(k), &UPoly::constant(q(1, k as i64)));
        }
    }

    #[test]
    fn constant_term_preconditions() {
        assert!(ZSeries::<Q>::one(3).exp().is_err());
        assert!(ZSeries::<Q>::zero(3).log().is_err());
    }

    #[test]
    fn inverse_of_one_minus_uz() {
        let s = ZSeries::from_coeffs(5, vec![UPoly::<Q>::one(), UPoly::from_i64s(&[0, -1])]);
        let inv = s.inverse().unwrap();
        for k in 0..=5 {
            assert_eq!(inv.coeff(k), &UPoly::monomial(q(1, 1), k));
        }
    }
}
