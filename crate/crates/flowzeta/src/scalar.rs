//! Scalar fields used by every algebraic routine.
//!
//! Two families are supported: exact rationals (no rounding anywhere) and
//! floating point (real or complex) compared with an absolute tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A field element usable by the algebra kernel.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and tolerances are ignored.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// Embeds an exact rational (rounded on float backends).
    fn from_rational(r: &BigRational) -> Self;

    /// Builds `re + i*im`; real backends reject a nonzero imaginary part.
    fn from_parts(re: &BigRational, im: &BigRational) -> Option<Self>;

    /// Zero test: exact on exact backends, `|x| <= tol` otherwise.
    fn near_zero(&self, tol: f64) -> bool;

    /// Complex conjugate (identity on real fields).
    fn conj(&self) -> Self;

    /// `|x|` embedded back into the field.
    fn abs_value(&self) -> Self;

    /// `|x|` as a float, used for pivot selection and deviations.
    fn magnitude(&self) -> f64;

    /// Sign of the real part: -1, 0 or +1 (zero within `tol`).
    fn real_sign(&self, tol: f64) -> i8;

    /// True when the imaginary part vanishes (within `tol`).
    fn is_real(&self, tol: f64) -> bool;

    /// Lossy conversion for reporting.
    fn to_c64(&self) -> Complex<f64>;

    /// The exact rational value, when the backend is exact.
    fn to_rational(&self) -> Option<BigRational>;

    /// Rounds a complex float into the field; real fields drop the imaginary part.
    fn from_c64(z: Complex<f64>) -> Self;

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).near_zero(tol)
    }

    /// `Σ aᵢ bᵢ`; exact backends override this to reduce once at the end.
    fn dot<'a>(pairs: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self {
        pairs.fold(Self::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn dot<'a>(pairs: impl Iterator<Item = (&'a Self, &'a Self)>) -> Self {
        let terms: Vec<(BigInt, BigInt)> =
            pairs.filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| (a.numer() * b.numer(), a.denom() * b.denom())).collect();
        let Some(lcm) = terms.iter().map(|(_, d)| d.clone()).reduce(|l, d| if l == d { l } else { l.lcm(&d) }) else {
            return BigRational::zero();
        };
        let numer: BigInt = terms.iter().map(|(n, d)| if *d == lcm { n.clone() } else { n * (&lcm / d) }).sum();
        BigRational::new(numer, lcm)
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_parts(re: &BigRational, im: &BigRational) -> Option<Self> {
        im.is_zero().then(|| re.clone())
    }

    fn near_zero(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn abs_value(&self) -> Self {
        self.abs()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn real_sign(&self, _tol: f64) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn is_real(&self, _tol: f64) -> bool {
        true
    }

    fn to_c64(&self) -> Complex<f64> {
        Complex::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn from_c64(z: Complex<f64>) -> Self {
        BigRational::from_float(z.re).unwrap_or_else(BigRational::zero)
    }
}

macro_rules! real_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(n: i64) -> Self {
                n as $t
            }

            fn from_rational(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn from_parts(re: &BigRational, im: &BigRational) -> Option<Self> {
                im.is_zero().then(|| Self::from_rational(re))
            }

            fn near_zero(&self, tol: f64) -> bool {
                (*self as f64).abs() <= tol
            }

            fn conj(&self) -> Self {
                *self
            }

            fn abs_value(&self) -> Self {
                self.abs()
            }

            fn magnitude(&self) -> f64 {
                (*self as f64).abs()
            }

            fn real_sign(&self, tol: f64) -> i8 {
                let x = *self as f64;
                if x.abs() <= tol {
                    0
                } else if x > 0.0 {
                    1
                } else {
                    -1
                }
            }

            fn is_real(&self, _tol: f64) -> bool {
                true
            }

            fn to_c64(&self) -> Complex<f64> {
                Complex::new(*self as f64, 0.0)
            }

            fn to_rational(&self) -> Option<BigRational> {
                None
            }

            fn from_c64(z: Complex<f64>) -> Self {
                z.re as $t
            }
        }
    };
}

macro_rules! complex_float_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            const EXACT: bool = false;

            fn from_i64(n: i64) -> Self {
                Complex::new(n as $t, 0.0)
            }

            fn from_rational(r: &BigRational) -> Self {
                Complex::new(r.to_f64().unwrap_or(f64::NAN) as $t, 0.0)
            }

            fn from_parts(re: &BigRational, im: &BigRational) -> Option<Self> {
                Some(Complex::new(
                    re.to_f64().unwrap_or(f64::NAN) as $t,
                    im.to_f64().unwrap_or(f64::NAN) as $t,
                ))
            }

            fn near_zero(&self, tol: f64) -> bool {
                (self.norm() as f64) <= tol
            }

            fn conj(&self) -> Self {
                Complex::conj(self)
            }

            fn abs_value(&self) -> Self {
                Complex::new(self.norm(), 0.0)
            }

            fn magnitude(&self) -> f64 {
                self.norm() as f64
            }

            fn real_sign(&self, tol: f64) -> i8 {
                let x = self.re as f64;
                if x.abs() <= tol {
                    0
                } else if x > 0.0 {
                    1
                } else {
                    -1
                }
            }

            fn is_real(&self, tol: f64) -> bool {
                (self.im as f64).abs() <= tol
            }

            fn to_c64(&self) -> Complex<f64> {
                Complex::new(self.re as f64, self.im as f64)
            }

            fn to_rational(&self) -> Option<BigRational> {
                None
            }

            fn from_c64(z: Complex<f64>) -> Self {
                Complex::new(z.re as $t, z.im as $t)
            }
        }
    };
}

real_float_scalar!(f32);
real_float_scalar!(f64);
complex_float_scalar!(f32);
complex_float_scalar!(f64);

/// Converts an `f64` to the nearest rational with denominator at most `max_den`.
pub fn rational_approx(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_zero_ignores_tolerance() {
        let x = BigRational::new(1.into(), 1_000_000_000_000i64.into());
        assert!(!x.near_zero(1.0));
    }

    #[test]
    fn complex_real_sign_and_magnitude() {
        let z = Complex::new(-3.0f64, 4.0);
        assert_eq!(z.real_sign(1e-9), -1);
        assert!((z.magnitude() - 5.0).abs() < 1e-12);
        assert!(!z.is_real(1e-9));
    }

    #[test]
    fn rational_approx_recovers_simple_fraction() {
        let r = rational_approx(0.6, 100).unwrap();
        assert_eq!(r, BigRational::new(3.into(), 5.into()));
    }
}
