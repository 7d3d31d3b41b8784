use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::PivotChoice;
use super::subspace::Residual;
use crate::error::{HodgeError, Result};

/// Exact element of Q(i).
pub type GaussScalar = Complex<BigRational>;

/// Field operations shared by the exact and floating backends.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + PivotChoice
    + Residual
{
    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_gauss(z: &GaussScalar) -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Scalar for GaussScalar {
    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn i() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_gauss(z: &GaussScalar) -> Self {
        z.clone()
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    fn from_gauss(z: &GaussScalar) -> Self {
        z.to_c64()
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // huge numerator and denominator: drop low bits before converting
    let sn = r.numer().bits().saturating_sub(60);
    let sd = r.denom().bits().saturating_sub(60);
    let num = (r.numer() >> sn as usize).to_f64().unwrap_or(0.0);
    let den = (r.denom() >> sd as usize).to_f64().unwrap_or(1.0);
    num / den * 2f64.powi(sn as i32 - sd as i32)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Gaussian rational `(a/b) + (c/d) i`.
pub fn gauss(re: BigRational, im: BigRational) -> GaussScalar {
    Complex::new(re, im)
}

pub fn gi(re: i64, im: i64) -> GaussScalar {
    Complex::new(rat(re, 1), rat(im, 1))
}

pub fn gr(n: i64, d: i64) -> GaussScalar {
    Complex::new(rat(n, d), BigRational::zero())
}

/// `i^k` for any integer `k`.
pub fn i_pow<T: Scalar>(k: i64) -> T {
    match k.rem_euclid(4) {
        0 => T::one(),
        1 => T::i(),
        2 => -T::one(),
        _ => -T::i(),
    }
}

pub fn is_real(z: &GaussScalar) -> bool {
    z.im.is_zero()
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    BigRational::from_str(t)
        .map_err(|_| HodgeError::InvalidInput(format!("not a rational: {s:?}")))
        .and_then(|r| {
            if t.contains('/') && t.split('/').nth(1).map(|d| d.trim() == "0").unwrap_or(false) {
                Err(HodgeError::InvalidInput(format!("zero denominator: {s:?}")))
            } else {
                Ok(r)
            }
        })
}

pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

/// Exact square root in Q(i), if one exists.
pub fn gauss_sqrt(z: &GaussScalar) -> Option<GaussScalar> {
    if Scalar::is_zero(z) {
        return Some(<GaussScalar as Scalar>::zero());
    }
    // |z| must be rational, then re(w)^2 = (|z| + re z)/2
    let n2 = z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone();
    let modulus = rat_sqrt(&n2)?;
    let two = rat(2, 1);
    let a2 = (modulus.clone() + z.re.clone()) / two.clone();
    let b2 = (modulus - z.re.clone()) / two.clone();
    let a = rat_sqrt(&a2)?;
    let mut b = rat_sqrt(&b2)?;
    if a.is_zero() {
        return Some(Complex::new(a, b));
    }
    // sign of b from 2ab = im z
    if (a.clone() * b.clone() * two - z.im.clone()).is_zero() {
        Some(Complex::new(a, b))
    } else {
        b = -b;
        Some(Complex::new(a, b))
    }
}

pub fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(n.clone() * n.clone()) == r.numer() && &(d.clone() * d.clone()) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_minus_one_is_i() {
        let w = gauss_sqrt(&gi(-1, 0)).unwrap();
        assert_eq!(w.clone() * w, gi(-1, 0));
    }

    #[test]
    fn sqrt_of_2i() {
        let w = gauss_sqrt(&gi(0, 2)).unwrap();
        assert_eq!(w, gi(1, 1));
        assert!(gauss_sqrt(&gi(2, 0)).is_none());
        assert_eq!(gauss_sqrt(&gr(9, 4)).unwrap(), gr(3, 2));
    }

    #[test]
    fn i_powers_cycle() {
        assert_eq!(i_pow::<GaussScalar>(-1), gi(0, -1));
        assert_eq!(i_pow::<GaussScalar>(6), gi(-1, 0));
    }

    #[test]
    fn parse_and_format() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3, big);
        assert!((rat_to_f64(&r) - 3.0).abs() < 1e-12);
    }
}
