//! Exact Gaussian rationals `a + b·i` with `a, b ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::AlgebraError;

/// A Gaussian rational number. Both parts are kept in lowest terms with a
/// positive denominator (guaranteed by `BigRational`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `|z|²`, always a non-negative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Height measure used for reporting witnesses: `max(|re|, |im|)`.
    pub fn magnitude(&self) -> BigRational {
        let a = self.re.abs();
        let b = self.im.abs();
        if a > b {
            a
        } else {
            b
        }
    }

    /// Wire form used in fixture serialization: `"num/den"` for real values,
    /// `"a+bi"` (parts as `num/den`) otherwise.
    pub fn to_wire(&self) -> String {
        fn part(r: &BigRational) -> String {
            format!("{}/{}", r.numer(), r.denom())
        }
        if self.is_real() {
            part(&self.re)
        } else {
            let im = part(&self.im.abs());
            let sign = if self.im.is_negative() { '-' } else { '+' };
            format!("{}{}{}i", part(&self.re), sign, im)
        }
    }

    pub fn from_wire(s: &str) -> Result<Self, AlgebraError> {
        let bad = || AlgebraError::BadScalar(s.to_string());
        let parse_part = |p: &str| -> Result<BigRational, AlgebraError> {
            let (n, d) = match p.split_once('/') {
                Some((n, d)) => (n, d),
                None => (p, "1"),
            };
            let n = BigInt::from_str(n).map_err(|_| bad())?;
            let d = BigInt::from_str(d).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        };
        if let Some(body) = s.strip_suffix('i') {
            // split at the sign that separates the imaginary part (skip a leading sign)
            let idx = body
                .char_indices()
                .skip(1)
                .filter(|(_, c)| *c == '+' || *c == '-')
                .map(|(i, _)| i)
                .last()
                .ok_or_else(bad)?;
            let (re, im) = body.split_at(idx);
            let im = im.strip_prefix('+').unwrap_or(im);
            Ok(Self::new(parse_part(re)?, parse_part(im)?))
        } else {
            Ok(Self::real(parse_part(s)?))
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::real(BigRational::one())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        let im = if self.im.is_zero() && o.im.is_zero() { BigRational::zero() } else { &self.im + &o.im };
        GaussianRational { re: &self.re + &o.re, im }
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        let im = if self.im.is_zero() && o.im.is_zero() { BigRational::zero() } else { &self.im - &o.im };
        GaussianRational { re: &self.re - &o.re, im }
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl Div for GaussianRational {
    type Output = Self;
    /// Panics on division by zero; use [`GaussianRational::inv`] to handle it.
    fn div(self, o: Self) -> Self {
        &self * &o.inv().expect("division by zero")
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Prints in the expression grammar: `3/2`, `-1`, `2*i`, `(1/2+3*i)`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write_rational(f, &self.re);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return write!(f, "i");
            }
            write_rational(f, &self.im)?;
            return write!(f, "*i");
        }
        write!(f, "(")?;
        write_rational(f, &self.re)?;
        if self.im.is_negative() {
            write!(f, "-")?;
        } else {
            write!(f, "+")?;
        }
        let m = self.im.abs();
        if !m.is_one() {
            write_rational(f, &m)?;
            write!(f, "*")?;
        }
        write!(f, "i)")
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = GaussianRational::from_ratio(2, -4);
        assert_eq!(a.re.numer(), &BigInt::from(-1));
        assert_eq!(a.re.denom(), &BigInt::from(2));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_int(-1));
    }

    #[test]
    fn inverse() {
        let z = GaussianRational::new(BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_err());
    }

    #[test]
    fn wire_round_trip() {
        for z in [
            GaussianRational::from_ratio(-3, 7),
            GaussianRational::new(BigRational::new(1.into(), 2.into()), BigRational::new((-5).into(), 3.into())),
            GaussianRational::new(BigRational::new((-1).into(), 2.into()), BigRational::new(5.into(), 3.into())),
        ] {
            assert_eq!(GaussianRational::from_wire(&z.to_wire()).unwrap(), z);
        }
    }

    #[test]
    fn display() {
        assert_eq!(GaussianRational::from_ratio(3, 2).to_string(), "3/2");
        assert_eq!(GaussianRational::i().to_string(), "i");
        let z = GaussianRational::new(BigRational::from_integer(1.into()), BigRational::from_integer((-2).into()));
        assert_eq!(z.to_string(), "(1-2*i)");
    }
}
