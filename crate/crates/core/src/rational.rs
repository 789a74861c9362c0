//! Arbitrary-precision rational scalar used by every exact layer.
//!
//! Wraps `num::BigRational` so the rest of the crate gets a compact name,
//! the serialization format of the external interfaces ("p/q", with "/q"
//! omitted when the denominator is 1), and a few conveniences (integer
//! powers, binomial coefficients, float conversion).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// p/q from machine integers. Panics if `q == 0`.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero rational");
        Rational(self.0.recip())
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Rational::one();
        }
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut acc = BigRational::one();
        let mut base = self.0.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Rational(acc)
    }

    /// n! as an exact rational.
    pub fn factorial(n: usize) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= BigInt::from(k);
        }
        Rational(BigRational::from_integer(acc))
    }

    /// Generalized binomial coefficient binom(p, m) for integer (possibly
    /// negative) upper argument: p(p-1)...(p-m+1)/m!.
    pub fn binomial(p: i64, m: usize) -> Self {
        let mut num = BigInt::one();
        for t in 0..m {
            num *= BigInt::from(p) - BigInt::from(t as i64);
        }
        let mut den = BigInt::one();
        for t in 2..=m {
            den *= BigInt::from(t);
        }
        Rational(BigRational::new(num, den))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt, Error> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::BadInput(format!("invalid integer: {t:?}")))
        };
        match s.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_int(s)?))),
            Some((p, q)) => {
                let den = parse_int(q)?;
                if den.is_zero() {
                    return Err(Error::BadInput(format!("zero denominator in {s:?}")));
                }
                Ok(Rational(BigRational::new(parse_int(p)?, den)))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl From<(i64, i64)> for Rational {
    fn from((p, q): (i64, i64)) -> Self {
        Rational::new(p, q)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        let r = Rational::new(-14, 7776);
        assert_eq!(r.to_string(), "-7/3888");
        assert_eq!(Rational::new(6, 3).to_string(), "2");
        assert_eq!(Rational::new(1, -2).to_string(), "-1/2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-1/6", "563/279936", "42"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn powers_and_binomials() {
        assert_eq!(Rational::new(2, 3).pow(-2), Rational::new(9, 4));
        assert_eq!(Rational::from_int(6).pow(5), Rational::from_int(7776));
        // binom(-1, m) = (-1)^m
        assert_eq!(Rational::binomial(-1, 3), Rational::from_int(-1));
        assert_eq!(Rational::binomial(-2, 2), Rational::from_int(3));
        assert_eq!(Rational::binomial(4, 2), Rational::from_int(6));
        assert_eq!(Rational::binomial(2, 5), Rational::zero());
    }

    #[test]
    fn factorial_and_float() {
        assert_eq!(Rational::factorial(5), Rational::from_int(120));
        assert!((Rational::new(1, 3).to_f64() - 1.0 / 3.0).abs() < 1e-15);
    }
}
