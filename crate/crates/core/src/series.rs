//! Truncated power series in x with exact rational coefficients.
//!
//! A series carries its own truncation order N and stores exactly N+1
//! coefficients (of x^0 .. x^N). Binary operations truncate to the minimum
//! of the two truncation orders.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
}

impl RationalSeries {
    /// Zero series truncated at order N.
    pub fn zero(truncation: usize) -> Self {
        RationalSeries {
            coeffs: vec![Rational::zero(); truncation + 1],
        }
    }

    /// Constant series c + O(x^{N+1}).
    pub fn constant(c: Rational, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.coeffs[0] = c;
        s
    }

    /// The monomial c x^n, or zero if n exceeds the truncation.
    pub fn monomial(c: Rational, n: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        if n <= truncation {
            s.coeffs[n] = c;
        }
        s
    }

    /// Build from coefficients; the truncation is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a series stores at least x^0");
        RationalSeries { coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, n: usize, c: Rational) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    /// Re-truncate to order `n` (extends with zeros when n > N).
    pub fn truncated(&self, n: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n + 1, Rational::zero());
        coeffs.truncate(n + 1);
        RationalSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// The Euler operator x d/dx: coefficient n maps to n * a_n.
    pub fn x_ddx(&self) -> Self {
        RationalSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a * &Rational::from_int(n as i64))
                .collect(),
        }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.truncation();
        let inv0 = a0.recip();
        let mut out = Self::zero(n);
        out.coeffs[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                acc += &(&self.coeffs[j] * &out.coeffs[k - j]);
            }
            out.coeffs[k] = -(acc * &inv0);
        }
        Ok(out)
    }

    /// Integer power a^e; negative exponents go through the reciprocal and
    /// therefore require a nonzero constant term.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::constant(Rational::one(), self.truncation()));
        }
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::constant(Rational::one(), self.truncation());
        let mut sq = base;
        let mut e = e.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Evaluate at a float point (Horner).
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a.to_f64();
        }
        acc
    }
}

impl fmt::Debug for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({a})x^{n}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.truncation() + 1)
    }
}

impl Add for &RationalSeries {
    type Output = RationalSeries;
    fn add(self, rhs: &RationalSeries) -> RationalSeries {
        let n = self.truncation().min(rhs.truncation());
        let coeffs = (0..=n)
            .map(|k| &self.coeffs[k] + &rhs.coeffs[k])
            .collect();
        RationalSeries { coeffs }
    }
}

impl Sub for &RationalSeries {
    type Output = RationalSeries;
    fn sub(self, rhs: &RationalSeries) -> RationalSeries {
        let n = self.truncation().min(rhs.truncation());
        let coeffs = (0..=n)
            .map(|k| &self.coeffs[k] - &rhs.coeffs[k])
            .collect();
        RationalSeries { coeffs }
    }
}

impl Mul for &RationalSeries {
    type Output = RationalSeries;
    fn mul(self, rhs: &RationalSeries) -> RationalSeries {
        let n = self.truncation().min(rhs.truncation());
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += &(a * b);
            }
        }
        RationalSeries { coeffs }
    }
}

impl Neg for &RationalSeries {
    type Output = RationalSeries;
    fn neg(self) -> RationalSeries {
        RationalSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(coeffs: &[i64]) -> RationalSeries {
        RationalSeries::from_coeffs(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    #[test]
    fn add_cancellation_and_identity() {
        // (1 + x) + (1 - x) = 2
        assert_eq!(&s(&[1, 1]) + &s(&[1, -1]), s(&[2, 0]));
        // 0 + f = f
        let f = s(&[3, 5, 7]);
        assert_eq!(&RationalSeries::zero(2) + &f, f);
        // (x + x^2) + (x^2) = x + 2x^2
        assert_eq!(&s(&[0, 1, 1]) + &s(&[0, 0, 1]), s(&[0, 1, 2]));
    }

    #[test]
    fn mul_truncates_to_min() {
        // (1+x)(1-x) = 1 - x^2
        assert_eq!(&s(&[1, 1, 0]) * &s(&[1, -1, 0]), s(&[1, 0, -1]));
        // x * x = x^2
        assert_eq!(&s(&[0, 1, 0]) * &s(&[0, 1, 0]), s(&[0, 0, 1]));
        // (1+x)^2 truncated at N=1 -> 1 + 2x
        assert_eq!(&s(&[1, 1]) * &s(&[1, 1]), s(&[1, 2]));
    }

    #[test]
    fn pow_geometric_and_binomial() {
        // (1+x)^{-1} at N=3 -> 1 - x + x^2 - x^3
        assert_eq!(s(&[1, 1, 0, 0]).pow(-1).unwrap(), s(&[1, -1, 1, -1]));
        // f^0 = 1
        assert_eq!(
            s(&[7, 3, 1]).pow(0).unwrap(),
            RationalSeries::constant(Rational::one(), 2)
        );
        // (1-x)^{-2} at N=2 -> 1 + 2x + 3x^2 (binomial series by hand)
        assert_eq!(s(&[1, -1, 0]).pow(-2).unwrap(), s(&[1, 2, 3]));
    }

    #[test]
    fn pow_rejects_zero_constant_term() {
        assert_eq!(s(&[0, 1]).pow(-1), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn euler_operator() {
        // x d/dx (x^2) = 2x^2
        assert_eq!(s(&[0, 0, 1]).x_ddx(), s(&[0, 0, 2]));
        // on a constant: 0
        assert_eq!(s(&[9]).x_ddx(), s(&[0]));
        // x + 4x^3 -> x + 12x^3
        assert_eq!(s(&[0, 1, 0, 4]).x_ddx(), s(&[0, 1, 0, 12]));
    }
}
