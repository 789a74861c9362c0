//! Triangular bivariate series: coefficient of x^n u^j stored for
//! 0 <= j <= n <= N, zero above the diagonal.
//!
//! Serves two roles. With u = L it holds the right-hand side of the
//! analytic Dyson-Schwinger equation (triangularity is the "lowest term"
//! lemma). With u marking the derivative order it is the graded algebra in
//! which operator powers (1 + sign(s) sum_i gamma_i(x) u^i)^p are expanded:
//! every u carries at least one x, so integer powers terminate.

use crate::rational::Rational;
use crate::series::RationalSeries;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariateSeries {
    truncation: usize,
    /// rows[n][j] = coefficient of x^n u^j, j <= n.
    rows: Vec<Vec<Rational>>,
}

impl BivariateSeries {
    pub fn zero(truncation: usize) -> Self {
        BivariateSeries {
            truncation,
            rows: (0..=truncation)
                .map(|n| vec![Rational::zero(); n + 1])
                .collect(),
        }
    }

    pub fn one(truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        s.rows[0][0] = Rational::one();
        s
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// Coefficient of x^n u^j (zero above the diagonal).
    pub fn coeff(&self, n: usize, j: usize) -> &Rational {
        static ZERO: std::sync::OnceLock<Rational> = std::sync::OnceLock::new();
        if j > n || n > self.truncation {
            ZERO.get_or_init(Rational::zero)
        } else {
            &self.rows[n][j]
        }
    }

    pub fn set_coeff(&mut self, n: usize, j: usize, c: Rational) {
        assert!(j <= n && n <= self.truncation, "above the diagonal");
        self.rows[n][j] = c;
    }

    pub fn add_to_coeff(&mut self, n: usize, j: usize, c: &Rational) {
        assert!(j <= n && n <= self.truncation, "above the diagonal");
        self.rows[n][j] += c;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Rational::is_zero)
    }

    /// Embed a series f(x) as f(x) * u^j (shifting into the triangle;
    /// terms with x-order < j must vanish, which holds for gamma_j = O(x^j)).
    pub fn from_series_times_u(f: &RationalSeries, j: usize, truncation: usize) -> Self {
        let mut s = Self::zero(truncation);
        for n in 0..=truncation.min(f.truncation()) {
            let c = f.coeff(n);
            if c.is_zero() {
                continue;
            }
            assert!(j <= n, "series term x^{n} u^{j} breaks triangularity");
            s.rows[n][j] = c.clone();
        }
        s
    }

    /// The u^j coefficient as a series in x.
    pub fn u_coefficient(&self, j: usize) -> RationalSeries {
        let mut out = RationalSeries::zero(self.truncation);
        for n in j..=self.truncation {
            out.set_coeff(n, self.rows[n][j].clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let t = self.truncation.min(rhs.truncation);
        let mut out = Self::zero(t);
        for n in 0..=t {
            for j in 0..=n {
                out.rows[n][j] = &self.rows[n][j] + &rhs.rows[n][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let t = self.truncation.min(rhs.truncation);
        let mut out = Self::zero(t);
        for n in 0..=t {
            for j in 0..=n {
                out.rows[n][j] = &self.rows[n][j] - &rhs.rows[n][j];
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for a in row {
                *a *= c;
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let t = self.truncation.min(rhs.truncation);
        let mut out = Self::zero(t);
        for n1 in 0..=t {
            for j1 in 0..=n1 {
                let a = &self.rows[n1][j1];
                if a.is_zero() {
                    continue;
                }
                for n2 in 0..=t - n1 {
                    for j2 in 0..=n2 {
                        let b = &rhs.rows[n2][j2];
                        if b.is_zero() {
                            continue;
                        }
                        out.rows[n1 + n2][j1 + j2] += &(a * b);
                    }
                }
            }
        }
        out
    }

    /// Multiply by the monomial x^k u^i, dropping overflow past the
    /// truncation. Requires i <= k so triangularity is preserved.
    pub fn mul_monomial(&self, k: usize, i: usize, c: &Rational) -> Self {
        assert!(i <= k);
        let mut out = Self::zero(self.truncation);
        for n in 0..=self.truncation.saturating_sub(k) {
            for j in 0..=n {
                let a = &self.rows[n][j];
                if a.is_zero() {
                    continue;
                }
                out.rows[n + k][j + i] = a * c;
            }
        }
        out
    }

    /// Integer power of a series with constant term 1, written 1 + T with
    /// T = O(x): sum_m binom(p, m) T^m, which terminates at m = N.
    pub fn one_plus_pow(t_part: &Self, p: i64) -> Self {
        let n = t_part.truncation;
        let mut acc = Self::zero(n);
        let mut t_power = Self::one(n);
        for m in 0..=n {
            let b = Rational::binomial(p, m);
            if !b.is_zero() {
                acc = acc.add(&t_power.scale(&b));
            }
            if m < n {
                t_power = t_power.mul(t_part);
            }
        }
        acc
    }

    /// Reciprocal of a series with constant term 1.
    pub fn recip_one_plus(t_part: &Self) -> Self {
        Self::one_plus_pow(t_part, -1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn mul_and_triangularity() {
        // (x u) * (x u) = x^2 u^2
        let mut a = BivariateSeries::zero(3);
        a.set_coeff(1, 1, q(1));
        let sq = a.mul(&a);
        assert_eq!(sq.coeff(2, 2), &q(1));
        assert_eq!(sq.coeff(2, 1), &q(0));
        assert_eq!(sq.coeff(3, 3), &q(0));
    }

    #[test]
    fn one_plus_pow_matches_recip() {
        // (1 + xu)^{-1} = 1 - xu + x^2u^2 - x^3u^3
        let mut t = BivariateSeries::zero(3);
        t.set_coeff(1, 1, q(1));
        let inv = BivariateSeries::recip_one_plus(&t);
        assert_eq!(inv.coeff(0, 0), &q(1));
        assert_eq!(inv.coeff(1, 1), &q(-1));
        assert_eq!(inv.coeff(2, 2), &q(1));
        assert_eq!(inv.coeff(3, 3), &q(-1));
        // and (1+T)^{-1} * (1+T) = 1
        let one_plus = BivariateSeries::one(3).add(&t);
        assert_eq!(inv.mul(&one_plus), BivariateSeries::one(3));
    }

    #[test]
    fn one_plus_pow_negative_exponent() {
        // (1 + xu)^{-2}: coefficient of x^m u^m is binom(-2, m) = (-1)^m (m+1)
        let mut t = BivariateSeries::zero(4);
        t.set_coeff(1, 1, q(1));
        let p = BivariateSeries::one_plus_pow(&t, -2);
        for m in 0..=4usize {
            let expect = if m % 2 == 0 {
                q(m as i64 + 1)
            } else {
                -q(m as i64 + 1)
            };
            assert_eq!(p.coeff(m, m), &expect);
        }
    }
}
