//! Laurent coefficients of a Mellin transform about its simple pole at the
//! origin: F(rho) = sum_{j >= -1} f_j rho^j, stored as f_{-1}, f_0, ..., f_M.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::RationalSeries;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentData {
    /// coeffs[0] = f_{-1} (the residue), coeffs[j+1] = f_j.
    coeffs: Vec<Rational>,
}

impl LaurentData {
    /// Build from f_{-1}, f_0, ..., f_M.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "Laurent data stores at least f_{{-1}}");
        LaurentData { coeffs }
    }

    /// Highest stored power M.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 2
    }

    /// f_j for -1 <= j <= M.
    pub fn coeff(&self, j: i64) -> &Rational {
        &self.coeffs[(j + 1) as usize]
    }

    pub fn residue(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LaurentData {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// r/(rho(1-rho)): f_j = r for all -1 <= j <= M.
    pub fn geometric(r: &Rational, order: usize) -> Self {
        LaurentData {
            coeffs: vec![r.clone(); order + 2],
        }
    }

    /// The pure pole r/rho: f_{-1} = r, all other coefficients zero.
    pub fn pure_pole(r: &Rational, order: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); order + 2];
        coeffs[0] = r.clone();
        LaurentData { coeffs }
    }

    /// Laurent expansion of scale / (rho * prod_i (p_i - rho)) about rho = 0,
    /// up to f_{order}. Errors if any pole sits at the origin.
    pub fn from_poles(scale: &Rational, poles: &[Rational], order: usize) -> Result<Self> {
        if poles.iter().any(Rational::is_zero) {
            return Err(Error::PoleAtOrigin);
        }
        // 1/(p - rho) = (1/p) sum_t (rho/p)^t, multiplied out exactly;
        // the overall 1/rho then shifts indices down by one.
        let mut prod = RationalSeries::constant(Rational::one(), order + 1);
        for p in poles {
            let inv_p = p.recip();
            let geo = RationalSeries::from_coeffs(
                (0..=order + 1).map(|t| inv_p.pow(t as i64 + 1)).collect(),
            );
            prod = &prod * &geo;
        }
        let coeffs = (0..=order + 1)
            .map(|t| prod.coeff(t) * scale)
            .collect();
        Ok(LaurentData { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn geometric_shapes() {
        // 1/(rho(1-rho)) = sum_{j >= -1} rho^j
        let g = LaurentData::geometric(&Rational::one(), 2);
        assert_eq!(g.coeffs(), &[q("1"), q("1"), q("1"), q("1")]);
        assert!(LaurentData::geometric(&Rational::zero(), 3).is_zero());
        let g = LaurentData::geometric(&q("-1/6"), 1);
        assert_eq!(g.coeffs(), &[q("-1/6"), q("-1/6"), q("-1/6")]);
    }

    #[test]
    fn from_poles_phi3() {
        // F(rho) = -1/(rho(1-rho)(2-rho)(3-rho))
        let f = LaurentData::from_poles(&q("-1"), &[q("1"), q("2"), q("3")], 4).unwrap();
        assert_eq!(f.residue(), &q("-1/6"));
        // expanded by hand: -1/6 * (1 + 11/6 rho + ...)
        assert_eq!(f.coeff(0), &q("-11/36"));
        assert_eq!(f.coeff(1), &q("-85/216"));
    }

    #[test]
    fn from_poles_single_pole_is_geometric() {
        let f = LaurentData::from_poles(&Rational::one(), &[Rational::one()], 5).unwrap();
        assert_eq!(f, LaurentData::geometric(&Rational::one(), 5));
    }

    #[test]
    fn from_poles_rejects_origin() {
        assert_eq!(
            LaurentData::from_poles(&Rational::one(), &[Rational::zero()], 3),
            Err(Error::PoleAtOrigin)
        );
    }

    #[test]
    fn from_poles_reexpansion_identity() {
        // result * rho * prod(p_i - rho), re-expanded, equals scale + O(rho^{M+1})
        let scale = q("3/7");
        let poles = [q("2"), q("-5/3")];
        let m = 6usize;
        let f = LaurentData::from_poles(&scale, &poles, m).unwrap();
        // rho*F has coefficients f_{-1}, f_0, ... as an ordinary series
        let rho_f = RationalSeries::from_coeffs(f.coeffs().to_vec());
        let mut prod = rho_f;
        for p in &poles {
            let lin = RationalSeries::from_coeffs(vec![p.clone(), q("-1")]).truncated(m + 1);
            prod = &prod * &lin;
        }
        let mut expect = RationalSeries::zero(prod.truncation());
        expect.set_coeff(0, scale);
        assert_eq!(prod, expect);
    }
}
