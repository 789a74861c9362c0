//! The renormalization-group recursions: gamma_1 from the effective
//! primitive series p(k) (second recursion), the full triangular table from
//! gamma_1 (first recursion), and the p(k) extraction from a geometric
//! reduction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::reduce::ReductionResult;
use crate::series::RationalSeries;
use crate::solver::{solve_single, sign};
use crate::theory::{GammaTable, TheorySpec};

/// Where a primitive series came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Direct,
    FromReduction,
}

/// Per-residue effective primitive contributions p_r(k), 1 <= k <= N,
/// stored as series with vanishing constant term.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveSeries {
    residues: Vec<String>,
    p: BTreeMap<String, RationalSeries>,
    provenance: Provenance,
}

impl PrimitiveSeries {
    pub fn new(
        residues: Vec<String>,
        p: BTreeMap<String, RationalSeries>,
        provenance: Provenance,
    ) -> Self {
        for r in &residues {
            assert!(p.contains_key(r), "missing p series for residue {r}");
            assert!(p[r].coeff(0).is_zero(), "p has no constant term");
        }
        PrimitiveSeries {
            residues,
            p,
            provenance,
        }
    }

    /// Single-residue series from the coefficients p(1), p(2), ...
    pub fn single(p_values: &[Rational], truncation: usize) -> Self {
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend_from_slice(p_values);
        coeffs.resize(truncation + 1, Rational::zero());
        coeffs.truncate(truncation + 1);
        Self::new(
            vec!["f".to_string()],
            BTreeMap::from([("f".to_string(), RationalSeries::from_coeffs(coeffs))]),
            Provenance::Direct,
        )
    }

    pub fn residues(&self) -> &[String] {
        &self.residues
    }

    pub fn series(&self, residue: &str) -> &RationalSeries {
        &self.p[residue]
    }

    /// p_r(k).
    pub fn value(&self, residue: &str, k: usize) -> &Rational {
        self.p[residue].coeff(k)
    }

    pub fn truncation(&self) -> usize {
        self.p[&self.residues[0]].truncation()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// p_r(k) = -r_k - 2 r_{k,1} (with r_{k,1} = 0 when k = 1).
pub fn p_from_reduction(red: &ReductionResult) -> PrimitiveSeries {
    let n = red.truncation();
    let p = red
        .residues()
        .iter()
        .map(|r| {
            let mut coeffs = vec![Rational::zero(); n + 1];
            for k in 1..=n {
                let mut v = -red.r_k(r, k);
                if k >= 2 {
                    v = v - Rational::from_int(2) * red.r_ki(r, k, 1).clone();
                }
                coeffs[k] = v;
            }
            (r.clone(), RationalSeries::from_coeffs(coeffs))
        })
        .collect();
    PrimitiveSeries::new(red.residues().to_vec(), p, Provenance::FromReduction)
}

/// gamma_{1,n} = p(n) + sum_{j=1}^{n-1} (|s| j - sign(s)) gamma_{1,j} gamma_{1,n-j}.
pub fn second_recursion_single(p: &RationalSeries, s: i64) -> RationalSeries {
    assert!(s != 0, "s = 0 is out of scope");
    let n_max = p.truncation();
    let mut g = RationalSeries::zero(n_max);
    for n in 1..=n_max {
        let mut acc = p.coeff(n).clone();
        for j in 1..n {
            let w = Rational::from_int(s.abs() * j as i64 - sign(s));
            acc += &(&w * &(g.coeff(j) * g.coeff(n - j)));
        }
        g.set_coeff(n, acc);
    }
    g
}

/// Coupled system version: the cross terms carry weight |s_j| i on
/// gamma^j_{1,n-i} gamma^r_{1,i}.
pub fn second_recursion_system(
    p: &PrimitiveSeries,
    s: &BTreeMap<String, i64>,
) -> BTreeMap<String, RationalSeries> {
    let n_max = p.truncation();
    let residues = p.residues().to_vec();
    let mut g: BTreeMap<String, RationalSeries> = residues
        .iter()
        .map(|r| (r.clone(), RationalSeries::zero(n_max)))
        .collect();
    for n in 1..=n_max {
        let mut row = BTreeMap::new();
        for r in &residues {
            let s_r = s[r];
            let mut acc = p.value(r, n).clone();
            for i in 1..n {
                let own = Rational::from_int(s_r.abs() * i as i64 - sign(s_r));
                acc += &(&own * &(g[r].coeff(i) * g[r].coeff(n - i)));
                for j in &residues {
                    if j == r {
                        continue;
                    }
                    let cross = Rational::from_int(s[j].abs() * i as i64);
                    acc += &(&cross * &(g[j].coeff(n - i) * g[r].coeff(i)));
                }
            }
            row.insert(r.clone(), acc);
        }
        for (r, v) in row {
            g.get_mut(&r).unwrap().set_coeff(n, v);
        }
    }
    g
}

/// gamma^r_k = (1/k) (sign(s_r) gamma^r_1 - sum_j |s_j| gamma^j_1 x d/dx) gamma^r_{k-1}.
pub fn first_recursion(
    residues: &[String],
    s: &BTreeMap<String, i64>,
    gamma1: &BTreeMap<String, RationalSeries>,
    k_max: usize,
) -> GammaTable {
    let n_max = gamma1[&residues[0]].truncation();
    assert!(k_max <= n_max, "K exceeds the series truncation");
    let mut table = GammaTable::zero(residues, n_max);
    for r in residues {
        table.set_gamma(r, 1, gamma1[r].clone());
    }
    for k in 2..=k_max {
        for r in residues {
            let prev = table.gamma(r, k - 1).clone();
            let mut acc = (&gamma1[r] * &prev).scale(&Rational::from_int(sign(s[r])));
            let euler = prev.x_ddx();
            for j in residues {
                let w = Rational::from_int(s[j].abs());
                acc = &acc - &(&gamma1[j] * &euler).scale(&w);
            }
            table.set_gamma(r, k, acc.scale(&Rational::from_int(k as i64).recip()));
        }
    }
    table
}

/// Single-equation convenience wrapper.
pub fn first_recursion_single(gamma1: &RationalSeries, s: i64, k_max: usize) -> GammaTable {
    let residues = vec!["f".to_string()];
    first_recursion(
        &residues,
        &BTreeMap::from([("f".to_string(), s)]),
        &BTreeMap::from([("f".to_string(), gamma1.clone())]),
        k_max,
    )
}

/// Finite-order identity special to the cubic-theory kernel
/// F = -1/(rho(1-rho)(2-rho)(3-rho)) with s = 2: from the exact partial
/// fractions rho F = -1/6 + (11/6) rho^2 F - rho^3 F + (1/6) rho^4 F and
/// x Op rho^j F|_0 = (-1)^j j! gamma_j, the solved table satisfies
/// gamma_1 = x/6 - (11/3) gamma_2 - 6 gamma_3 - 4 gamma_4 exactly.
pub fn phi3_fourth_order_check(spec: &TheorySpec) -> Result<bool> {
    if !spec.is_single() || spec.s("f") != 2 {
        return Err(Error::BadInput(
            "the fourth-order identity applies to the single s = 2 cubic-theory kernel".into(),
        ));
    }
    let gamma = solve_single(spec)?;
    let n = spec.truncation();
    let mut lhs = gamma.gamma1("f").clone();
    if n >= 2 {
        lhs = &lhs + &gamma.gamma("f", 2).scale(&Rational::new(11, 3));
    }
    if n >= 3 {
        lhs = &lhs + &gamma.gamma("f", 3).scale(&Rational::from_int(6));
    }
    if n >= 4 {
        lhs = &lhs + &gamma.gamma("f", 4).scale(&Rational::from_int(4));
    }
    let rhs = RationalSeries::monomial(Rational::new(1, 6), 1, n);
    Ok(lhs == rhs)
}

/// The tuned two-residue system with s = (2, -1) whose second residue
/// collapses: p^2(1) = p^1(1), p^2(2) = -4 (gamma^2_{1,1})^2, and
/// p^2(n) = -2 gamma^2_{1,1} gamma^1_{1,n-1} for n >= 3 force
/// gamma^2_{1,n} = 0 for all n >= 2, leaving p^1 free. Returns
/// (gamma^1_1, gamma^2_1).
pub fn tuned_degenerate_system(p1: &RationalSeries) -> (RationalSeries, RationalSeries) {
    let n_max = p1.truncation();
    let a1 = p1.coeff(1).clone(); // gamma^2_{1,1} = p^2(1) = p^1(1)
    let mut g1 = RationalSeries::zero(n_max);
    let mut g2 = RationalSeries::zero(n_max);
    for n in 1..=n_max {
        let p2_n = if n == 1 {
            a1.clone()
        } else if n == 2 {
            Rational::from_int(-4) * &a1 * &a1
        } else {
            Rational::from_int(-2) * &a1 * g1.coeff(n - 1)
        };
        // residue 1: s_1 = 2; own weight 2i-1, cross weight |s_2| i = i
        let mut v1 = p1.coeff(n).clone();
        // residue 2: s_2 = -1; own weight i+1, cross weight |s_1| i = 2i
        let mut v2 = p2_n;
        for i in 1..n {
            let own1 = Rational::from_int(2 * i as i64 - 1);
            v1 += &(&own1 * &(g1.coeff(i) * g1.coeff(n - i)));
            let cross1 = Rational::from_int(i as i64);
            v1 += &(&cross1 * &(g2.coeff(n - i) * g1.coeff(i)));
            let own2 = Rational::from_int(i as i64 + 1);
            v2 += &(&own2 * &(g2.coeff(i) * g2.coeff(n - i)));
            let cross2 = Rational::from_int(2 * i as i64);
            v2 += &(&cross2 * &(g1.coeff(n - i) * g2.coeff(i)));
        }
        g1.set_coeff(n, v1);
        g2.set_coeff(n, v2);
    }
    (g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentData;
    use crate::reduce::reduce_single;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn delta1(n: usize) -> RationalSeries {
        RationalSeries::monomial(Rational::one(), 1, n)
    }

    #[test]
    fn yukawa_sequence() {
        // s = 2, p = delta_1: 1, 1, 4, 27, 248
        let g = second_recursion_single(&delta1(5), 2);
        let expect: Vec<Rational> = ["0", "1", "1", "4", "27", "248"]
            .iter()
            .map(|s| q(s))
            .collect();
        assert_eq!(g.coeffs(), expect.as_slice());
    }

    #[test]
    fn s1_boundary_is_linear() {
        // s = 1, p = delta_1: gamma_1(x) = x exactly
        let g = second_recursion_single(&delta1(10), 1);
        assert_eq!(g, RationalSeries::monomial(Rational::one(), 1, 10));
        // and p = 0 gives 0
        let z = second_recursion_single(&RationalSeries::zero(6), 2);
        assert!(z.is_zero());
    }

    #[test]
    fn system_degenerates_to_single() {
        let p = PrimitiveSeries::single(&[q("1"), q("1/2")], 6);
        let sys = second_recursion_system(&p, &BTreeMap::from([("f".to_string(), 3i64)]));
        assert_eq!(sys["f"], second_recursion_single(p.series("f"), 3));
    }

    #[test]
    fn symmetric_system_is_symmetric() {
        let mut coeffs = vec![Rational::zero(), q("1"), q("1/3")];
        coeffs.resize(7, Rational::zero());
        let series = RationalSeries::from_coeffs(coeffs);
        let p = PrimitiveSeries::new(
            vec!["a".into(), "b".into()],
            BTreeMap::from([
                ("a".to_string(), series.clone()),
                ("b".to_string(), series),
            ]),
            Provenance::Direct,
        );
        let s = BTreeMap::from([("a".to_string(), 2i64), ("b".to_string(), 2i64)]);
        let sys = second_recursion_system(&p, &s);
        assert_eq!(sys["a"], sys["b"]);
    }

    #[test]
    fn tuned_system_collapses() {
        let p1 = {
            let mut c = vec![Rational::zero(); 21];
            c[1] = q("1");
            RationalSeries::from_coeffs(c)
        };
        let (g1, g2) = tuned_degenerate_system(&p1);
        assert_eq!(g2.coeff(1), g1.coeff(1));
        for n in 2..=20 {
            assert!(g2.coeff(n).is_zero(), "gamma^2_{{1,{n}}} should vanish");
        }
        // the first residue stays nontrivial
        assert!(!g1.coeff(5).is_zero());
    }

    #[test]
    fn first_recursion_hand_value() {
        // s = 2, gamma_1 = x + x^2 + 4x^3: gamma_2 = -x^2/2 - 2x^3
        let g1 = RationalSeries::from_coeffs(vec![q("0"), q("1"), q("1"), q("4")]);
        let table = first_recursion_single(&g1, 2, 3);
        assert_eq!(
            table.gamma("f", 2).coeffs(),
            &[q("0"), q("0"), q("-1/2"), q("-2")]
        );
        // lowest order of gamma_k is at least k
        assert!(table.is_triangular());
        // zero input stays zero
        let z = first_recursion_single(&RationalSeries::zero(4), 2, 4);
        assert_eq!(z, GammaTable::zero(&["f".to_string()], 4));
    }

    #[test]
    fn solver_tables_satisfy_first_recursion() {
        // the solver's convention is pinned by this exact consistency
        for (s, coeffs) in [
            (2i64, vec!["-1/6", "-11/36", "-85/216", "1/2", "0", "0", "0"]),
            (-2, vec!["-1", "2", "-3", "4", "-5", "6", "-7"]),
            (3, vec!["2/3", "-1/5", "1", "3", "-2", "1/7", "0"]),
        ] {
            let f = LaurentData::from_coeffs(coeffs.iter().map(|c| q(c)).collect());
            let spec =
                TheorySpec::single(s, BTreeMap::from([(1usize, vec![f])]), 6).unwrap();
            let solved = solve_single(&spec).unwrap();
            let rebuilt = first_recursion_single(solved.gamma1("f"), s, 6);
            assert_eq!(solved, rebuilt, "first recursion must rebuild the table (s={s})");
        }
    }

    #[test]
    fn phi3_p_values() {
        let n = 4usize;
        let f = LaurentData::from_poles(&q("-1"), &[q("1"), q("2"), q("3")], n).unwrap();
        let spec = TheorySpec::single(2, BTreeMap::from([(1usize, vec![f])]), n).unwrap();
        let p = p_from_reduction(&reduce_single(&spec).unwrap());
        assert_eq!(p.value("f", 1), &q("1/6"));
        assert_eq!(p.value("f", 2), &q("5/216"));
        assert_eq!(p.value("f", 3), &q("37/3888"));
        assert_eq!(p.provenance(), Provenance::FromReduction);
    }

    #[test]
    fn phi3_fourth_order_identity() {
        let f = LaurentData::from_poles(&q("-1"), &[q("1"), q("2"), q("3")], 8).unwrap();
        let spec = TheorySpec::single(2, BTreeMap::from([(1usize, vec![f])]), 8).unwrap();
        assert!(phi3_fourth_order_check(&spec).unwrap());
        // the identity is specific to this kernel
        let g = LaurentData::geometric(&q("-1/6"), 8);
        let other = TheorySpec::single(2, BTreeMap::from([(1usize, vec![g])]), 8).unwrap();
        assert!(!phi3_fourth_order_check(&other).unwrap());
        // at N = 1 both sides are x/6
        let f1 = LaurentData::from_poles(&q("-1"), &[q("1"), q("2"), q("3")], 1).unwrap();
        let spec1 = TheorySpec::single(2, BTreeMap::from([(1usize, vec![f1])]), 1).unwrap();
        assert!(phi3_fourth_order_check(&spec1).unwrap());
    }

    #[test]
    fn geometric_kernel_end_to_end_equivalence() {
        // for geometric kernels the reduction is a fixed point and the
        // solver agrees with the recursion chain exactly
        let c = q("-3/7");
        let f = LaurentData::geometric(&c, 6);
        let spec = TheorySpec::single(2, BTreeMap::from([(1usize, vec![f])]), 6).unwrap();
        let solved = solve_single(&spec).unwrap();
        let red = reduce_single(&spec).unwrap();
        let p = p_from_reduction(&red);
        let g1 = second_recursion_single(p.series("f"), 2);
        assert_eq!(&g1, solved.gamma1("f"));
        let rebuilt = first_recursion_single(&g1, 2, 6);
        assert_eq!(rebuilt, solved);
    }

    #[test]
    fn moment_scaling_homogeneity() {
        // scaling f_j by lambda^{j+1} scales gamma_{k,j} by lambda^{j-k}
        let lambda = q("5/3");
        let base: Vec<Rational> = ["-1/2", "1/3", "2", "-3/5", "1/7", "0", "0"]
            .iter()
            .map(|s| q(s))
            .collect();
        let scaled: Vec<Rational> = base
            .iter()
            .enumerate()
            .map(|(idx, c)| c * &lambda.pow(idx as i64)) // idx = j + 1
            .collect();
        let n = 6usize;
        let spec = |coeffs: Vec<Rational>| {
            TheorySpec::single(
                2,
                BTreeMap::from([(1usize, vec![LaurentData::from_coeffs(coeffs)])]),
                n,
            )
            .unwrap()
        };
        let g_base = solve_single(&spec(base)).unwrap();
        let g_scaled = solve_single(&spec(scaled)).unwrap();
        for k in 1..=n {
            for j in k..=n {
                let expect = g_base.entry("f", k, j) * &lambda.pow(j as i64 - k as i64);
                assert_eq!(&expect, g_scaled.entry("f", k, j), "at (k,j)=({k},{j})");
            }
        }
    }
}
