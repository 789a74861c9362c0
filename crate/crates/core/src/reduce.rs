//! Reduction of arbitrary Mellin transforms to geometric series at order L:
//! unique constants r_k and r_{k,i} such that replacing the kernels of loop
//! order k by r_k/(rho(1-rho)) + sum_i r_{k,i} L^i / rho preserves the
//! Green function exactly.
//!
//! The defining evaluation runs in `Convention::SignedInsertion`, the
//! operator bookkeeping fixed by validating against the known cubic-theory
//! residue sequence (r_1 = -1/6, r_2 = -5/6^3, r_3 = -14/6^5, ...); see
//! `solver::Convention` for how it differs from the solver's convention.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::laurent::LaurentData;
use crate::rational::Rational;
use crate::solver::{assemble_rhs_conv, lhs_bivariate, solve_conv, Convention, KernelProblem, KernelTerm};
use crate::theory::TheorySpec;

/// The reduction residues per equation residue: r_k for 1 <= k <= N and
/// r_{k,i} for 1 <= i < k <= N, all exact rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult {
    residues: Vec<String>,
    truncation: usize,
    /// r[residue][k-1] = r_k
    r: BTreeMap<String, Vec<Rational>>,
    /// r_l[residue][k-1][i-1] = r_{k,i}
    r_l: BTreeMap<String, Vec<Vec<Rational>>>,
}

impl ReductionResult {
    fn zero(residues: &[String], truncation: usize) -> Self {
        ReductionResult {
            residues: residues.to_vec(),
            truncation,
            r: residues
                .iter()
                .map(|r| (r.clone(), vec![Rational::zero(); truncation]))
                .collect(),
            r_l: residues
                .iter()
                .map(|r| {
                    (
                        r.clone(),
                        (1..=truncation)
                            .map(|k| vec![Rational::zero(); k - 1])
                            .collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn residues(&self) -> &[String] {
        &self.residues
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// r_k, 1 <= k <= N.
    pub fn r_k(&self, residue: &str, k: usize) -> &Rational {
        &self.r[residue][k - 1]
    }

    /// r_{k,i}, 1 <= i < k.
    pub fn r_ki(&self, residue: &str, k: usize, i: usize) -> &Rational {
        &self.r_l[residue][k - 1][i - 1]
    }

    pub fn set_r_k(&mut self, residue: &str, k: usize, v: Rational) {
        self.r.get_mut(residue).unwrap()[k - 1] = v;
    }

    pub fn set_r_ki(&mut self, residue: &str, k: usize, i: usize, v: Rational) {
        self.r_l.get_mut(residue).unwrap()[k - 1][i - 1] = v;
    }

    /// The reduced kernel set: at every loop order k <= N the geometric
    /// kernel r_k/(rho(1-rho)) plus the pure-pole terms r_{k,i} L^i / rho.
    pub fn reduced_problem(&self, s: &BTreeMap<String, i64>) -> KernelProblem {
        let order = self.truncation;
        let kernels = self
            .residues
            .iter()
            .map(|r| {
                let by_loop = (1..=self.truncation)
                    .map(|k| {
                        let mut terms =
                            vec![KernelTerm::plain(LaurentData::geometric(self.r_k(r, k), order))];
                        for i in 1..k {
                            terms.push(KernelTerm {
                                laurent: LaurentData::pure_pole(self.r_ki(r, k, i), order),
                                l_shift: i,
                            });
                        }
                        (k, terms)
                    })
                    .collect();
                (r.clone(), by_loop)
            })
            .collect();
        KernelProblem {
            residues: self.residues.clone(),
            s: s.clone(),
            kernels,
            truncation: self.truncation,
        }
    }

    /// CSV rows residue,k,i,value; i = 0 denotes r_k.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("residue,k,i,value\n");
        for r in &self.residues {
            for k in 1..=self.truncation {
                out.push_str(&format!("{},{},0,{}\n", r, k, self.r_k(r, k)));
                for i in 1..k {
                    out.push_str(&format!("{},{},{},{}\n", r, k, i, self.r_ki(r, k, i)));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut residues = serde_json::Map::new();
        for r in &self.residues {
            let mut rows = Vec::new();
            for k in 1..=self.truncation {
                let mut row = serde_json::Map::new();
                row.insert("k".into(), serde_json::json!(k));
                row.insert("r".into(), serde_json::json!(self.r_k(r, k).to_string()));
                let l_terms: Vec<String> = (1..k)
                    .map(|i| self.r_ki(r, k, i).to_string())
                    .collect();
                row.insert("r_l".into(), serde_json::json!(l_terms));
                rows.push(serde_json::Value::Object(row));
            }
            residues.insert(r.clone(), serde_json::Value::Array(rows));
        }
        serde_json::json!({
            "truncation": self.truncation,
            "residues": residues,
        })
    }
}

/// Compute the unique reduction residues for the spec, order by order:
/// at order n the mismatch between the original right-hand side and the
/// reduced one (with the order-n constants still zero) is a polynomial in L
/// whose L^1 coefficient fixes r_n and whose L^{i+1} coefficient fixes
/// r_{n,i}, because the fresh kernels enter as -r_n L x^n - r_{n,i} L^{i+1} x^n
/// at leading order.
pub fn reduce(spec: &TheorySpec) -> Result<ReductionResult> {
    let problem = KernelProblem::from(spec);
    let gamma = solve_conv(&problem, Convention::SignedInsertion)?;
    let n_max = spec.truncation();
    let mut result = ReductionResult::zero(spec.residues(), n_max);

    let targets: BTreeMap<String, _> = spec
        .residues()
        .iter()
        .map(|r| (r.clone(), lhs_bivariate(&gamma, r)))
        .collect();

    for n in 1..=n_max {
        let reduced = result.reduced_problem(spec.s_map());
        let rhs = assemble_rhs_conv(&reduced, &gamma, n, Convention::SignedInsertion)?;
        for r in spec.residues() {
            let mismatch: Vec<Rational> = (0..=n)
                .map(|b| targets[r].coeff(n, b) - rhs[r].coeff(n, b))
                .collect();
            if !mismatch[0].is_zero() {
                return Err(Error::BadInput(format!(
                    "reduction mismatch at x^{n} has a constant L term; the spec is not a renormalized Dyson-Schwinger input"
                )));
            }
            result.set_r_k(r, n, -&mismatch[1].clone());
            for i in 1..n {
                result.set_r_ki(r, n, i, -&mismatch[i + 1].clone());
            }
        }
    }
    Ok(result)
}

/// Single-equation reduction.
pub fn reduce_single(spec: &TheorySpec) -> Result<ReductionResult> {
    assert!(spec.is_single(), "reduce_single needs exactly one residue");
    reduce(spec)
}

/// System reduction; degenerates to the single case for one residue.
pub fn reduce_system(spec: &TheorySpec) -> Result<ReductionResult> {
    reduce(spec)
}

/// Re-solves the equation with the reduced kernels from scratch and compares
/// the gamma tables for exact equality to O(x^{N+1}).
pub fn verify_reduction(spec: &TheorySpec, result: &ReductionResult) -> Result<bool> {
    let conv = Convention::SignedInsertion;
    let original = solve_conv(&KernelProblem::from(spec), conv)?;
    let reduced = solve_conv(&result.reduced_problem(spec.s_map()), conv)?;
    Ok(original == reduced)
}

/// Closed forms for the leading reduction residues of a single-equation,
/// single loop-1 primitive with s = 2, as polynomials in the kernel's
/// Laurent coefficients (f_{-1}, f_0, f_1, f_2). These give an independent
/// algebraic route against which the triangular solve is checked.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingResidues {
    pub r1: Rational,
    pub r2: Rational,
    pub r21: Rational,
    pub r3: Rational,
    pub r31: Rational,
    pub r32: Rational,
    pub r4: Rational,
    pub r41: Rational,
    pub r42: Rational,
    pub r43: Rational,
}

pub fn leading_residues_s2(f: &LaurentData) -> LeadingResidues {
    let fm = f.coeff(-1);
    let f0 = f.coeff(0);
    let f1 = f.coeff(1);
    let f2 = f.coeff(2);
    let q = |n: i64, d: i64| Rational::new(n, d);
    LeadingResidues {
        r1: fm.clone(),
        r2: &(fm * fm) - &(fm * f0),
        r21: Rational::zero(),
        r3: q(2, 1) * fm.pow(3)
            + &fm.pow(2) * &(&(&q(-4, 1) * f0) + f1)
            + fm * &f0.pow(2),
        r31: -fm.pow(3) + &fm.pow(2) * f0,
        r32: Rational::zero(),
        r4: q(2, 1) * fm.pow(4)
            + &fm.pow(3) * &(&(&q(-12, 1) * f0) + &(&q(6, 1) * f1) - f2)
            + &fm.pow(2) * &(&(&q(9, 1) * &f0.pow(2)) - &(&q(3, 1) * &(f0 * f1)))
            - &(fm * &f0.pow(3)),
        r41: -fm.pow(4)
            + &fm.pow(3) * &(&(&q(6, 1) * f0) - &(&q(2, 1) * f1))
            - &(&q(3, 1) * &(&fm.pow(2) * &f0.pow(2))),
        r42: &(&q(7, 6) * &fm.pow(4)) - &(&q(7, 6) * &(&fm.pow(3) * f0)),
        r43: Rational::zero(),
    }
}
