//! Borel-plane radius estimation for the anomalous-dimension series and
//! comparison against the closed-form value min{rho, 1/sum_j |s_j| a_1^j}.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::recursion::PrimitiveSeries;
use crate::series::RationalSeries;

/// a_n = gamma_{1,n}/n! as floats (index 0 holds a_1). The division happens
/// in exact arithmetic; only the final value is rounded.
pub fn borel_coefficients(gamma1: &RationalSeries) -> Vec<f64> {
    (1..=gamma1.truncation())
        .map(|n| (gamma1.coeff(n) * &Rational::factorial(n).recip()).to_f64())
        .collect()
}

/// Exact rational Borel coefficients, for the exact-arithmetic invariants.
pub fn borel_coefficients_exact(gamma1: &RationalSeries) -> Vec<Rational> {
    (1..=gamma1.truncation())
        .map(|n| gamma1.coeff(n) * &Rational::factorial(n).recip())
        .collect()
}

/// Result of the ratio-test extrapolation.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusEstimate {
    /// Finite radius estimate; `None` when the series is flagged as having
    /// infinite radius (trailing zeros, or ratios falling below resolution).
    pub value: Option<f64>,
    /// Domb-Sykes intercept (the extrapolated limit of a_n/a_{n-1}).
    pub intercept: f64,
    /// The radius approximants a_{n-1}/a_n over the fitted tail.
    pub ratios: Vec<f64>,
}

const MIN_USABLE_TERMS: usize = 10;

/// Domb-Sykes estimate: fit a_n/a_{n-1} = b0 + b1/n by least squares over
/// the tail half of the series and return 1/b0. Ratio corrections of order
/// 1/n are thereby removed, which matters at truncations below ~100 terms.
/// Intercepts below 1/(4N) are indistinguishable from an infinite radius at
/// truncation N and are flagged as such.
pub fn estimate_radius(a: &[f64]) -> Result<RadiusEstimate> {
    if a.len() < MIN_USABLE_TERMS {
        return Err(Error::InsufficientTerms {
            needed: MIN_USABLE_TERMS,
            got: a.len(),
        });
    }
    let last_nonzero = match a.iter().rposition(|v| *v != 0.0) {
        // the zero series trivially has infinite radius
        None => {
            return Ok(RadiusEstimate {
                value: None,
                intercept: 0.0,
                ratios: Vec::new(),
            })
        }
        Some(i) => i,
    };
    if a.len() - 1 - last_nonzero >= 2 {
        // a genuinely terminating Borel series: polynomial, infinite radius
        return Ok(RadiusEstimate {
            value: None,
            intercept: 0.0,
            ratios: Vec::new(),
        });
    }

    // tail window over indices (a[i] holds a_{i+1})
    let hi = last_nonzero;
    let lo = (hi / 2).max(1);
    let mut pts = Vec::new();
    let mut ratios = Vec::new();
    for i in lo..=hi {
        let (prev, cur) = (a[i - 1], a[i]);
        if prev == 0.0 || cur == 0.0 {
            continue;
        }
        let n = (i + 1) as f64; // a[i] is a_n with n = i+1
        pts.push((1.0 / n, (cur / prev).abs()));
        ratios.push((prev / cur).abs());
    }
    if pts.len() < MIN_USABLE_TERMS / 2 {
        return Err(Error::InsufficientTerms {
            needed: MIN_USABLE_TERMS / 2,
            got: pts.len(),
        });
    }
    let m = pts.len() as f64;
    let (st, sy, stt, sty) = pts.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, (t, y)| {
        (acc.0 + t, acc.1 + y, acc.2 + t * t, acc.3 + t * y)
    });
    let denom = m * stt - st * st;
    let b0 = (sy * stt - st * sty) / denom;
    let n_max = a.len() as f64;
    if b0 <= 1.0 / (4.0 * n_max) {
        return Ok(RadiusEstimate {
            value: None,
            intercept: b0,
            ratios,
        });
    }
    Ok(RadiusEstimate {
        value: Some(1.0 / b0),
        intercept: b0,
        ratios,
    })
}

/// Closed-form radius data.
#[derive(Clone, Debug, Serialize)]
pub struct TheoreticalRadius {
    /// `None` means infinite.
    pub value: Option<f64>,
    /// True when some p_r(k) < 0: only the lower bound
    /// min{rho_r, 1/|sum_j |s_j| a_1^j|} is claimed.
    pub lower_bound_only: bool,
    /// The single-equation boundary case s = 1, p = p(1) delta_{k,1}: the
    /// Borel series terminates and the radius is infinite despite
    /// 1/(|s| a_1) being finite.
    pub boundary_case: bool,
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Radius rho of f(x) = sum_k p(k) x^k / k!, exact where recognizable:
/// finite support gives infinity, an exactly constant tail ratio c of
/// p(k)/k! gives 1/c; anything else falls back to the ratio machinery.
fn primitive_radius(p: &RationalSeries) -> Result<Option<f64>> {
    let n = p.truncation();
    let b: Vec<Rational> = (1..=n)
        .map(|k| p.coeff(k) * &Rational::factorial(k).recip())
        .collect();
    let last_nonzero = match b.iter().rposition(|v| !v.is_zero()) {
        None => return Ok(None),
        Some(i) => i,
    };
    if last_nonzero + 1 < b.len() {
        // finitely many primitives: entire Borel input
        return Ok(None);
    }
    // exact constant-ratio recognition (covers p(k) = c^k k!)
    if b.iter().all(|v| !v.is_zero()) && b.len() >= 2 {
        let c = &b[1] / &b[0];
        if (1..b.len() - 1).all(|i| &b[i + 1] / &b[i] == c) {
            let c = c.to_f64().abs();
            return Ok(if c == 0.0 { None } else { Some(1.0 / c) });
        }
    }
    let floats: Vec<f64> = b.iter().map(Rational::to_f64).collect();
    Ok(estimate_radius(&floats)?.value)
}

/// min over r of {rho_r, 1/sum_j |s_j| a_1^j} with the infinity conventions;
/// for mixed-sign p the value is a lower bound and flagged as such.
pub fn theoretical_radius(
    p: &PrimitiveSeries,
    s: &BTreeMap<String, i64>,
) -> Result<TheoreticalRadius> {
    let residues = p.residues();
    let negative = residues
        .iter()
        .any(|r| p.series(r).coeffs().iter().any(Rational::is_negative));

    // a_1^j = gamma^j_{1,1} = p_j(1)
    let beta1: Rational = residues.iter().fold(Rational::zero(), |acc, r| {
        acc + Rational::from_int(s[r].abs()) * p.value(r, 1).clone()
    });
    let beta1 = beta1.to_f64();
    let pole_bound = if beta1 == 0.0 {
        None
    } else {
        Some(1.0 / beta1.abs())
    };

    let mut value = pole_bound;
    for r in residues {
        value = min_opt(value, primitive_radius(p.series(r))?);
    }

    // boundary case: single equation, s = 1, p supported at k = 1 only
    let boundary = residues.len() == 1 && {
        let r = &residues[0];
        let series = p.series(r);
        s[r] == 1
            && series.coeff(1).is_positive()
            && (2..=series.truncation()).all(|k| series.coeff(k).is_zero())
    };
    if boundary {
        return Ok(TheoreticalRadius {
            value: None,
            lower_bound_only: false,
            boundary_case: true,
        });
    }

    Ok(TheoreticalRadius {
        value,
        lower_bound_only: negative,
        boundary_case: false,
    })
}

/// Pairwise agreement of the per-residue radius estimates within a relative
/// tolerance. Residues flagged infinite must then all be infinite.
pub fn same_radius_check(
    gamma1: &BTreeMap<String, RationalSeries>,
    tolerance: f64,
) -> Result<bool> {
    let mut estimates = Vec::new();
    for g in gamma1.values() {
        estimates.push(estimate_radius(&borel_coefficients(g))?.value);
    }
    for i in 0..estimates.len() {
        for j in i + 1..estimates.len() {
            match (estimates[i], estimates[j]) {
                (None, None) => {}
                (Some(a), Some(b)) => {
                    if (a - b).abs() > tolerance * a.abs().max(b.abs()) {
                        return Ok(false);
                    }
                }
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// Per-residue radius summary.
#[derive(Clone, Debug, Serialize)]
pub struct ResidueRadiusReport {
    pub a: Vec<f64>,
    pub ratios: Vec<f64>,
    pub estimate: Option<f64>,
    pub intercept: f64,
    pub theoretical: Option<f64>,
    /// |estimate - theoretical| / theoretical, only when both are finite.
    pub relative_deviation: Option<f64>,
    pub negative_coefficients: bool,
    pub infinite_radius: bool,
    pub boundary_case: bool,
    pub lower_bound_only: bool,
}

/// Full report over all residues.
#[derive(Clone, Debug, Serialize)]
pub struct RadiusReport {
    pub truncation: usize,
    pub per_residue: BTreeMap<String, ResidueRadiusReport>,
}

/// Assemble the report for gamma_1 tables built from the primitive series.
pub fn radius_report(
    p: &PrimitiveSeries,
    s: &BTreeMap<String, i64>,
    gamma1: &BTreeMap<String, RationalSeries>,
) -> Result<RadiusReport> {
    let theory = theoretical_radius(p, s)?;
    let mut per_residue = BTreeMap::new();
    for r in p.residues() {
        let g = &gamma1[r];
        let exact = borel_coefficients_exact(g);
        let negative = exact.iter().any(Rational::is_negative);
        let a: Vec<f64> = exact.iter().map(Rational::to_f64).collect();
        let est = estimate_radius(&a)?;
        let deviation = match (est.value, theory.value) {
            (Some(e), Some(t)) if t != 0.0 => Some((e - t).abs() / t),
            _ => None,
        };
        per_residue.insert(
            r.clone(),
            ResidueRadiusReport {
                ratios: est.ratios.clone(),
                estimate: est.value,
                intercept: est.intercept,
                theoretical: theory.value,
                relative_deviation: deviation,
                negative_coefficients: negative,
                infinite_radius: est.value.is_none(),
                boundary_case: theory.boundary_case,
                lower_bound_only: theory.lower_bound_only,
                a,
            },
        );
    }
    Ok(RadiusReport {
        truncation: gamma1[&p.residues()[0]].truncation(),
        per_residue,
    })
}

impl RadiusReport {
    /// CSV of the Borel tables: residue,n,a_n.
    pub fn borel_csv(&self) -> String {
        let mut out = String::from("residue,n,a\n");
        for (r, rep) in &self.per_residue {
            for (i, v) in rep.a.iter().enumerate() {
                out.push_str(&format!("{},{},{}\n", r, i + 1, v));
            }
        }
        out
    }
}
