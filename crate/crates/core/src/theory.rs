//! Theory data: residue set, per-residue exponents s_r, Mellin Laurent data
//! per loop order, truncation; and the solved triangular gamma tables.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentData;
use crate::rational::Rational;
use crate::series::RationalSeries;

/// Input data of a (possibly system of) Dyson-Schwinger equation(s).
#[derive(Clone, Debug, PartialEq)]
pub struct TheorySpec {
    residues: Vec<String>,
    s: BTreeMap<String, i64>,
    /// per residue, per loop order k >= 1: the primitives' Laurent data
    mellin: BTreeMap<String, BTreeMap<usize, Vec<LaurentData>>>,
    truncation: usize,
}

impl TheorySpec {
    pub fn new(
        residues: Vec<String>,
        s: BTreeMap<String, i64>,
        mellin: BTreeMap<String, BTreeMap<usize, Vec<LaurentData>>>,
        truncation: usize,
    ) -> Result<Self> {
        if residues.is_empty() {
            return Err(Error::BadInput("at least one residue is required".into()));
        }
        if truncation == 0 {
            return Err(Error::BadInput("truncation must be >= 1".into()));
        }
        for r in &residues {
            match s.get(r) {
                None => return Err(Error::UnknownResidue(r.clone())),
                Some(0) => {
                    return Err(Error::BadInput(format!(
                        "s[{r}] = 0 is rejected: the s = 0 case is the strictly simpler linear situation and is out of scope"
                    )))
                }
                Some(_) => {}
            }
        }
        for (r, by_loop) in &mellin {
            if !residues.contains(r) {
                return Err(Error::UnknownResidue(r.clone()));
            }
            for (&k, prims) in by_loop {
                if k == 0 {
                    return Err(Error::BadInput(format!(
                        "mellin[{r}] has a primitive at loop order 0"
                    )));
                }
                for p in prims {
                    if p.order() + 1 < truncation {
                        return Err(Error::InsufficientLaurentOrder {
                            order: p.order(),
                            requested: truncation,
                        });
                    }
                }
            }
        }
        Ok(TheorySpec {
            residues,
            s,
            mellin,
            truncation,
        })
    }

    /// Single-equation convenience: one residue named "f".
    pub fn single(
        s: i64,
        primitives: BTreeMap<usize, Vec<LaurentData>>,
        truncation: usize,
    ) -> Result<Self> {
        let name = "f".to_string();
        Self::new(
            vec![name.clone()],
            BTreeMap::from([(name.clone(), s)]),
            BTreeMap::from([(name, primitives)]),
            truncation,
        )
    }

    pub fn residues(&self) -> &[String] {
        &self.residues
    }

    pub fn s(&self, residue: &str) -> i64 {
        self.s[residue]
    }

    pub fn s_map(&self) -> &BTreeMap<String, i64> {
        &self.s
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn with_truncation(&self, truncation: usize) -> Result<Self> {
        Self::new(
            self.residues.clone(),
            self.s.clone(),
            self.mellin.clone(),
            truncation,
        )
    }

    pub fn primitives(&self, residue: &str) -> Option<&BTreeMap<usize, Vec<LaurentData>>> {
        self.mellin.get(residue)
    }

    pub fn is_single(&self) -> bool {
        self.residues.len() == 1
    }
}

/// Triangular table gamma^r_{k,j}, 1 <= k <= j <= N, stored per residue as
/// the series gamma^r_k(x).
#[derive(Clone, Debug, PartialEq)]
pub struct GammaTable {
    residues: Vec<String>,
    truncation: usize,
    tables: BTreeMap<String, Vec<RationalSeries>>,
}

impl GammaTable {
    pub fn zero(residues: &[String], truncation: usize) -> Self {
        let tables = residues
            .iter()
            .map(|r| {
                (
                    r.clone(),
                    vec![RationalSeries::zero(truncation); truncation],
                )
            })
            .collect();
        GammaTable {
            residues: residues.to_vec(),
            truncation,
            tables,
        }
    }

    pub fn residues(&self) -> &[String] {
        &self.residues
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// gamma^r_k(x) as a series, 1 <= k <= N.
    pub fn gamma(&self, residue: &str, k: usize) -> &RationalSeries {
        &self.tables[residue][k - 1]
    }

    pub fn gamma1(&self, residue: &str) -> &RationalSeries {
        self.gamma(residue, 1)
    }

    pub fn entry(&self, residue: &str, k: usize, j: usize) -> &Rational {
        self.tables[residue][k - 1].coeff(j)
    }

    pub fn set_entry(&mut self, residue: &str, k: usize, j: usize, value: Rational) {
        self.tables.get_mut(residue).unwrap()[k - 1].set_coeff(j, value);
    }

    pub fn set_gamma(&mut self, residue: &str, k: usize, series: RationalSeries) {
        self.tables.get_mut(residue).unwrap()[k - 1] = series.truncated(self.truncation);
    }

    /// gamma^r_{k,j} = 0 for j < k.
    pub fn is_triangular(&self) -> bool {
        self.residues.iter().all(|r| {
            (1..=self.truncation).all(|k| {
                (0..k).all(|j| self.entry(r, k, j).is_zero())
            })
        })
    }

    /// CSV rows residue,k,j,value over the triangle, deterministic order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("residue,k,j,value\n");
        for r in &self.residues {
            for k in 1..=self.truncation {
                for j in k..=self.truncation {
                    out.push_str(&format!("{},{},{},{}\n", r, k, j, self.entry(r, k, j)));
                }
            }
        }
        out
    }

    /// CSV of the anomalous dimension row only: residue,n,value.
    pub fn gamma1_csv(&self) -> String {
        let mut out = String::from("residue,n,value\n");
        for r in &self.residues {
            for n in 1..=self.truncation {
                out.push_str(&format!("{},{},{}\n", r, n, self.entry(r, 1, n)));
            }
        }
        out
    }
}

/// Raw JSON document for theory input. `mellin` and `p_series` are both
/// optional; at least one must be present for the commands that need it.
#[derive(Deserialize)]
struct RawDocument {
    residues: Vec<String>,
    s: BTreeMap<String, i64>,
    truncation: usize,
    #[serde(default)]
    mellin: Option<BTreeMap<String, BTreeMap<String, Vec<RawPrimitive>>>>,
    #[serde(default)]
    p_series: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    #[allow(dead_code)]
    note: Option<String>,
}

/// A primitive's Mellin transform: explicit Laurent coefficients
/// ["f_{-1}", "f_0", ...] or the pole form scale/(rho prod(p_i - rho)).
#[derive(Deserialize)]
#[serde(untagged)]
enum RawPrimitive {
    Coeffs(Vec<String>),
    Poles { scale: String, poles: Vec<String> },
}

/// Parsed theory document: the exact content of the JSON input.
#[derive(Clone, Debug)]
pub struct TheoryDocument {
    pub residues: Vec<String>,
    pub s: BTreeMap<String, i64>,
    pub truncation: usize,
    pub mellin: Option<BTreeMap<String, BTreeMap<usize, Vec<LaurentData>>>>,
    pub p_series: Option<BTreeMap<String, RationalSeries>>,
}

impl TheoryDocument {
    /// Parse and validate; collects every problem found, each message
    /// prefixed with the JSON path it refers to.
    pub fn from_json(text: &str) -> std::result::Result<Self, Vec<String>> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| vec![format!("$: {e}")])?;
        let mut errors = Vec::new();

        if raw.residues.is_empty() {
            errors.push("residues: must be nonempty".into());
        }
        if raw.truncation == 0 {
            errors.push("truncation: must be >= 1".into());
        }
        for r in &raw.residues {
            match raw.s.get(r) {
                None => errors.push(format!("s.{r}: missing")),
                Some(0) => errors.push(format!(
                    "s.{r}: must be nonzero (the s = 0 linear case is excluded)"
                )),
                Some(_) => {}
            }
        }
        if raw.mellin.is_none() && raw.p_series.is_none() {
            errors.push("$: one of \"mellin\" or \"p_series\" is required".into());
        }

        let parse_rat = |path: String, s: &str, errors: &mut Vec<String>| -> Rational {
            match s.parse::<Rational>() {
                Ok(r) => r,
                Err(e) => {
                    errors.push(format!("{path}: {e}"));
                    Rational::zero()
                }
            }
        };

        let mut mellin = None;
        if let Some(raw_mellin) = &raw.mellin {
            let mut per_residue = BTreeMap::new();
            for (r, by_loop) in raw_mellin {
                if !raw.residues.contains(r) {
                    errors.push(format!("mellin.{r}: unknown residue"));
                    continue;
                }
                let mut loops = BTreeMap::new();
                for (k_str, prims) in by_loop {
                    let path = format!("mellin.{r}.{k_str}");
                    let k: usize = match k_str.parse() {
                        Ok(k) if k >= 1 => k,
                        _ => {
                            errors.push(format!("{path}: loop order must be an integer >= 1"));
                            continue;
                        }
                    };
                    let mut parsed = Vec::new();
                    for (i, prim) in prims.iter().enumerate() {
                        let ppath = format!("{path}[{i}]");
                        match prim {
                            RawPrimitive::Coeffs(strings) => {
                                if strings.len() < raw.truncation + 1 {
                                    errors.push(format!(
                                        "{ppath}: Laurent order {} is below the truncation {} (need at least {} coefficients)",
                                        strings.len() as i64 - 2,
                                        raw.truncation,
                                        raw.truncation + 1
                                    ));
                                    continue;
                                }
                                let coeffs = strings
                                    .iter()
                                    .enumerate()
                                    .map(|(j, c)| {
                                        parse_rat(format!("{ppath}[{j}]"), c, &mut errors)
                                    })
                                    .collect();
                                parsed.push(LaurentData::from_coeffs(coeffs));
                            }
                            RawPrimitive::Poles { scale, poles } => {
                                let scale =
                                    parse_rat(format!("{ppath}.scale"), scale, &mut errors);
                                let poles: Vec<Rational> = poles
                                    .iter()
                                    .enumerate()
                                    .map(|(j, p)| {
                                        parse_rat(format!("{ppath}.poles[{j}]"), p, &mut errors)
                                    })
                                    .collect();
                                match LaurentData::from_poles(&scale, &poles, raw.truncation) {
                                    Ok(l) => parsed.push(l),
                                    Err(e) => errors.push(format!("{ppath}.poles: {e}")),
                                }
                            }
                        }
                    }
                    loops.insert(k, parsed);
                }
                per_residue.insert(r.clone(), loops);
            }
            mellin = Some(per_residue);
        }

        let mut p_series = None;
        if let Some(raw_p) = &raw.p_series {
            let mut per_residue = BTreeMap::new();
            for (r, values) in raw_p {
                if !raw.residues.contains(r) {
                    errors.push(format!("p_series.{r}: unknown residue"));
                    continue;
                }
                // p(1), p(2), ...; stored as a series with zero constant term
                let mut coeffs = vec![Rational::zero()];
                for (i, v) in values.iter().enumerate() {
                    coeffs.push(parse_rat(format!("p_series.{r}[{i}]"), v, &mut errors));
                }
                coeffs.resize(raw.truncation + 1, Rational::zero());
                coeffs.truncate(raw.truncation + 1);
                per_residue.insert(r.clone(), RationalSeries::from_coeffs(coeffs));
            }
            for r in &raw.residues {
                if !per_residue.contains_key(r) {
                    errors.push(format!("p_series.{r}: missing"));
                }
            }
            p_series = Some(per_residue);
        }

        if !errors.is_empty() {
            return Err(errors);
        }
        Ok(TheoryDocument {
            residues: raw.residues,
            s: raw.s,
            truncation: raw.truncation,
            mellin,
            p_series,
        })
    }

    /// Materialize the Mellin part as a TheorySpec.
    pub fn to_spec(&self) -> Result<TheorySpec> {
        let mellin = self
            .mellin
            .clone()
            .ok_or_else(|| Error::BadInput("document has no \"mellin\" section".into()))?;
        TheorySpec::new(
            self.residues.clone(),
            self.s.clone(),
            mellin,
            self.truncation,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_s() {
        let err = TheorySpec::single(0, BTreeMap::new(), 4);
        assert!(err.is_err());
    }

    #[test]
    fn document_parses_poles_and_coeffs() {
        let text = r#"{
            "residues": ["f"],
            "s": {"f": 2},
            "truncation": 3,
            "mellin": {"f": {"1": [{"scale": "-1", "poles": ["1", "2", "3"]}]}}
        }"#;
        let doc = TheoryDocument::from_json(text).unwrap();
        let spec = doc.to_spec().unwrap();
        let prim = &spec.primitives("f").unwrap()[&1][0];
        assert_eq!(prim.residue(), &Rational::new(-1, 6));
    }

    #[test]
    fn document_error_paths() {
        let text = r#"{
            "residues": ["f"],
            "s": {"f": 0},
            "truncation": 3,
            "mellin": {"f": {"1": [["1", "1"]]}}
        }"#;
        let errs = TheoryDocument::from_json(text).unwrap_err();
        assert!(errs.iter().any(|e| e.starts_with("s.f:")), "{errs:?}");
        assert!(
            errs.iter().any(|e| e.contains("below the truncation")),
            "{errs:?}"
        );
    }

    #[test]
    fn document_requires_some_input() {
        let text = r#"{"residues": ["f"], "s": {"f": 2}, "truncation": 3}"#;
        let errs = TheoryDocument::from_json(text).unwrap_err();
        assert!(errs.iter().any(|e| e.contains("mellin")), "{errs:?}");
    }

    #[test]
    fn gamma_table_csv_layout() {
        let mut t = GammaTable::zero(&["f".to_string()], 2);
        t.set_entry("f", 1, 1, Rational::one());
        t.set_entry("f", 1, 2, Rational::new(1, 2));
        assert!(t.is_triangular());
        assert_eq!(
            t.to_csv(),
            "residue,k,j,value\nf,1,1,1\nf,1,2,1/2\nf,2,2,0\n"
        );
    }
}
