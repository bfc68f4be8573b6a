//! Identity catalogs: TOML fixtures of parametrized identities, instantiated
//! over integer ranges and checked by normal form.
//!
//! Format (`schema = "qweyl-catalog/1"`):
//!
//! ```toml
//! schema = "qweyl-catalog/1"
//! name = "beta"
//! algebra = "dq{N}"      # short algebra name, may use {N}
//! rank = 3               # default N
//!
//! [[identity]]
//! name = "d_i x_i^n"
//! lhs = "d{i}*x{i}^{n}"
//! rhs = "q^{2*n}*x{i}^{n}*d{i} + (q^{2*n} - 1)*beta_{i-1}*x{i}^{n-1}"
//! params = [["i", 1, "N"], ["n", 1, "n_max"]]
//! ```
//!
//! Braces hold integer expressions (`+ - *`, parentheses) in the parameters
//! and in `N`, `n_max`, `m_max`. Range ends are integers or such expressions;
//! later ranges may use earlier parameters. A negative power of a generator
//! makes its summand vanish.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::GenericQ;
use crate::engine::{Algebra, OreOp};
use crate::expr::{eval, format_fraction, parse_with, GeneratorNegatives, Negatives, Style};

use super::{by_name, PresentationError};

pub const CATALOG_SCHEMA: &str = "qweyl-catalog/1";

const BUILTIN: [(&str, &str); 4] = [
    ("beta", include_str!("../../catalogs/beta.toml")),
    ("oq_relations", include_str!("../../catalogs/oq_relations.toml")),
    ("dq_gl2_det", include_str!("../../catalogs/dq_gl2_det.toml")),
    ("dq_gl2_cross", include_str!("../../catalogs/dq_gl2_cross.toml")),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RangeEnd {
    Int(i64),
    Expr(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default)]
    pub params: Vec<(String, RangeEnd, RangeEnd)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Catalog {
    pub schema: String,
    pub name: String,
    pub algebra: String,
    #[serde(default)]
    pub rank: Option<i64>,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub identity: Vec<IdentityRecord>,
}

impl Catalog {
    pub fn from_toml(text: &str) -> Result<Self, PresentationError> {
        let c: Catalog = toml::from_str(text).map_err(|e| PresentationError::Catalog("?".into(), e.to_string()))?;
        if c.schema != CATALOG_SCHEMA {
            return Err(PresentationError::Catalog(c.name, format!("unsupported schema {}", c.schema)));
        }
        Ok(c)
    }
}

/// Instantiation bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub n_max: i64,
    pub m_max: i64,
    /// Overrides the catalog's `rank`.
    pub rank: Option<i64>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { n_max: 4, m_max: 4, rank: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceResult {
    pub identity: String,
    pub params: BTreeMap<String, i64>,
    pub pass: bool,
    /// `lhs - rhs` when nonzero, or the evaluation error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub catalog: String,
    pub algebra: String,
    pub passed: usize,
    pub failed: usize,
    pub instances: Vec<InstanceResult>,
}

impl CatalogReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

pub fn builtin_catalogs() -> Vec<Catalog> {
    BUILTIN
        .iter()
        .map(|(_, t)| Catalog::from_toml(t).expect("built-in catalog parses"))
        .collect()
}

pub fn builtin_catalog(name: &str) -> Option<Catalog> {
    builtin_catalogs().into_iter().find(|c| c.name == name)
}

/// Tiny integer expression evaluator for template braces.
fn int_expr(src: &str, vars: &BTreeMap<String, i64>) -> Result<i64, String> {
    struct P<'a> {
        s: &'a [u8],
        i: usize,
        vars: &'a BTreeMap<String, i64>,
    }
    impl P<'_> {
        fn ws(&mut self) {
            while self.i < self.s.len() && self.s[self.i] == b' ' {
                self.i += 1;
            }
        }
        fn sum(&mut self) -> Result<i64, String> {
            let mut v = self.prod()?;
            loop {
                self.ws();
                match self.s.get(self.i) {
                    Some(b'+') => {
                        self.i += 1;
                        v += self.prod()?;
                    }
                    Some(b'-') => {
                        self.i += 1;
                        v -= self.prod()?;
                    }
                    _ => return Ok(v),
                }
            }
        }
        fn prod(&mut self) -> Result<i64, String> {
            let mut v = self.unary()?;
            loop {
                self.ws();
                if self.s.get(self.i) == Some(&b'*') {
                    self.i += 1;
                    v *= self.unary()?;
                } else {
                    return Ok(v);
                }
            }
        }
        fn unary(&mut self) -> Result<i64, String> {
            self.ws();
            match self.s.get(self.i) {
                Some(b'-') => {
                    self.i += 1;
                    Ok(-self.unary()?)
                }
                Some(b'(') => {
                    self.i += 1;
                    let v = self.sum()?;
                    self.ws();
                    if self.s.get(self.i) != Some(&b')') {
                        return Err("expected ')'".into());
                    }
                    self.i += 1;
                    Ok(v)
                }
                Some(c) if c.is_ascii_digit() => {
                    let st = self.i;
                    while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                        self.i += 1;
                    }
                    std::str::from_utf8(&self.s[st..self.i]).unwrap().parse().map_err(|e| format!("{e}"))
                }
                Some(c) if c.is_ascii_alphabetic() || *c == b'_' => {
                    let st = self.i;
                    while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                        self.i += 1;
                    }
                    let name = std::str::from_utf8(&self.s[st..self.i]).unwrap();
                    self.vars.get(name).copied().ok_or_else(|| format!("unknown parameter {name}"))
                }
                _ => Err(format!("bad integer expression {:?}", String::from_utf8_lossy(self.s))),
            }
        }
    }
    let mut p = P { s: src.as_bytes(), i: 0, vars };
    let v = p.sum()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(format!("trailing input in {src:?}"));
    }
    Ok(v)
}

/// Replace every `{...}` by the value of the integer expression inside.
pub fn instantiate(template: &str, vars: &BTreeMap<String, i64>) -> Result<String, String> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let close = rest[open..].find('}').ok_or("unclosed '{'")? + open;
        out.push_str(&int_expr(&rest[open + 1..close], vars)?.to_string());
        rest = &rest[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}

fn range_end(e: &RangeEnd, vars: &BTreeMap<String, i64>) -> Result<i64, String> {
    match e {
        RangeEnd::Int(v) => Ok(*v),
        RangeEnd::Expr(s) => int_expr(s, vars),
    }
}

fn instances(
    rec: &IdentityRecord,
    base: &BTreeMap<String, i64>,
) -> Result<Vec<BTreeMap<String, i64>>, String> {
    let mut out = vec![base.clone()];
    for (name, lo, hi) in &rec.params {
        let mut next = Vec::new();
        for vars in out {
            let (a, b) = (range_end(lo, &vars)?, range_end(hi, &vars)?);
            for v in a..=b {
                let mut w = vars.clone();
                w.insert(name.clone(), v);
                next.push(w);
            }
        }
        out = next;
    }
    Ok(out)
}

fn check_instance(alg: &Algebra<GenericQ>, rec: &IdentityRecord, vars: &BTreeMap<String, i64>) -> Result<Option<String>, String> {
    let lhs = instantiate(&rec.lhs, vars)?;
    let rhs = instantiate(&rec.rhs, vars)?;
    let ev = |s: &str| {
        let e = parse_with(s, Negatives::Any).map_err(|e| format!("{s}: {e}"))?;
        eval(alg, &e, GeneratorNegatives::Vanish).map_err(|e| format!("{s}: {e}"))
    };
    let diff = alg.ore_arith(&ev(&lhs)?, &ev(&rhs)?, OreOp::Sub).map_err(|e| e.to_string())?;
    Ok(if diff.numerator.is_zero() {
        None
    } else {
        Some(format_fraction(alg.ring(), alg.presentation(), &diff, Style::Ascii))
    })
}

/// Instantiate every identity over `bounds` and compare both sides in normal
/// form, in parallel.
pub fn verify_catalog(catalog: &Catalog, bounds: Bounds) -> Result<CatalogReport, PresentationError> {
    let fail = |msg: String| PresentationError::Catalog(catalog.name.clone(), msg);
    let mut base = BTreeMap::new();
    base.insert("n_max".to_string(), bounds.n_max);
    base.insert("m_max".to_string(), bounds.m_max);
    let rank = bounds.rank.or(catalog.rank);
    if let Some(r) = rank {
        base.insert("N".to_string(), r);
    }
    let algebra = instantiate(&catalog.algebra, &base).map_err(fail)?;
    let alg = Algebra::new(by_name(&algebra)?, GenericQ);
    let mut jobs = Vec::new();
    for rec in &catalog.identity {
        for vars in instances(rec, &base).map_err(fail)? {
            jobs.push((rec, vars));
        }
    }
    let instances: Vec<InstanceResult> = jobs
        .into_par_iter()
        .map(|(rec, vars)| {
            let outcome = check_instance(&alg, rec, &vars);
            let params = vars.into_iter().filter(|(k, _)| !base.contains_key(k)).collect();
            let (pass, detail) = match outcome {
                Ok(None) => (true, None),
                Ok(Some(d)) => (false, Some(format!("lhs - rhs = {d}"))),
                Err(e) => (false, Some(e)),
            };
            InstanceResult { identity: rec.name.clone(), params, pass, detail }
        })
        .collect();
    let passed = instances.iter().filter(|r| r.pass).count();
    Ok(CatalogReport {
        catalog: catalog.name.clone(),
        algebra,
        passed,
        failed: instances.len() - passed,
        instances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_evaluate_integer_braces() {
        let vars = BTreeMap::from([("n".to_string(), 3), ("i".to_string(), 1)]);
        assert_eq!(instantiate("q^{-2-2*n}*beta_{i-1}*x{i}^{n-1}", &vars).unwrap(), "q^-8*beta_0*x1^2");
        assert_eq!(instantiate("q^{2*(n-1)}", &vars).unwrap(), "q^4");
        assert!(instantiate("x{k}", &vars).is_err());
    }

    #[test]
    fn builtin_catalogs_load() {
        let names: Vec<String> = builtin_catalogs().into_iter().map(|c| c.name).collect();
        assert_eq!(names, ["beta", "oq_relations", "dq_gl2_det", "dq_gl2_cross"]);
    }

    #[test]
    fn a_wrong_identity_fails() {
        let c = Catalog::from_toml(
            r#"
schema = "qweyl-catalog/1"
name = "bad"
algebra = "dq1"
[[identity]]
name = "commuting"
lhs = "d1*x1"
rhs = "x1*d1"
"#,
        )
        .unwrap();
        let r = verify_catalog(&c, Bounds::default()).unwrap();
        assert_eq!(r.failed, 1);
        assert!(r.instances[0].detail.as_deref().unwrap().contains("x1*d1"));
    }
}
