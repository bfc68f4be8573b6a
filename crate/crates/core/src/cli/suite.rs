//! The acceptance suite driven by `qweyl all` and the `acceptance` test target.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::center::{beta_power_identity, c_coefficients};
use crate::coefficients::{CoeffRing, GenericQ, QLaurent, RootOfUnity};
use crate::engine::{check_confluence, Algebra, Monomial, NCElement, Presentation};
use crate::momentmaps::phi_frobenius_check;
use crate::presentations::{d_index, dq_cn, x_index, Bounds};

use super::commands;
use super::error::CliError;
use super::report::{CheckRecord, Verdict};

pub const Z_LEVEL_THREE: &str = "a^3 + 3*a*b*c + 3*q*b*c*d";
pub const Z_LEVEL_FIVE: &str = "a^5 + 5*a^3*b*c + 5*(2*q^3 - q)*a^2*b*c*d + 5*a*b^2*c^2 \
     + 5*(2*q^3 + 3*q^2 + 4*q + 2)*a*b*c*d^2 + 5*q^3*b^2*c^2*d - 5*(q^3 + 2*q^2 + q)*b*c*d^3";

/// Wall-clock budget for the Frobenius restriction of `phi_q`.
pub const PHI_FROBENIUS_BUDGET: Duration = Duration::from_secs(30 * 60);

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 7, samples: 20 }
    }
}

type CriterionFn = fn(&SuiteOptions) -> Result<Vec<CheckRecord>, CliError>;

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    run: CriterionFn,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub verdict: Verdict,
    pub checks: Vec<CheckRecord>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionResult {
    /// `criterion  3 identity catalogs: pass`, with the first failure appended.
    pub fn summary(&self) -> String {
        let mut s = format!("criterion {:>2} {}: {}", self.id, self.title, self.verdict.label());
        if let Some(c) = self.checks.iter().find(|c| c.failed()) {
            s.push_str(&format!(" ({}", c.name));
            if let Some(w) = &c.witness {
                s.push_str(&format!(": {w}"));
            }
            s.push(')');
        }
        s
    }
}

fn verdict_of(checks: &[CheckRecord]) -> Verdict {
    if checks.iter().any(CheckRecord::failed) {
        Verdict::Fail
    } else if checks.iter().any(|c| c.verdict == Verdict::Skip) {
        Verdict::Skip
    } else {
        Verdict::Pass
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, title: "z reproduction", run: z_reproduction },
        Criterion { id: 2, title: "beta power identity", run: beta_powers },
        Criterion { id: 3, title: "identity catalogs", run: catalogs },
        Criterion { id: 4, title: "confluence", run: confluence },
        Criterion { id: 5, title: "Azumaya locus", run: azumaya_locus },
        Criterion { id: 6, title: "mu_q and its Frobenius diagram", run: mu },
        Criterion { id: 7, title: "phi_q", run: phi },
        Criterion { id: 8, title: "phi_q Frobenius at l = 3", run: phi_frobenius },
        Criterion { id: 9, title: "Poisson", run: poisson },
        Criterion { id: 10, title: "centralizer converse", run: centralizer },
    ]
}

pub fn run_criterion(c: &Criterion, opts: &SuiteOptions) -> CriterionResult {
    let start = Instant::now();
    let checks = match (c.run)(opts) {
        Ok(checks) => checks,
        Err(CliError::Resource(msg)) => vec![CheckRecord::skip(c.title, "resource", msg)],
        Err(e) => vec![CheckRecord::new(c.title, "error", false).with_witness(e.to_string())],
    };
    CriterionResult {
        id: c.id,
        title: c.title.to_string(),
        verdict: verdict_of(&checks),
        checks,
        elapsed: start.elapsed(),
    }
}

/// Run the selected criteria (all when `only` is empty) concurrently.
pub fn run_suite(opts: &SuiteOptions, only: &[u8]) -> Vec<CriterionResult> {
    let list: Vec<Criterion> = criteria()
        .into_iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .collect();
    list.par_iter().map(|c| run_criterion(c, opts)).collect()
}

fn z_reproduction(_: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = Vec::new();
    for (ell, golden) in [(3, Z_LEVEL_THREE), (5, Z_LEVEL_FIVE)] {
        let r = commands::z_element(ell)?;
        let printed = r.lines[0].clone();
        out.push(
            CheckRecord::new(format!("z-element --ell {ell} prints the expected z"), "z-element", printed == golden)
                .witness_on_fail(|| printed.clone()),
        );
        out.extend(r.checks);
    }
    Ok(out)
}

fn beta_powers(_: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = Vec::new();
    for ell in [3, 5] {
        for n in 1..=3 {
            let alg = Algebra::new(dq_cn(n)?, RootOfUnity::new(ell)?);
            let res = beta_power_identity(&alg, n, ell);
            let bad: Vec<usize> = res.iter().filter(|(_, ok)| !ok).map(|(i, _)| *i).collect();
            out.push(
                CheckRecord::new(
                    format!("beta_i^{ell} = 1 + sum_{{j<=i}} x_j^{ell} d_j^{ell}, N = {n}"),
                    "beta-power",
                    bad.is_empty(),
                )
                .witness_on_fail(|| format!("fails for i in {bad:?}")),
            );
        }
    }
    for n in 1..=3 {
        let alg = Algebra::new(dq_cn(n)?, RootOfUnity::new(3)?);
        let t = c_coefficients(&alg, n, 3);
        out.push(CheckRecord::new(
            format!("c_k = 0 for 1 <= k <= 2 at l = 3, N = {n}"),
            "beta-power",
            t.agree() && t.middle_vanishes(),
        ));
    }
    Ok(out)
}

fn catalogs(_: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    Ok(commands::verify("all", Bounds::default())?.checks)
}

/// `D_q(C^2)` with the correction term of `d2 x2` cut down to a constant.
pub fn mutated_weyl() -> Result<Presentation, CliError> {
    let pres = dq_cn(2)?;
    let (x2, d2) = (x_index(2, 2), d_index(2, 2));
    let mut lead = Monomial::one(4);
    lead.set_exp(x2, 1);
    lead.set_exp(d2, 1);
    let mut rhs = NCElement::term(lead, QLaurent::q_pow(2));
    rhs.add_term(&GenericQ, Monomial::one(4), &GenericQ.sub(&QLaurent::q_pow(2), &GenericQ.one()));
    Ok(pres.with_rule(d2, x2, rhs))
}

fn confluence(_: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = commands::confluence()?.checks;
    let bad = check_confluence(&Algebra::new(mutated_weyl()?, GenericQ));
    out.push(
        CheckRecord::new("negative control: mutated dq2 rules are not confluent", "confluence", !bad.is_empty())
            .with_witness(format!("{} failing overlaps", bad.len())),
    );
    Ok(out)
}

fn azumaya_locus(opts: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let r = commands::fiber_sweep(2, 3, 10, 3, opts.seed)?;
    Ok(r.checks)
}

fn mu(opts: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    Ok(commands::moment_mu(3, true, opts.samples, opts.seed)?.checks)
}

fn phi(opts: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    Ok(commands::moment_phi(3, false, opts.samples, opts.seed)?.checks)
}

fn phi_frobenius(opts: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let start = Instant::now();
    let rep = phi_frobenius_check(3, opts.samples, opts.seed)?;
    let mut out: Vec<CheckRecord> = rep
        .symbolic
        .iter()
        .map(|(g, ok)| CheckRecord::new(format!("{g} entry matches the classical formula"), "phi-frobenius", *ok))
        .collect();
    out.push(CheckRecord::new("det X^(3) = detq(X)^3, det D^(3) = detq(D)^3", "phi-frobenius", rep.det_identity));
    out.push(CheckRecord::new(
        format!("z entry at {}/{} random characters", rep.samples_passed, rep.samples),
        "phi-frobenius",
        rep.samples_passed == rep.samples,
    ));
    let elapsed = start.elapsed();
    if elapsed > PHI_FROBENIUS_BUDGET && !out.iter().any(CheckRecord::failed) {
        out.push(CheckRecord::skip("time budget", "phi-frobenius", format!("{} s", elapsed.as_secs())));
    }
    Ok(out)
}

fn poisson(_: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for mut c in commands::poisson(n)?.checks {
            c.name = format!("N = {n}: {}", c.name);
            out.push(c);
        }
    }
    Ok(out)
}

fn centralizer(_: &SuiteOptions) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = commands::center("dq1", 3, 6)?.checks;
    out.extend(commands::center("oq_gl2_plus", 3, 3)?.checks);
    Ok(out)
}
