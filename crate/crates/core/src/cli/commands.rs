//! One function per subcommand, each producing a [`RunReport`].

use std::path::Path;

use crate::center::{centrality_report, centralizer_basis, compute_z, oq_root_algebra, products_up_to, same_span, span_rank};
use crate::coefficients::{CoeffRing, GenericQ, RootOfUnity};
use crate::engine::{check_confluence, Algebra};
use crate::expr::{eval, format_fraction, parse, parse_element, show, GeneratorNegatives, Style};
use crate::fibers::{fiber, locus_sweep, CentralCharacter};
use crate::momentmaps::{diagram_check_mu, mu_frobenius, mu_q, phi_frobenius_check, phi_q, HomReport};
use crate::poisson::compare_with_pi;
use crate::presentations::{builtin_catalog, builtin_catalogs, by_name, verify_catalog, Bounds, Catalog};

use super::error::CliError;
use super::report::{CheckRecord, RunReport};

/// Largest fiber dimension `l^(2N)` the CLI will build.
pub const MAX_FIBER_DIMENSION: usize = 729;
/// Largest root-of-unity level accepted for `z-element`.
pub const MAX_Z_LEVEL: u32 = 11;

fn nf_in<R: CoeffRing>(alg: &Algebra<R>, text: &str, style: Style) -> Result<String, CliError> {
    let f = eval(alg, &parse(text)?, GeneratorNegatives::Reject)?;
    Ok(format_fraction(alg.ring(), alg.presentation(), &f, style))
}

/// Normal form of `text` in the named algebra, generic `q` or at a root of
/// unity of order `ell`.
pub fn normal_form(algebra: &str, ell: Option<u32>, text: &str, style: Style) -> Result<RunReport, CliError> {
    let pres = by_name(algebra)?;
    let nf = match ell {
        Some(l) => nf_in(&Algebra::new(pres, RootOfUnity::new(l)?), text, style)?,
        None => nf_in(&Algebra::new(pres, GenericQ), text, style)?,
    };
    let mut r = RunReport::new("nf")
        .param("algebra", algebra)
        .param("ell", ell)
        .param("input", text);
    r.line(nf.clone());
    r.set_result(serde_json::json!({ "normal_form": nf }));
    Ok(r)
}

fn load_catalogs(name: &str) -> Result<Vec<Catalog>, CliError> {
    if name == "all" {
        return Ok(builtin_catalogs());
    }
    if let Some(c) = builtin_catalog(name) {
        return Ok(vec![c]);
    }
    let path = Path::new(name);
    if path.exists() {
        return Ok(vec![Catalog::from_toml(&std::fs::read_to_string(path)?)?]);
    }
    Err(CliError::Usage(format!(
        "unknown catalog {name}; built-in: all, beta, oq_relations, dq_gl2_det, dq_gl2_cross, or a TOML path"
    )))
}

/// Instantiate and check identity catalogs.
pub fn verify(catalog: &str, bounds: Bounds) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("verify")
        .param("catalog", catalog)
        .param("n_max", bounds.n_max)
        .param("m_max", bounds.m_max)
        .param("rank", bounds.rank);
    let mut reports = Vec::new();
    for c in load_catalogs(catalog)? {
        let rep = verify_catalog(&c, bounds)?;
        r.line(format!(
            "catalog {} ({}): {} passed, {} failed",
            rep.catalog, rep.algebra, rep.passed, rep.failed
        ));
        for rec in &c.identity {
            let inst: Vec<_> = rep.instances.iter().filter(|i| i.identity == rec.name).collect();
            let bad = inst.iter().find(|i| !i.pass);
            let check = CheckRecord::new(format!("{}: {} ({} instances)", rep.catalog, rec.name, inst.len()), "catalog", bad.is_none());
            r.push(match bad {
                Some(i) => check.with_witness(format!(
                    "{:?}: {}",
                    i.params,
                    i.detail.as_deref().unwrap_or("lhs != rhs")
                )),
                None => check,
            });
        }
        reports.push(rep);
    }
    r.set_result(&reports);
    Ok(r)
}

/// `z` in `O_q(GL_2)` at a primitive `ell`-th root of unity.
pub fn z_element(ell: u32) -> Result<RunReport, CliError> {
    if ell > MAX_Z_LEVEL {
        return Err(CliError::Resource(format!("z-element supports ell <= {MAX_Z_LEVEL}")));
    }
    let alg = oq_root_algebra(ell)?;
    let z = compute_z(&alg, ell)?;
    let text = show(&alg, &z);
    let mut r = RunReport::new("z-element").param("ell", ell);
    r.line(text.clone());
    r.push(CheckRecord::new("z is central", "z-element", alg.is_central(&z)));
    let lhs = alg.mul(&z, &alg.pow(&alg.generator(3), ell));
    let det = alg.named("detq").expect("detq");
    let rhs = alg.add(
        &alg.pow(&det, ell),
        &alg.mul(&alg.pow(&alg.generator(1), ell), &alg.pow(&alg.generator(2), ell)),
    );
    r.push(
        CheckRecord::new(format!("z*d^{ell} = detq^{ell} + b^{ell}*c^{ell}"), "z-element", lhs == rhs)
            .witness_on_fail(|| show(&alg, &alg.sub(&lhs, &rhs))),
    );
    let roundtrip = parse_element(&alg, &text)? == z;
    r.push(CheckRecord::new("printed z parses back", "round-trip", roundtrip));
    r.set_result(serde_json::json!({ "z": text }));
    Ok(r)
}

/// Central elements up to `bound` at a primitive `ell`-th root of unity,
/// compared with the algebra's known central generators.
pub fn center(algebra: &str, ell: u32, bound: u32) -> Result<RunReport, CliError> {
    let alg = Algebra::new(by_name(algebra)?, RootOfUnity::new(ell)?);
    let mut basis = centralizer_basis(&alg, bound, ell);
    basis.sort_by(|u, v| v.leading().map(|t| t.0).cmp(&u.leading().map(|t| t.0)));
    let mut r = RunReport::new("center")
        .param("algebra", algebra)
        .param("ell", ell)
        .param("degree_bound", bound);
    let texts: Vec<String> = basis.iter().map(|e| show(&alg, e)).collect();
    r.line(format!("central subspace of degree <= {bound}: dimension {}", basis.len()));
    for t in &texts {
        r.line(format!("  {t}"));
    }
    let weyl_rank = algebra
        .strip_prefix("dq")
        .and_then(|s| s.parse::<usize>().ok());
    if let Some(n) = weyl_rank {
        let gens: Vec<_> = alg
            .presentation()
            .generators()
            .iter()
            .map(|g| parse_element(&alg, &format!("{g}^{ell}")))
            .collect::<Result<_, _>>()?;
        let expected = products_up_to(&alg, &gens, bound);
        let ok = same_span(alg.ring(), &basis, &expected);
        r.push(
            CheckRecord::new(
                format!("central subspace = span of products of x_i^{ell}, d_i^{ell} (N = {n})"),
                "centralizer",
                ok,
            )
            .witness_on_fail(|| {
                format!(
                    "computed rank {}, expected rank {}",
                    span_rank(alg.ring(), &basis),
                    span_rank(alg.ring(), &expected)
                )
            }),
        );
    } else if algebra.starts_with("oq_gl2") {
        let z = compute_z(&oq_root_algebra(ell)?, ell)?;
        let z = parse_element(&alg, &show(&oq_root_algebra(ell)?, &z))?;
        r.push(CheckRecord::new("z is central", "centralizer", alg.is_central(&z)));
        let a_power = parse_element(&alg, &format!("a^{ell}"))?;
        let rep = centrality_report(&alg, &a_power);
        let witness = rep
            .commutators
            .iter()
            .find(|(_, c)| c != "0")
            .map(|(g, c)| format!("[a^{ell}, {g}] = {c}"))
            .unwrap_or_default();
        r.push(CheckRecord::new(format!("a^{ell} is not central"), "centralizer", !rep.central).with_witness(witness));
        if bound >= ell {
            let inside = same_span(alg.ring(), &basis, &[basis.clone(), vec![z]].concat());
            r.push(CheckRecord::new("z lies in the computed central subspace", "centralizer", inside));
            let outside = span_rank(alg.ring(), &[basis.clone(), vec![a_power]].concat()) == basis.len() + 1;
            r.push(CheckRecord::new(format!("a^{ell} lies outside it"), "centralizer", outside));
        }
    }
    r.set_result(serde_json::json!({ "dimension": basis.len(), "basis": texts }));
    Ok(r)
}

fn fiber_dimension_guard(n: usize, ell: u32) -> Result<(), CliError> {
    let dim = (ell as usize).checked_pow(2 * n as u32).unwrap_or(usize::MAX);
    if dim > MAX_FIBER_DIMENSION {
        return Err(CliError::Resource(format!(
            "fiber dimension {ell}^{} exceeds {MAX_FIBER_DIMENSION}",
            2 * n
        )));
    }
    Ok(())
}

/// Certify one fiber at the character given as `x1^l, .., xN^l, d1^l, .., dN^l` values.
pub fn fiber_single(n: usize, ell: u32, character: &str) -> Result<RunReport, CliError> {
    fiber_dimension_guard(n, ell)?;
    let ring = RootOfUnity::new(ell)?;
    let ch = CentralCharacter::parse(&ring, n, character)?;
    let predicted = ch.in_localized_locus(&ring);
    let description = ch.describe(&ring);
    let f = fiber(n, ell, ch)?;
    let cert = f.azumaya_certificate();
    let mut r = RunReport::new("fiber")
        .param("N", n)
        .param("ell", ell)
        .param("char", character);
    r.line(format!("character {}", description.join(", ")));
    r.line(format!(
        "dimension {}, center dimension {}, trace form rank {}: {}",
        cert.dimension,
        cert.center_dimension,
        cert.trace_rank,
        if cert.azumaya {
            format!("matrix algebra of size {}", cert.matrix_size)
        } else {
            "not a matrix algebra".to_string()
        }
    ));
    r.push(
        CheckRecord::new("certificate agrees with the locus inequations", "azumaya-locus", cert.azumaya == predicted)
            .witness_on_fail(|| format!("predicted azumaya = {predicted}")),
    );
    r.set_result(&cert);
    Ok(r)
}

/// Seeded sweep of characters inside and outside the locus.
pub fn fiber_sweep(n: usize, ell: u32, samples: usize, outside: usize, seed: u64) -> Result<RunReport, CliError> {
    fiber_dimension_guard(n, ell)?;
    let rep = locus_sweep(n, ell, samples, outside, seed)?;
    let mut r = RunReport::new("fiber")
        .param("N", n)
        .param("ell", ell)
        .param("samples", samples)
        .param("outside", outside)
        .param("seed", seed);
    let size = (ell as usize).pow(n as u32);
    for s in &rep.samples {
        r.line(format!(
            "{:?} [{}]: center {}, trace rank {}, azumaya {}",
            s.kind,
            s.character.join(", "),
            s.certificate.center_dimension,
            s.certificate.trace_rank,
            s.certificate.azumaya
        ));
    }
    let inside: Vec<_> = rep.samples.iter().filter(|s| !s.pattern.iter().any(|z| *z)).collect();
    let outside_s: Vec<_> = rep.samples.iter().filter(|s| s.pattern.iter().any(|z| *z)).collect();
    let in_ok = inside
        .iter()
        .all(|s| s.certificate.azumaya && s.certificate.center_dimension == 1 && s.certificate.trace_rank == size * size);
    r.push(CheckRecord::new(
        format!("{} characters in the locus are matrix algebras of size {size}", inside.len()),
        "azumaya-locus",
        in_ok,
    ));
    let out_ok = outside_s.iter().all(|s| !s.certificate.azumaya);
    r.push(CheckRecord::new(
        format!("{} characters off the locus fail certification", outside_s.len()),
        "azumaya-locus",
        out_ok,
    ));
    r.set_result(&rep);
    Ok(r)
}

fn push_hom(r: &mut RunReport, rep: &HomReport, tag: &str) {
    for (g, img) in &rep.images {
        r.line(format!("{g} -> {img}"));
    }
    for rel in &rep.relations {
        r.push(
            CheckRecord::new(format!("relation {} maps to 0", rel.relation), tag, rel.holds)
                .witness_on_fail(|| rel.image.clone()),
        );
    }
    for (name, ok) in &rep.checks {
        r.push(CheckRecord::new(name.clone(), tag, *ok));
    }
}

/// The moment map `mu_q: O_q(GL_2) -> D_q(C^2)`.
pub fn moment_mu(ell: u32, frobenius: bool, samples: usize, seed: u64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("moment-map")
        .param("map", "mu")
        .param("ell", ell)
        .param("frobenius", frobenius)
        .param("samples", samples)
        .param("seed", seed);
    let hom = mu_q()?;
    push_hom(&mut r, &hom, "mu");
    let mut result = serde_json::json!({ "hom": hom });
    if frobenius {
        let checks = mu_frobenius(ell)?;
        for c in &checks {
            r.push(
                CheckRecord::new(format!("{} -> {}", c.generator, c.expected), "mu-frobenius", c.holds)
                    .witness_on_fail(|| c.image.clone()),
            );
        }
        let diagram = diagram_check_mu(ell, samples, seed)?;
        for id in &diagram.identifications {
            r.line(format!(
                "identification a = {}, b = {}, xi = {}, zeta = {}{}",
                id.a,
                id.b,
                id.xi,
                id.zeta,
                if id.transposed { " (transposed)" } else { "" }
            ));
        }
        r.push(CheckRecord::new(
            format!(
                "restriction matches the classical moment map ({} identifications)",
                diagram.identifications.len()
            ),
            "mu-frobenius",
            !diagram.identifications.is_empty(),
        ));
        r.push(CheckRecord::new(
            format!("{}/{} spot checks", diagram.spot_checks_passed, diagram.spot_checks),
            "mu-frobenius",
            diagram.spot_checks_passed == diagram.spot_checks,
        ));
        r.push(CheckRecord::new("locus inequations coincide", "mu-frobenius", diagram.inequations_match));
        result["frobenius"] = serde_json::to_value(&checks).unwrap_or_default();
        result["diagram"] = serde_json::to_value(&diagram).unwrap_or_default();
    }
    r.set_result(result);
    Ok(r)
}

/// The moment map `phi_q: L -> D X^-1 D^-1 X`.
pub fn moment_phi(ell: u32, frobenius: bool, samples: usize, seed: u64) -> Result<RunReport, CliError> {
    let mut r = RunReport::new("moment-map")
        .param("map", "phi")
        .param("ell", ell)
        .param("frobenius", frobenius)
        .param("samples", samples)
        .param("seed", seed);
    // Building the map verifies both inverses on both sides.
    let (hom, det) = phi_q()?;
    r.push(CheckRecord::new("X^-1 and D^-1 are two-sided inverses", "phi", true));
    push_hom(&mut r, &hom, "phi");
    let mut result = serde_json::json!({ "hom": hom, "determinant": det });
    if frobenius {
        match phi_frobenius_check(ell, samples, seed) {
            Ok(rep) => {
                for (g, ok) in &rep.symbolic {
                    r.push(CheckRecord::new(format!("{g} entry matches the classical formula"), "phi-frobenius", *ok));
                }
                r.push(CheckRecord::new("det X^(l) = detq(X)^l and det D^(l) = detq(D)^l", "phi-frobenius", rep.det_identity));
                r.push(CheckRecord::new(
                    format!("z entry at {}/{} random characters", rep.samples_passed, rep.samples),
                    "phi-frobenius",
                    rep.samples_passed == rep.samples,
                ));
                result["frobenius"] = serde_json::to_value(&rep).unwrap_or_default();
            }
            Err(crate::momentmaps::MomentMapError::ResourceBound(l)) => {
                r.push(CheckRecord::skip("Frobenius restriction", "phi-frobenius", format!("level {l} not supported")));
            }
            Err(e) => return Err(e.into()),
        }
    }
    r.set_result(result);
    Ok(r)
}

/// Semiclassical limit of `D_q(C^N)` against the closed-form bivector.
pub fn poisson(n: usize) -> Result<RunReport, CliError> {
    if n == 0 || n > 4 {
        return Err(CliError::Resource(format!("poisson supports 1 <= N <= 4, got {n}")));
    }
    let rep = compare_with_pi(n)?;
    let mut r = RunReport::new("poisson").param("N", n);
    r.line(format!("semiclassical determinant: {}", rep.semiclassical_determinant));
    r.line(format!("closed-form determinant:   {}", rep.pi_determinant));
    for p in &rep.pairs {
        r.line(format!(
            "{{{}, {}}}: semiclassical {} | closed form {} | {}",
            p.pair[0], p.pair[1], p.semiclassical, p.pi, p.sign
        ));
    }
    let jac = &rep.semiclassical_jacobi_failures;
    r.push(
        CheckRecord::new("semiclassical bracket satisfies Jacobi", "poisson", jac.is_empty())
            .witness_on_fail(|| format!("{:?}: {}", jac[0].triple, jac[0].jacobiator)),
    );
    let mismatch: Vec<_> = rep.pairs.iter().filter(|p| p.sign == "mismatch").collect();
    r.push(
        CheckRecord::new("coefficient magnitudes match the closed form", "poisson", mismatch.is_empty())
            .witness_on_fail(|| format!("{:?}", mismatch[0].pair)),
    );
    r.push(
        CheckRecord::new(
            "degeneracy locus is cut out by 1 + sum_{k<=i} y_k z_k",
            "poisson",
            rep.semiclassical_factors.complete && rep.semiclassical_factors.factors.iter().all(|(_, e)| *e > 0),
        )
        .with_witness(
            rep.semiclassical_factors
                .factors
                .iter()
                .map(|(f, e)| format!("({f})^{e}"))
                .collect::<Vec<_>>()
                .join(" * "),
        ),
    );
    let flipped = rep.pairs.iter().filter(|p| p.sign == "-").count();
    r.push(CheckRecord::finding(
        "sign comparison",
        "poisson",
        format!("{flipped} of {} nonzero entries have opposite sign", rep.pairs.iter().filter(|p| p.sign != "0").count()),
    ));
    r.push(CheckRecord::finding(
        "closed-form bivector Jacobi failures",
        "poisson",
        rep.pi_jacobi_failures.len().to_string(),
    ));
    r.set_result(&rep);
    Ok(r)
}

/// Overlap check of the shipped rule sets.
pub fn confluence() -> Result<RunReport, CliError> {
    let mut r = RunReport::new("confluence");
    let mut names: Vec<String> = (1..=3).map(|n| format!("dq{n}")).collect();
    names.push("oq_gl2_plus".into());
    names.push("dq_gl2_plus".into());
    for name in names {
        let bad = check_confluence(&Algebra::new(by_name(&name)?, GenericQ));
        r.push(
            CheckRecord::new(format!("{name} rules are confluent"), "confluence", bad.is_empty())
                .witness_on_fail(|| format!("{:?}: {}", bad[0].generators, bad[0].difference)),
        );
    }
    Ok(r)
}
