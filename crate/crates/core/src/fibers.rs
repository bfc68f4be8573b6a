//! Fibers of `D_q(C^N)` over central characters at a root of unity, and
//! their Azumaya (full matrix algebra) certification.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coefficients::{CoeffError, CoeffRing, CycNumber, RootOfUnity};
use crate::engine::{Algebra, EngineError, Monomial, NCElement, OreOp};
use crate::expr::{eval, parse, ExprError, GeneratorNegatives};
use crate::linalg::{Echelon, SparseRow};
use crate::presentations::{dq_cn, dq_cn_with_roots, PresentationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiberError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("character needs {expected} values, got {got}")]
    CharacterLength { expected: usize, got: usize },
    #[error("character value {0} is not a scalar")]
    NotScalar(String),
}

/// Values of `x_i^l` and `d_i^l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralCharacter {
    pub x: Vec<CycNumber>,
    pub d: Vec<CycNumber>,
}

impl CentralCharacter {
    pub fn from_rationals(ring: &RootOfUnity, x: &[BigRational], d: &[BigRational]) -> Self {
        CentralCharacter {
            x: x.iter().map(|v| ring.from_rational(v)).collect(),
            d: d.iter().map(|v| ring.from_rational(v)).collect(),
        }
    }

    pub fn from_ints(ring: &RootOfUnity, x: &[i64], d: &[i64]) -> Self {
        CentralCharacter {
            x: x.iter().map(|&v| ring.from_int(v)).collect(),
            d: d.iter().map(|&v| ring.from_int(v)).collect(),
        }
    }

    /// Parse `nu_1, .., nu_N, nucheck_1, .., nucheck_N`; each entry may be any
    /// scalar expression in `q`.
    pub fn parse(ring: &RootOfUnity, n: usize, text: &str) -> Result<Self, FiberError> {
        let scalars = Algebra::new(dq_cn(0)?, ring.clone());
        let vals = text
            .split(',')
            .map(|s| {
                let f = eval(&scalars, &parse(s.trim())?, GeneratorNegatives::Reject)?;
                let e = f.as_element().ok_or_else(|| FiberError::NotScalar(s.to_string()))?;
                let c = e.terms().next().map(|(_, c)| c.clone()).unwrap_or_else(|| ring.zero());
                Ok(c)
            })
            .collect::<Result<Vec<_>, FiberError>>()?;
        if vals.len() != 2 * n {
            return Err(FiberError::CharacterLength {
                expected: 2 * n,
                got: vals.len(),
            });
        }
        Ok(CentralCharacter {
            x: vals[..n].to_vec(),
            d: vals[n..].to_vec(),
        })
    }

    pub fn rank(&self) -> usize {
        self.x.len()
    }

    /// The values `1 + sum_{j <= i} nu_j nucheck_j` for `i = 1..N`: the images of
    /// `beta_i^l`.
    pub fn beta_values(&self, ring: &RootOfUnity) -> Vec<CycNumber> {
        let mut acc = ring.one();
        self.x
            .iter()
            .zip(&self.d)
            .map(|(a, b)| {
                acc = ring.add(&acc, &ring.mul(a, b));
                acc.clone()
            })
            .collect()
    }

    /// Which `beta_i^l` vanish.
    pub fn pattern(&self, ring: &RootOfUnity) -> Vec<bool> {
        self.beta_values(ring).iter().map(|v| ring.is_zero(v)).collect()
    }

    pub fn in_localized_locus(&self, ring: &RootOfUnity) -> bool {
        !self.pattern(ring).into_iter().any(|z| z)
    }

    fn values(&self) -> Vec<CycNumber> {
        self.x.iter().chain(&self.d).cloned().collect()
    }

    pub fn describe(&self, ring: &RootOfUnity) -> Vec<String> {
        self.values().iter().map(|v| ring.format(v)).collect()
    }
}

/// One term of a product of basis monomials before the character is applied:
/// target basis index, how many `l`-th powers of each generator were split
/// off, coefficient.
type RawTerm = (usize, Vec<u32>, CycNumber);

/// Character-independent multiplication data for `D_q(C^N)` at level `l`.
#[derive(Debug)]
pub struct FiberStructure {
    pub rank: usize,
    pub level: u32,
    ring: RootOfUnity,
    basis: Vec<Monomial>,
    products: Vec<Vec<Vec<RawTerm>>>,
}

impl FiberStructure {
    pub fn new(n: usize, level: u32) -> Result<Arc<Self>, FiberError> {
        let ring = RootOfUnity::new(level)?;
        let alg = Algebra::new(dq_cn(n)?, ring.clone());
        let ngens = 2 * n;
        let dim = (level as usize).pow(ngens as u32);
        let basis: Vec<Monomial> = (0..dim)
            .map(|mut idx| {
                let mut exps = vec![0u32; ngens];
                for e in exps.iter_mut() {
                    *e = (idx % level as usize) as u32;
                    idx /= level as usize;
                }
                Monomial::from_exponents(&exps)
            })
            .collect();
        let products = basis
            .par_iter()
            .map(|u| {
                basis
                    .iter()
                    .map(|v| {
                        alg.mul_monomials(u, v)
                            .terms()
                            .map(|(m, c)| {
                                let (idx, quot) = split_powers(m, level);
                                (idx, quot, c.clone())
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(Arc::new(FiberStructure {
            rank: n,
            level,
            ring,
            basis,
            products,
        }))
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ring(&self) -> &RootOfUnity {
        &self.ring
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    /// Basis index of the `g`-th generator.
    pub fn generator_index(&self, g: usize) -> usize {
        (self.level as usize).pow(g as u32)
    }
}

fn split_powers(m: &Monomial, level: u32) -> (usize, Vec<u32>) {
    let mut idx = 0usize;
    let mut stride = 1usize;
    let mut quot = Vec::with_capacity(m.ngens());
    for &e in m.exponents() {
        idx += (e % level) as usize * stride;
        stride *= level as usize;
        quot.push(e / level);
    }
    (idx, quot)
}

/// The fiber `D_q(C^N) / (x_i^l - nu_i, d_i^l - nucheck_i)`.
pub struct FiberAlgebra {
    structure: Arc<FiberStructure>,
    pub character: CentralCharacter,
    /// `table[u][v]` = `b_u * b_v` in the basis.
    table: Vec<Vec<SparseRow<CycNumber>>>,
}

impl FiberAlgebra {
    pub fn new(structure: Arc<FiberStructure>, character: CentralCharacter) -> Result<Self, FiberError> {
        let n = structure.rank;
        if character.x.len() != n || character.d.len() != n {
            return Err(FiberError::CharacterLength {
                expected: 2 * n,
                got: character.x.len() + character.d.len(),
            });
        }
        let ring = structure.ring.clone();
        let values = character.values();
        let mut powers: BTreeMap<(usize, u32), CycNumber> = BTreeMap::new();
        let mut scalar = |quot: &[u32]| {
            let mut acc = ring.one();
            for (g, &k) in quot.iter().enumerate() {
                if k > 0 {
                    let p = powers.entry((g, k)).or_insert_with(|| ring.pow(&values[g], k));
                    acc = ring.mul(&acc, p);
                }
            }
            acc
        };
        let mut table = Vec::with_capacity(structure.dimension());
        for row in &structure.products {
            let mut out = Vec::with_capacity(row.len());
            for terms in row {
                let mut r = SparseRow::new();
                for (idx, quot, c) in terms {
                    let v = ring.mul(c, &scalar(quot));
                    let e = r.entry(*idx).or_insert_with(|| ring.zero());
                    *e = ring.add(e, &v);
                }
                r.retain(|_, v| !ring.is_zero(v));
                out.push(r);
            }
            table.push(out);
        }
        Ok(FiberAlgebra {
            structure,
            character,
            table,
        })
    }

    pub fn dimension(&self) -> usize {
        self.structure.dimension()
    }

    fn ring(&self) -> &RootOfUnity {
        &self.structure.ring
    }

    pub fn product(&self, u: usize, v: usize) -> &SparseRow<CycNumber> {
        &self.table[u][v]
    }

    /// Image of an element of `D_q(C^N)` (root mode) in the fiber.
    pub fn reduce(&self, e: &NCElement<CycNumber>) -> SparseRow<CycNumber> {
        let ring = self.ring();
        let values = self.character.values();
        let mut r = SparseRow::new();
        for (m, c) in e.terms() {
            let (idx, quot) = split_powers(m, self.structure.level);
            let mut v = c.clone();
            for (g, &k) in quot.iter().enumerate() {
                v = ring.mul(&v, &ring.pow(&values[g], k));
            }
            let slot = r.entry(idx).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &v);
        }
        r.retain(|_, v| !ring.is_zero(v));
        r
    }

    /// Dimension of the center, from `[e, g] = 0` for the generators `g`.
    pub fn center_dimension(&self) -> usize {
        let ring = self.ring().clone();
        let dim = self.dimension();
        let gens: Vec<usize> = (0..2 * self.structure.rank).map(|g| self.structure.generator_index(g)).collect();
        let mut rows: BTreeMap<(usize, usize), SparseRow<CycNumber>> = BTreeMap::new();
        for u in 0..dim {
            for (gi, &g) in gens.iter().enumerate() {
                let mut diff = self.table[u][g].clone();
                for (w, c) in &self.table[g][u] {
                    let e = diff.entry(*w).or_insert_with(|| ring.zero());
                    *e = ring.sub(e, c);
                }
                for (w, c) in diff {
                    if !ring.is_zero(&c) {
                        rows.entry((gi, w)).or_default().insert(u, c);
                    }
                }
            }
        }
        let mut ech = Echelon::new(ring);
        for (_, r) in rows {
            ech.insert(r);
        }
        dim - ech.rank()
    }

    /// `tau(w) = trace of left multiplication by b_w`.
    fn regular_trace(&self) -> Vec<CycNumber> {
        let ring = self.ring();
        (0..self.dimension())
            .map(|w| {
                let mut t = ring.zero();
                for v in 0..self.dimension() {
                    if let Some(c) = self.table[w][v].get(&v) {
                        t = ring.add(&t, c);
                    }
                }
                t
            })
            .collect()
    }

    /// Rank of `B(u, v) = tr(L_u L_v) = tau(u v)`.
    pub fn trace_form_rank(&self) -> usize {
        let ring = self.ring().clone();
        let tau = self.regular_trace();
        let dim = self.dimension();
        let mut ech = Echelon::new(ring.clone());
        for u in 0..dim {
            let mut row = SparseRow::new();
            for v in 0..dim {
                let mut s = ring.zero();
                for (w, c) in &self.table[u][v] {
                    if !ring.is_zero(&tau[*w]) {
                        s = ring.add(&s, &ring.mul(c, &tau[*w]));
                    }
                }
                if !ring.is_zero(&s) {
                    row.insert(v, s);
                }
            }
            ech.insert(row);
        }
        ech.rank()
    }

    pub fn azumaya_certificate(&self) -> AzumayaCertificate {
        let center_dim = self.center_dimension();
        let trace_rank = self.trace_form_rank();
        let dim = self.dimension();
        let side = (self.structure.level as usize).pow(self.structure.rank as u32);
        AzumayaCertificate {
            dimension: dim,
            center_dimension: center_dim,
            trace_rank,
            matrix_size: side,
            azumaya: center_dim == 1 && trace_rank == dim && side * side == dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AzumayaCertificate {
    pub dimension: usize,
    pub center_dimension: usize,
    pub trace_rank: usize,
    /// `l^N`: the fiber is `Mat_{matrix_size}` when certified.
    pub matrix_size: usize,
    pub azumaya: bool,
}

/// Convenience: build the structure and the fiber in one call.
pub fn fiber(n: usize, level: u32, character: CentralCharacter) -> Result<FiberAlgebra, FiberError> {
    FiberAlgebra::new(FiberStructure::new(n, level)?, character)
}

/// Which `beta_i^l` vanish at a sampled character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampleKind {
    /// All of `1 + sum_{j <= i} nu_j nucheck_j` nonzero.
    Inside,
    /// The `i`-th value (1-based) is forced to vanish.
    Vanishing(usize),
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let v = rng.gen_range(-4..=4);
        if v != 0 {
            return v;
        }
    }
}

/// Draw a character of the requested kind with small rational values.
pub fn sample_character(ring: &RootOfUnity, n: usize, kind: SampleKind, rng: &mut ChaCha8Rng) -> CentralCharacter {
    loop {
        let x: Vec<BigRational> = (0..n).map(|_| BigRational::from_integer(rng.gen_range(-4..=4).into())).collect();
        let mut d: Vec<BigRational> = (0..n).map(|_| BigRational::from_integer(rng.gen_range(-4..=4).into())).collect();
        if let SampleKind::Vanishing(i) = kind {
            // Solve 1 + sum_{j <= i} x_j d_j = 0 for d_i with x_i nonzero.
            let mut x = x;
            x[i - 1] = BigRational::from_integer(random_nonzero(rng).into());
            let mut s = BigRational::from_integer(1.into());
            for j in 0..i - 1 {
                s += &x[j] * &d[j];
            }
            d[i - 1] = -s / &x[i - 1];
            let c = CentralCharacter::from_rationals(ring, &x, &d);
            let pat = c.pattern(ring);
            if pat[i - 1] && pat[..i - 1].iter().all(|z| !z) {
                return c;
            }
            continue;
        }
        let c = CentralCharacter::from_rationals(ring, &x, &d);
        if c.in_localized_locus(ring) {
            return c;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusSample {
    pub character: Vec<String>,
    pub kind: SampleKind,
    /// Vanishing pattern of the `beta_i^l` values.
    pub pattern: Vec<bool>,
    pub certificate: AzumayaCertificate,
    /// The localized-locus prediction agrees with the certificate.
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocusReport {
    pub schema: &'static str,
    pub rank: usize,
    pub level: u32,
    pub seed: u64,
    pub samples: Vec<LocusSample>,
}

impl LocusReport {
    pub fn all_agree(&self) -> bool {
        self.samples.iter().all(|s| s.agrees)
    }
}

/// Certify `inside` random characters in the localized locus and
/// `outside` characters where some `beta_i^l` vanishes (cycling through `i`).
pub fn locus_sweep(n: usize, level: u32, inside: usize, outside: usize, seed: u64) -> Result<LocusReport, FiberError> {
    let structure = FiberStructure::new(n, level)?;
    let ring = structure.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::new();
    for _ in 0..inside {
        jobs.push((SampleKind::Inside, sample_character(&ring, n, SampleKind::Inside, &mut rng)));
    }
    for k in 0..outside {
        if n == 0 {
            break;
        }
        let kind = SampleKind::Vanishing(k % n + 1);
        jobs.push((kind, sample_character(&ring, n, kind, &mut rng)));
    }
    let samples = jobs
        .into_par_iter()
        .map(|(kind, ch)| {
            let pattern = ch.pattern(&ring);
            let character = ch.describe(&ring);
            let f = FiberAlgebra::new(structure.clone(), ch)?;
            let certificate = f.azumaya_certificate();
            let predicted = !pattern.iter().any(|z| *z);
            Ok(LocusSample {
                character,
                kind,
                pattern,
                agrees: certificate.azumaya == predicted,
                certificate,
            })
        })
        .collect::<Result<Vec<_>, FiberError>>()?;
    Ok(LocusReport {
        schema: "qweyl-locus/1",
        rank: n,
        level,
        seed,
        samples,
    })
}

/// Relations of `w_i = x_i alpha_i^-1`, `z_i = s d_i alpha_i^-1` in the square
/// root extension, for a sign/scale `s` given as text (e.g. `-q^-1`).
#[derive(Debug, Clone, Serialize)]
pub struct TensorRelationReport {
    pub scale: String,
    /// `(relation, holds)`
    pub relations: Vec<(String, bool)>,
}

impl TensorRelationReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|(_, ok)| *ok)
    }
}

pub fn tensor_relations(n: usize, scale: &str) -> Result<TensorRelationReport, FiberError> {
    let alg = Algebra::new(dq_cn_with_roots(n)?, crate::coefficients::GenericQ);
    let ev = |s: &str| -> Result<_, FiberError> { Ok(eval(&alg, &parse(s)?, GeneratorNegatives::Reject)?) };
    let w = |i: usize| format!("(x{i}*alpha_{i}^-1)");
    let z = |i: usize| format!("(({scale})*d{i}*alpha_{i}^-1)");
    let mut checks: Vec<(String, String, String)> = Vec::new();
    for j in 1..=n {
        for i in 1..j {
            checks.push((format!("w{j} w{i} = w{i} w{j}"), format!("{}*{}", w(j), w(i)), format!("{}*{}", w(i), w(j))));
            checks.push((format!("z{j} z{i} = z{i} z{j}"), format!("{}*{}", z(j), z(i)), format!("{}*{}", z(i), z(j))));
        }
    }
    for j in 1..=n {
        for i in 1..=n {
            if i != j {
                checks.push((format!("z{j} w{i} = w{i} z{j}"), format!("{}*{}", z(j), w(i)), format!("{}*{}", w(i), z(j))));
            }
        }
    }
    for i in 1..=n {
        checks.push((
            format!("w{i} z{i} = q^2 z{i} w{i} + (q^2 - 1)"),
            format!("{}*{}", w(i), z(i)),
            format!("q^2*{}*{} + q^2 - 1", z(i), w(i)),
        ));
    }
    let relations = checks
        .into_iter()
        .map(|(name, lhs, rhs)| {
            let d = alg.ore_arith(&ev(&lhs)?, &ev(&rhs)?, OreOp::Sub)?;
            Ok((name, d.numerator.is_zero()))
        })
        .collect::<Result<Vec<_>, FiberError>>()?;
    Ok(TensorRelationReport {
        scale: scale.to_string(),
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;

    fn ring(l: u32) -> RootOfUnity {
        RootOfUnity::new(l).unwrap()
    }

    #[test]
    fn weyl_one_fibers() {
        let r = ring(3);
        let s = FiberStructure::new(1, 3).unwrap();
        assert_eq!(s.dimension(), 9);
        let good = FiberAlgebra::new(s.clone(), CentralCharacter::from_ints(&r, &[1], &[1])).unwrap();
        for u in 0..9 {
            assert_eq!(good.product(0, u), &SparseRow::from([(u, r.one())]));
        }
        assert_eq!(good.center_dimension(), 1);
        assert_eq!(good.trace_form_rank(), 9);
        assert!(good.azumaya_certificate().azumaya);
        let bad = FiberAlgebra::new(s.clone(), CentralCharacter::from_ints(&r, &[1], &[-1])).unwrap();
        // Local but not semisimple: the radical kills the trace form.
        let cert = bad.azumaya_certificate();
        assert_eq!(cert.center_dimension, 1);
        assert!(cert.trace_rank < 9);
        assert!(!cert.azumaya);
        let origin = FiberAlgebra::new(s, CentralCharacter::from_ints(&r, &[0], &[0])).unwrap();
        assert_eq!(origin.trace_form_rank(), 9);
    }

    #[test]
    fn beta_cubed_is_scalar_in_fiber() {
        let r = ring(3);
        let f = fiber(1, 3, CentralCharacter::from_ints(&r, &[2], &[5])).unwrap();
        let alg = Algebra::new(dq_cn(1).unwrap(), r.clone());
        let b3 = parse_element(&alg, "(1 + x1*d1)^3").unwrap();
        assert_eq!(f.reduce(&b3), SparseRow::from([(0, r.from_int(11))]));
        assert_eq!(f.reduce(&parse_element(&alg, "x1^3").unwrap()), SparseRow::from([(0, r.from_int(2))]));
    }

    #[test]
    fn two_variable_sweep_matches_locus() {
        let report = locus_sweep(2, 3, 2, 2, 7).unwrap();
        assert_eq!(report.samples.len(), 4);
        for s in &report.samples {
            assert_eq!(s.certificate.dimension, 81);
            assert!(s.agrees, "{s:?}");
        }
    }

    #[test]
    fn rank_zero_fiber() {
        let f = fiber(0, 3, CentralCharacter { x: vec![], d: vec![] }).unwrap();
        assert_eq!(f.dimension(), 1);
        assert_eq!(f.center_dimension(), 1);
    }

    #[test]
    fn character_parsing() {
        let r = ring(3);
        let c = CentralCharacter::parse(&r, 1, "q + 1, -2/3").unwrap();
        assert_eq!(c.x[0], r.add(&r.q_pow(1), &r.one()));
        assert!(CentralCharacter::parse(&r, 2, "1, 2").is_err());
    }

    #[test]
    fn tensor_relations_hold_with_inverse_scale() {
        let good = tensor_relations(2, "-q^-1").unwrap();
        assert!(good.all_hold(), "{:?}", good.relations);
        let printed = tensor_relations(2, "-q").unwrap();
        assert!(!printed.all_hold());
    }
}
