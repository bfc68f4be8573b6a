//! Polynomial Poisson bivectors on `T*C^N` with coordinates `y_1..y_N`,
//! `z_1..z_N`: the closed-form bivector, Jacobi, the degeneracy
//! determinant, and the first-order bracket of `D_q(C^N)` at `q = 1`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coefficients::{format_rational, Classical, CoeffError, GenericQ, QLaurent};
use crate::engine::{Algebra, Monomial, NCElement};
use crate::momentmaps::{Arith, CommPoly, PolyRing};
use crate::presentations::{dq_cn, PresentationError};

pub type Poly = CommPoly<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PoissonError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("bracket is not divisible by q - 1: {0}")]
    NotDivisible(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

pub fn coordinate_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).chain((1..=n).map(|i| format!("z{i}"))).collect()
}

pub fn poly_ring(n: usize) -> PolyRing<Classical> {
    PolyRing::new(Classical, 2 * n)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Text of a polynomial, terms in decreasing lex order of exponents.
pub fn format_poly(p: &Poly, names: &[String]) -> String {
    if p.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.terms.iter().rev().enumerate() {
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(v, &k)| if k == 1 { names[v].clone() } else { format!("{}^{k}", names[v]) })
            .collect();
        let abs = c.abs();
        let body = match (abs.is_one(), mono.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => mono.join("*"),
            (false, true) => format_rational(&abs),
            (false, false) => format!("{}*{}", format_rational(&abs), mono.join("*")),
        };
        match (idx, c.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

pub fn derivative(p: &Poly, var: usize) -> Poly {
    let mut terms = BTreeMap::new();
    for (e, c) in &p.terms {
        if e[var] > 0 {
            let mut e2 = e.clone();
            e2[var] -= 1;
            terms.insert(e2, c * rat(e[var] as i64));
        }
    }
    CommPoly { terms }
}

/// Exact division in `Q[vars]`, `None` if `b` does not divide `a`.
pub fn exact_div(a: &Poly, b: &Poly) -> Option<Poly> {
    let pr = PolyRing::new(Classical, b.terms.keys().next()?.len());
    let (lb_e, lb_c) = b.terms.iter().next_back()?;
    let mut rem = a.clone();
    let mut quot = pr.zero();
    while let Some((e, c)) = rem.terms.iter().next_back() {
        if e.iter().zip(lb_e).any(|(x, y)| x < y) {
            return None;
        }
        let qe: Vec<u32> = e.iter().zip(lb_e).map(|(x, y)| x - y).collect();
        let t = CommPoly {
            terms: BTreeMap::from([(qe, c / lb_c)]),
        };
        rem = pr.sub(&rem, &pr.mul(&t, b));
        quot = pr.add(&quot, &t);
    }
    Some(quot)
}

/// Antisymmetric table of polynomial coefficients `pi^{uv}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBivector {
    pub rank: usize,
    /// Entries with `u < v`; the rest follow by antisymmetry.
    upper: BTreeMap<(usize, usize), Poly>,
}

impl PolyBivector {
    pub fn zero(rank: usize) -> Self {
        PolyBivector {
            rank,
            upper: BTreeMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        2 * self.rank
    }

    /// Set `pi^{uv}` (and `pi^{vu} = -pi^{uv}`).
    pub fn set(&mut self, u: usize, v: usize, p: Poly) {
        assert_ne!(u, v, "diagonal entries vanish");
        let pr = poly_ring(self.rank);
        let (key, val) = if u < v { ((u, v), p) } else { ((v, u), pr.sub(&pr.zero(), &p)) };
        if val.terms.is_empty() {
            self.upper.remove(&key);
        } else {
            self.upper.insert(key, val);
        }
    }

    pub fn get(&self, u: usize, v: usize) -> Poly {
        let pr = poly_ring(self.rank);
        match u.cmp(&v) {
            std::cmp::Ordering::Equal => pr.zero(),
            std::cmp::Ordering::Less => self.upper.get(&(u, v)).cloned().unwrap_or_else(|| pr.zero()),
            std::cmp::Ordering::Greater => pr.sub(&pr.zero(), &self.get(v, u)),
        }
    }
}

/// `pi = sum_{j>i} (y_j y_i dy_j^dy_i - z_j z_i dz_j^dz_i)
///      + sum_{i != j} y_i z_j dy_i^dz_j + 2 sum_i (1 + sum_{k<=i} y_k z_k) dy_i^dz_i`.
pub fn pi_bivector(n: usize) -> PolyBivector {
    let pr = poly_ring(n);
    let y = |i: usize| pr.var(i - 1);
    let z = |i: usize| pr.var(n + i - 1);
    let mut b = PolyBivector::zero(n);
    for i in 1..=n {
        for j in i + 1..=n {
            b.set(j - 1, i - 1, pr.mul(&y(j), &y(i)));
            b.set(n + j - 1, n + i - 1, pr.sub(&pr.zero(), &pr.mul(&z(j), &z(i))));
        }
        for j in 1..=n {
            if i != j {
                b.set(i - 1, n + j - 1, pr.mul(&y(i), &z(j)));
            }
        }
        let mut s = pr.one();
        for k in 1..=i {
            s = pr.add(&s, &pr.mul(&y(k), &z(k)));
        }
        b.set(i - 1, n + i - 1, pr.mul(&pr.constant(rat(2)), &s));
    }
    b
}

/// One coordinate triple whose Jacobiator is nonzero.
#[derive(Debug, Clone, Serialize)]
pub struct JacobiFailure {
    pub triple: [String; 3],
    pub jacobiator: String,
}

/// `sum_cyc sum_t pi^{ut} d_t pi^{vw}` over all triples `u < v < w`.
pub fn jacobi_check(b: &PolyBivector) -> Vec<JacobiFailure> {
    let pr = poly_ring(b.rank);
    let dim = b.dimension();
    let names = coordinate_names(b.rank);
    let triples: Vec<(usize, usize, usize)> = (0..dim)
        .flat_map(|u| (u + 1..dim).flat_map(move |v| (v + 1..dim).map(move |w| (u, v, w))))
        .collect();
    triples
        .into_par_iter()
        .filter_map(|(u, v, w)| {
            let mut total = pr.zero();
            for (a, bb, c) in [(u, v, w), (v, w, u), (w, u, v)] {
                let pbc = b.get(bb, c);
                for t in 0..dim {
                    let term = pr.mul(&b.get(a, t), &derivative(&pbc, t));
                    total = pr.add(&total, &term);
                }
            }
            (!total.terms.is_empty()).then(|| JacobiFailure {
                triple: [names[u].clone(), names[v].clone(), names[w].clone()],
                jacobiator: format_poly(&total, &names),
            })
        })
        .collect()
}

fn determinant(pr: &PolyRing<Classical>, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return pr.one();
    }
    let mut total = pr.zero();
    for col in 0..n {
        if m[0][col].terms.is_empty() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = pr.mul(&m[0][col], &determinant(pr, &minor));
        total = if col % 2 == 0 { pr.add(&total, &term) } else { pr.sub(&total, &term) };
    }
    total
}

/// Determinant of the `2N x 2N` coefficient matrix.
pub fn degeneracy_determinant(b: &PolyBivector) -> Poly {
    let pr = poly_ring(b.rank);
    let dim = b.dimension();
    let m: Vec<Vec<Poly>> = (0..dim).map(|u| (0..dim).map(|v| b.get(u, v)).collect()).collect();
    determinant(&pr, &m)
}

/// `1 + sum_{k <= i} y_k z_k` for `i = 1..N`.
pub fn locus_factors(n: usize) -> Vec<Poly> {
    let pr = poly_ring(n);
    let mut s = pr.one();
    (1..=n)
        .map(|k| {
            s = pr.add(&s, &pr.mul(&pr.var(k - 1), &pr.var(n + k - 1)));
            s.clone()
        })
        .collect()
}

/// `p = constant * prod f_i^{e_i} * cofactor`, dividing out each `f_i` as
/// often as possible.
#[derive(Debug, Clone, Serialize)]
pub struct Factorization {
    pub factors: Vec<(String, u32)>,
    pub cofactor: String,
    /// The cofactor is a nonzero constant.
    pub complete: bool,
}

pub fn factor_against(p: &Poly, candidates: &[Poly], names: &[String]) -> Factorization {
    let mut rest = p.clone();
    let mut factors = Vec::new();
    for f in candidates {
        let mut e = 0;
        while !rest.terms.is_empty() {
            match exact_div(&rest, f) {
                Some(q) => {
                    rest = q;
                    e += 1;
                }
                None => break,
            }
        }
        factors.push((format_poly(f, names), e));
    }
    let complete = rest.terms.len() == 1 && rest.terms.keys().next().is_some_and(|e| e.iter().all(|&k| k == 0));
    Factorization {
        factors,
        cofactor: format_poly(&rest, names),
        complete,
    }
}

/// `(FG - GF) / (q - 1)` at `q = 1`, lifting `y_i -> x_i`, `z_i -> d_i`
/// with `x`'s to the left.
pub struct Semiclassical {
    alg: Algebra<GenericQ>,
    pub rank: usize,
}

impl Semiclassical {
    pub fn new(n: usize) -> Result<Self, PoissonError> {
        Ok(Semiclassical {
            alg: Algebra::new(dq_cn(n)?, GenericQ),
            rank: n,
        })
    }

    fn lift(&self, p: &Poly) -> NCElement<QLaurent> {
        let mut e = NCElement::zero();
        for (exps, c) in &p.terms {
            e.add_term(&GenericQ, Monomial::from_exponents(exps), &QLaurent::from_rational(c.clone()));
        }
        e
    }

    pub fn bracket(&self, f: &Poly, g: &Poly) -> Result<Poly, PoissonError> {
        let (a, b) = (self.lift(f), self.lift(g));
        let comm = self.alg.commutator(&a, &b);
        let q_minus_one = QLaurent::from_pairs(&[(1, 1), (0, -1)]);
        let mut terms = BTreeMap::new();
        for (m, c) in comm.terms() {
            let v = c
                .exact_divide(&q_minus_one)
                .map_err(|_| PoissonError::NotDivisible(crate::expr::show(&self.alg, &comm)))?
                .at_one();
            if !v.is_zero() {
                terms.insert(m.exponents().to_vec(), v);
            }
        }
        Ok(CommPoly { terms })
    }

    /// The bivector `{u, v}` on coordinate functions.
    pub fn bivector(&self) -> Result<PolyBivector, PoissonError> {
        let pr = poly_ring(self.rank);
        let dim = 2 * self.rank;
        let mut b = PolyBivector::zero(self.rank);
        for u in 0..dim {
            for v in u + 1..dim {
                b.set(u, v, self.bracket(&pr.var(u), &pr.var(v))?);
            }
        }
        Ok(b)
    }
}

/// One coordinate pair: semiclassical bracket against the closed form.
#[derive(Debug, Clone, Serialize)]
pub struct PairComparison {
    pub pair: [String; 2],
    pub semiclassical: String,
    pub pi: String,
    /// `+`, `-`, `0` (both vanish) or `mismatch`.
    pub sign: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub schema: &'static str,
    pub rank: usize,
    pub pairs: Vec<PairComparison>,
    pub semiclassical_jacobi_failures: Vec<JacobiFailure>,
    pub pi_jacobi_failures: Vec<JacobiFailure>,
    pub semiclassical_determinant: String,
    pub pi_determinant: String,
    pub semiclassical_factors: Factorization,
    pub pi_factors: Factorization,
}

impl PoissonReport {
    /// Magnitudes agree pairwise, the semiclassical bivector is Poisson, and
    /// its degeneracy locus is cut out by the `1 + sum y_k z_k`.
    pub fn consistent(&self) -> bool {
        self.pairs.iter().all(|p| p.sign != "mismatch")
            && self.semiclassical_jacobi_failures.is_empty()
            && self.semiclassical_factors.complete
            && self.semiclassical_factors.factors.iter().all(|(_, e)| *e > 0)
    }
}

pub fn compare_with_pi(n: usize) -> Result<PoissonReport, PoissonError> {
    let pr = poly_ring(n);
    let names = coordinate_names(n);
    let semi = Semiclassical::new(n)?.bivector()?;
    let pi = pi_bivector(n);
    let dim = 2 * n;
    let mut pairs = Vec::new();
    for u in 0..dim {
        for v in u + 1..dim {
            let (s, p) = (semi.get(u, v), pi.get(u, v));
            let sign = if s.terms.is_empty() && p.terms.is_empty() {
                "0"
            } else if s == p {
                "+"
            } else if pr.add(&s, &p).terms.is_empty() {
                "-"
            } else {
                "mismatch"
            };
            pairs.push(PairComparison {
                pair: [names[u].clone(), names[v].clone()],
                semiclassical: format_poly(&s, &names),
                pi: format_poly(&p, &names),
                sign: sign.into(),
            });
        }
    }
    let sd = degeneracy_determinant(&semi);
    let pd = degeneracy_determinant(&pi);
    let factors = locus_factors(n);
    Ok(PoissonReport {
        schema: "qweyl-poisson/1",
        rank: n,
        pairs,
        semiclassical_jacobi_failures: jacobi_check(&semi),
        pi_jacobi_failures: jacobi_check(&pi),
        semiclassical_determinant: format_poly(&sd, &names),
        pi_determinant: format_poly(&pd, &names),
        semiclassical_factors: factor_against(&sd, &factors, &names),
        pi_factors: factor_against(&pd, &factors, &names),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        coordinate_names(n)
    }

    #[test]
    fn closed_form_entries() {
        let b = pi_bivector(1);
        assert_eq!(format_poly(&b.get(0, 1), &names(1)), "2*y1*z1 + 2");
        assert_eq!(format_poly(&b.get(1, 0), &names(1)), "-2*y1*z1 - 2");
        let b = pi_bivector(2);
        assert_eq!(format_poly(&b.get(1, 0), &names(2)), "y1*y2");
        assert_eq!(format_poly(&b.get(3, 2), &names(2)), "-z1*z2");
        assert!(b.get(2, 2).terms.is_empty());
    }

    #[test]
    fn brackets_of_coordinates() {
        let s = Semiclassical::new(2).unwrap();
        let pr = poly_ring(2);
        let show = |p: Poly| format_poly(&p, &names(2));
        assert_eq!(show(s.bracket(&pr.var(1), &pr.var(0)).unwrap()), "y1*y2");
        assert_eq!(show(s.bracket(&pr.var(3), &pr.var(0)).unwrap()), "y1*z2");
        let s1 = Semiclassical::new(1).unwrap();
        let p1 = poly_ring(1);
        assert_eq!(format_poly(&s1.bracket(&p1.var(1), &p1.var(0)).unwrap(), &names(1)), "2*y1*z1 + 2");
    }

    #[test]
    fn determinants() {
        let d = degeneracy_determinant(&pi_bivector(1));
        let f = factor_against(&d, &locus_factors(1), &names(1));
        assert_eq!(f.factors[0].1, 2);
        assert_eq!(f.cofactor, "4");
        assert!(degeneracy_determinant(&PolyBivector::zero(2)).terms.is_empty());
    }

    #[test]
    fn jacobi_negative_control() {
        let pr = poly_ring(2);
        let mut b = PolyBivector::zero(2);
        b.set(0, 2, pr.one());
        b.set(1, 3, pr.one());
        assert!(jacobi_check(&b).is_empty());
        let cubic = pr.mul(&pr.var(1), &pr.mul(&pr.var(1), &pr.var(1)));
        b.set(0, 1, pr.add(&cubic, &pr.var(2)));
        assert!(!jacobi_check(&b).is_empty());
    }

    #[test]
    fn semiclassical_matches_up_to_mixed_signs() {
        for n in 1..=3 {
            let r = compare_with_pi(n).unwrap();
            assert!(r.consistent(), "{r:#?}");
            // The closed form with its mixed signs is not Poisson once N > 1.
            assert_eq!(r.pi_jacobi_failures.is_empty(), n == 1);
            assert_eq!(r.semiclassical_determinant, r.pi_determinant);
            for p in &r.pairs {
                let mixed = p.pair[0].starts_with('y') && p.pair[1].starts_with('z');
                if p.sign != "0" {
                    assert_eq!(p.sign, if mixed { "-" } else { "+" }, "{p:?}");
                }
            }
        }
    }
}
