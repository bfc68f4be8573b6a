//! Centers at a root of unity: centrality checks, powers of the Euler
//! operators, the correction element `z` of the reflection equation algebra
//! and its images `v`, `w`, and brute-force centralizers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coefficients::{CoeffError, CoeffField, CoeffRing, RootOfUnity};
use crate::engine::{Algebra, EngineError, Monomial, NCElement};
use crate::expr::show;
use crate::linalg::{Echelon, SparseRow};
use crate::presentations::{
    beta, d_index, dq_gl2, embed_oq, oq_gl2, quantum_det, x_index, PresentationError, D, X,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CenterError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("{0} is not divisible by {1} on the right")]
    NotDivisible(String, String),
    #[error("{0} is not central")]
    NotCentral(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct CentralityReport {
    pub element: String,
    /// `(generator, [e, generator])` in normal form.
    pub commutators: Vec<(String, String)>,
    pub central: bool,
}

/// Commutators of `e` with every generator, computed in parallel.
pub fn centrality_report<R: CoeffRing>(alg: &Algebra<R>, e: &NCElement<R::Elem>) -> CentralityReport {
    let names = alg.presentation().generators();
    let commutators: Vec<(String, String)> = (0..alg.ngens())
        .into_par_iter()
        .map(|g| (names[g].clone(), show(alg, &alg.commutator(e, &alg.generator(g)))))
        .collect();
    let central = commutators.iter().all(|(_, c)| c == "0");
    CentralityReport {
        element: show(alg, e),
        commutators,
        central,
    }
}

/// `x_i^l d_i^l` in `D_q(C^N)`.
fn xd_power<R: CoeffRing>(alg: &Algebra<R>, n: usize, i: usize, l: u32) -> NCElement<R::Elem> {
    alg.normal_form_powers(&[(x_index(n, i), l), (d_index(n, i), l)])
}

/// Check `beta_i^l = 1 + sum_{j <= i} x_j^l d_j^l` for `i = 0..=N`; `alg` must
/// be `D_q(C^N)`.
pub fn beta_power_identity<R: CoeffRing>(alg: &Algebra<R>, n: usize, l: u32) -> Vec<(usize, bool)> {
    (0..=n)
        .into_par_iter()
        .map(|i| {
            let lhs = alg.pow(&alg.lift(&beta(n, i)), l);
            let mut rhs = alg.one();
            for j in 1..=i {
                rhs = alg.add(&rhs, &xd_power(alg, n, j, l));
            }
            (i, lhs == rhs)
        })
        .collect()
}

/// The coefficients `c_k` in
/// `(x_N d_N + beta_{N-1})^n = sum_k c_k x_N^k d_N^k`, with `c_k` in
/// `D_q(C^{N-1})`, computed from the recursion and by expanding.
#[derive(Debug, Clone)]
pub struct CTable<E> {
    pub power: u32,
    pub by_recursion: Vec<NCElement<E>>,
    pub by_expansion: Vec<NCElement<E>>,
    /// Expansion terms whose `x_N` and `d_N` exponents differ.
    pub stray_terms: usize,
}

impl<E: Clone + PartialEq> CTable<E> {
    pub fn agree(&self) -> bool {
        self.stray_terms == 0 && self.by_recursion == self.by_expansion
    }

    /// Whether `c_k = 0` for `0 < k < n`.
    pub fn middle_vanishes(&self) -> bool {
        let n = self.power as usize;
        (1..n).all(|k| self.by_recursion[k].is_zero())
    }
}

pub fn c_coefficients<R: CoeffRing>(alg: &Algebra<R>, n: usize, power: u32) -> CTable<R::Elem> {
    assert!(n >= 1, "needs at least one pair of generators");
    let ring = alg.ring();
    let b = alg.lift(&beta(n, n - 1));
    // c^{(1)} = [beta, 1]
    let mut table = vec![b.clone(), alg.one()];
    for step in 2..=power {
        let mut next = Vec::with_capacity(step as usize + 1);
        for k in 0..=step as usize {
            let mut c = alg.zero();
            if k < table.len() {
                let t = alg.mul(&table[k], &b);
                c = alg.add(&c, &alg.scale(&t, &ring.q_pow(2 * k as i64)));
            }
            if k >= 1 {
                c = alg.add(&c, &alg.scale(&table[k - 1], &ring.q_pow(2 * (k as i64 - 1))));
            }
            next.push(c);
        }
        table = next;
    }
    let xd = alg.add(&alg.normal_form(&[x_index(n, n), d_index(n, n)]), &b);
    let expanded = alg.pow(&xd, power);
    let mut by_expansion = vec![NCElement::zero(); power as usize + 1];
    let mut stray_terms = 0;
    for (m, c) in expanded.terms() {
        let (kx, kd) = (m.exp(x_index(n, n)), m.exp(d_index(n, n)));
        if kx != kd || kx > power {
            stray_terms += 1;
            continue;
        }
        let dbar: u32 = (1..n).map(|j| m.exp(d_index(n, j))).sum();
        let mut rest = m.clone();
        rest.set_exp(x_index(n, n), 0);
        rest.set_exp(d_index(n, n), 0);
        let coeff = ring.mul(c, &ring.q_pow(-(kx as i64) * dbar as i64));
        by_expansion[kx as usize].add_term(ring, rest, &coeff);
    }
    CTable {
        power,
        by_recursion: table,
        by_expansion,
        stray_terms,
    }
}

/// `O_q(GL_2)` at a primitive `l`-th root of unity.
pub fn oq_root_algebra(l: u32) -> Result<Algebra<RootOfUnity>, CenterError> {
    Ok(Algebra::new(oq_gl2()?, RootOfUnity::new(l)?))
}

/// `z = (det_q^l + b^l c^l) d^{-l}` in `alg = O_q(GL_2)` at a root of unity.
/// The quotient must be exact; centrality is asserted.
pub fn compute_z<R: CoeffRing>(alg: &Algebra<R>, l: u32) -> Result<NCElement<R::Elem>, CenterError> {
    let det = alg.named("detq").expect("detq is named");
    let num = alg.add(
        &alg.pow(&det, l),
        &alg.mul(&alg.pow(&alg.generator(1), l), &alg.pow(&alg.generator(2), l)),
    );
    let frac = alg.ore_mul(&alg.fraction(num.clone()), &alg.commuter_inverse("d", l)?)?;
    let z = frac
        .as_element()
        .cloned()
        .ok_or_else(|| CenterError::NotDivisible(show(alg, &num), format!("d^{l}")))?;
    if !alg.is_central(&z) {
        return Err(CenterError::NotCentral(show(alg, &z)));
    }
    Ok(z)
}

/// The images `v`, `w` of `z` under `L -> X` and `L -> D`, in `D_q(GL_2)` at
/// the same root of unity.
#[derive(Debug, Clone)]
pub struct VW<E> {
    pub v: NCElement<E>,
    pub w: NCElement<E>,
    /// `det_q(X)^l = v x22^l - x12^l x21^l`
    pub v_identity: bool,
    /// `det_q(D)^l = w d22^l - d12^l d21^l`
    pub w_identity: bool,
    pub v_central: bool,
    pub w_central: bool,
}

pub fn compute_v_w(l: u32) -> Result<(Algebra<RootOfUnity>, VW<crate::coefficients::CycNumber>), CenterError> {
    let oq = oq_root_algebra(l)?;
    let z = compute_z(&oq, l)?;
    let ring = RootOfUnity::new(l)?;
    let alg = Algebra::new(dq_gl2()?, ring.clone());
    let v = embed_oq(&z, &ring, 0);
    let w = embed_oq(&z, &ring, 4);
    let check = |mat: [[usize; 2]; 2], image: &NCElement<_>| {
        let det = alg.lift(&quantum_det(8, mat));
        let lhs = alg.pow(&det, l);
        let p = |g: usize| alg.pow(&alg.generator(g), l);
        let rhs = alg.sub(&alg.mul(image, &p(mat[1][1])), &alg.mul(&p(mat[0][1]), &p(mat[1][0])));
        lhs == rhs
    };
    let vw = VW {
        v_identity: check(X, &v),
        w_identity: check(D, &w),
        v_central: alg.is_central(&v),
        w_central: alg.is_central(&w),
        v,
        w,
    };
    Ok((alg, vw))
}

/// All monomials of total degree `<= bound` in `ngens` generators.
pub fn monomials_up_to(ngens: usize, bound: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(ngens)];
    let mut frontier = out.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for m in &frontier {
            // Only bump generators at or after the last one present, so each
            // monomial is produced once.
            let start = m.last_gen().unwrap_or(0);
            for g in start..ngens {
                next.push(m.with_bumped(g, 1));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Basis of the central elements spanned by monomials of degree `<= bound`.
///
/// Monomials are split by the presentation's gradings; components where some
/// scalar commuter acts by a nontrivial root of unity are skipped, since a
/// central element has no support there.
pub fn centralizer_basis<F: CoeffField>(alg: &Algebra<F>, bound: u32, level: u32) -> Vec<NCElement<F::Elem>> {
    let pres = alg.presentation();
    let ring = alg.ring();
    let mut components: BTreeMap<Vec<i64>, Vec<Monomial>> = BTreeMap::new();
    for m in monomials_up_to(alg.ngens(), bound) {
        let admissible = pres
            .commuters()
            .iter()
            .filter(|c| c.square_root_of.is_none())
            .all(|c| m.weight(&c.weights).rem_euclid(level as i64) == 0);
        if !admissible {
            continue;
        }
        let key: Vec<i64> = pres.gradings().iter().map(|w| m.weight(w)).collect();
        components.entry(key).or_default().push(m);
    }
    let per_component: Vec<Vec<NCElement<F::Elem>>> = components
        .into_par_iter()
        .map(|(_, monos)| {
            let mut rows: BTreeMap<(usize, Monomial), SparseRow<F::Elem>> = BTreeMap::new();
            for (col, m) in monos.iter().enumerate() {
                let e = alg.monomial(m.clone());
                for g in 0..alg.ngens() {
                    let c = alg.commutator(&e, &alg.generator(g));
                    for (out, v) in c.terms() {
                        rows.entry((g, out.clone())).or_default().insert(col, v.clone());
                    }
                }
            }
            let mut ech = Echelon::new(ring.clone());
            for (_, r) in rows {
                ech.insert(r);
            }
            ech.nullspace(monos.len())
                .into_iter()
                .map(|v| {
                    let mut e = NCElement::zero();
                    for (col, c) in v {
                        e.add_term(ring, monos[col].clone(), &c);
                    }
                    e
                })
                .collect()
        })
        .collect();
    per_component.into_iter().flatten().collect()
}

/// Rank of a family of elements, as vectors in the PBW basis.
pub fn span_rank<F: CoeffField>(ring: &F, elems: &[NCElement<F::Elem>]) -> usize {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut ech = Echelon::new(ring.clone());
    for e in elems {
        let mut row = SparseRow::new();
        for (m, c) in e.terms() {
            let n = index.len();
            let col = *index.entry(m.clone()).or_insert(n);
            row.insert(col, c.clone());
        }
        ech.insert(row);
    }
    ech.rank()
}

/// Whether two families span the same subspace.
pub fn same_span<F: CoeffField>(ring: &F, a: &[NCElement<F::Elem>], b: &[NCElement<F::Elem>]) -> bool {
    let ra = span_rank(ring, a);
    let rb = span_rank(ring, b);
    let all: Vec<_> = a.iter().chain(b).cloned().collect();
    ra == rb && span_rank(ring, &all) == ra
}

/// Products of `gens` (already central) of total degree `<= bound`, i.e. the
/// degree-truncated subalgebra they generate.
pub fn products_up_to<R: CoeffRing>(alg: &Algebra<R>, gens: &[NCElement<R::Elem>], bound: u32) -> Vec<NCElement<R::Elem>> {
    let degs: Vec<u32> = gens.iter().map(|g| g.max_degree().unwrap_or(0)).collect();
    let mut out = vec![alg.one()];
    let mut stack: Vec<(usize, NCElement<R::Elem>, u32)> = vec![(0, alg.one(), 0)];
    while let Some((start, e, d)) = stack.pop() {
        for (i, g) in gens.iter().enumerate().skip(start) {
            if degs[i] == 0 || d + degs[i] > bound {
                continue;
            }
            let p = alg.mul(&e, g);
            out.push(p.clone());
            stack.push((i, p, d + degs[i]));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::GenericQ;
    use crate::expr::parse_element;
    use crate::presentations::dq_cn;

    fn dq_root(n: usize, l: u32) -> Algebra<RootOfUnity> {
        Algebra::new(dq_cn(n).unwrap(), RootOfUnity::new(l).unwrap())
    }

    #[test]
    fn x_power_is_central_only_at_level() {
        let alg = dq_root(2, 3);
        assert!(centrality_report(&alg, &parse_element(&alg, "x1^3").unwrap()).central);
        let r = centrality_report(&alg, &parse_element(&alg, "x1").unwrap());
        assert!(!r.central);
        assert_eq!(r.commutators.len(), 4);
    }

    #[test]
    fn beta_powers() {
        for (n, l) in [(0, 3), (1, 3), (2, 3)] {
            assert!(beta_power_identity(&dq_root(n, l), n, l).iter().all(|(_, ok)| *ok));
        }
        // Generic q: the identity fails beyond i = 0.
        let alg = Algebra::new(dq_cn(1).unwrap(), GenericQ);
        assert_eq!(beta_power_identity(&alg, 1, 3), vec![(0, true), (1, false)]);
    }

    #[test]
    fn c_table_two_ways() {
        let alg = Algebra::new(dq_cn(2).unwrap(), GenericQ);
        for n in 1..=4 {
            let t = c_coefficients(&alg, 2, n);
            assert!(t.agree(), "n = {n}");
            assert_eq!(t.by_recursion[n as usize], alg.scalar(crate::coefficients::QLaurent::q_pow((n * (n - 1)) as i64)));
        }
        let root = dq_root(2, 3);
        let t = c_coefficients(&root, 2, 3);
        assert!(t.agree() && t.middle_vanishes());
        assert!(!c_coefficients(&alg, 2, 3).middle_vanishes());
    }

    #[test]
    fn z_at_three() {
        let alg = oq_root_algebra(3).unwrap();
        let z = compute_z(&alg, 3).unwrap();
        assert_eq!(show(&alg, &z), "a^3 + 3*a*b*c + 3*q*b*c*d");
    }

    #[test]
    fn centralizer_of_weyl_one() {
        let alg = dq_root(1, 3);
        let basis = centralizer_basis(&alg, 6, 3);
        let gens: Vec<_> = ["x1^3", "d1^3"].iter().map(|s| parse_element(&alg, s).unwrap()).collect();
        let expected = products_up_to(&alg, &gens, 6);
        // 1, x^3, d^3, x^6, x^3 d^3, d^6
        assert_eq!(expected.len(), 6);
        assert_eq!(basis.len(), 6);
        assert!(same_span(alg.ring(), &basis, &expected));
        assert_eq!(centralizer_basis(&alg, 0, 3).len(), 1);
    }

    #[test]
    fn z_at_five() {
        let alg = oq_root_algebra(5).unwrap();
        let z = compute_z(&alg, 5).unwrap();
        assert_eq!(
            show(&alg, &z),
            "a^5 + 5*a^3*b*c + 5*(2*q^3 - q)*a^2*b*c*d + 5*a*b^2*c^2 + 5*(2*q^3 + 3*q^2 + 4*q + 2)*a*b*c*d^2 \
             + 5*q^3*b^2*c^2*d - 5*(q^3 + 2*q^2 + q)*b*c*d^3"
        );
    }

    #[test]
    fn v_and_w_at_three() {
        let (alg, vw) = compute_v_w(3).unwrap();
        assert!(vw.v_identity && vw.w_identity && vw.v_central && vw.w_central);
        assert_eq!(show(&alg, &vw.v), "x11^3 + 3*x11*x12*x21 + 3*q*x12*x21*x22");
    }

    #[test]
    fn reflection_algebra_centralizer() {
        let alg = oq_root_algebra(3).unwrap();
        let basis = centralizer_basis(&alg, 3, 3);
        let z = compute_z(&alg, 3).unwrap();
        let el = |s: &str| parse_element(&alg, s).unwrap();
        for e in [el("b^3"), el("c^3"), el("d^3"), el("detq"), z.clone()] {
            assert!(same_span(alg.ring(), &basis, &[basis.clone(), vec![e]].concat()));
        }
        let with_a3 = [basis.clone(), vec![el("a^3")]].concat();
        assert_eq!(span_rank(alg.ring(), &with_a3), basis.len() + 1);
        // Leading term a^3 does not pin z down: z - trq^3 is central too.
        let diff = alg.sub(&z, &alg.pow(&el("trq"), 3));
        assert!(!diff.is_zero() && alg.is_central(&diff));
    }
}
