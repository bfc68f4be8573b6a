use std::collections::BTreeMap;

use crate::coefficients::{GenericQ, QLaurent};
use crate::engine::{Monomial, NCElement, Presentation};

use super::rmatrix::{expand_matrix_relation, relations_to_rules, FreeElem};
use super::PresentationError;

pub const REFLECTION_EQUATION: &str = "R21 L1 R L2 = L2 R21 L1 R";
pub const X_RELATION: &str = "R21 X1 R X2 = X2 R21 X1 R";
pub const D_RELATION: &str = "R21 D1 R D2 = D2 R21 D1 R";
pub const CROSS_RELATION: &str = "R21 D1 R X2 = X2 R21 D1 R21^-1";

/// `det_q = m00 m11 - q^2 m01 m10` for a matrix of generator indices.
pub fn quantum_det(ngens: usize, m: [[usize; 2]; 2]) -> NCElement<QLaurent> {
    let mut e = NCElement::zero();
    let mut t = Monomial::one(ngens);
    t.set_exp(m[0][0], 1);
    t.set_exp(m[1][1], 1);
    e.add_term(&GenericQ, t, &QLaurent::one());
    let mut t = Monomial::one(ngens);
    t.set_exp(m[0][1], 1);
    t.set_exp(m[1][0], 1);
    e.add_term(&GenericQ, t, &QLaurent::from_pairs(&[(2, -1)]));
    e
}

/// `tr_q = m00 + q^{-2} m11`.
pub fn quantum_trace(ngens: usize, m: [[usize; 2]; 2]) -> NCElement<QLaurent> {
    let mut e = NCElement::term(Monomial::generator(ngens, m[0][0], 1), QLaurent::one());
    e.add_term(&GenericQ, Monomial::generator(ngens, m[1][1], 1), &QLaurent::q_pow(-2));
    e
}

fn symbols(pairs: &[(&str, [[usize; 2]; 2])]) -> BTreeMap<String, [[usize; 2]; 2]> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub const L: [[usize; 2]; 2] = [[0, 1], [2, 3]];
pub const X: [[usize; 2]; 2] = [[0, 1], [2, 3]];
pub const D: [[usize; 2]; 2] = [[4, 5], [6, 7]];

/// Relations of the reflection equation algebra, `L = [a b; c d]`.
pub fn oq_relations() -> Result<Vec<FreeElem>, PresentationError> {
    expand_matrix_relation(REFLECTION_EQUATION, &symbols(&[("L", L)]))
}

/// `O_q^+(GL_2)`: generators `a < b < c < d`, rules derived from the
/// reflection equation, named `detq` and `trq`.
pub fn oq_gl2_plus() -> Result<Presentation, PresentationError> {
    let rules = relations_to_rules(&oq_relations()?, 4)?;
    let gens = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    Ok(Presentation::new("oq_gl2", gens, rules)?
        .with_grading(vec![0, 1, -1, 0])?
        .with_named("detq", quantum_det(4, L))
        .with_named("trq", quantum_trace(4, L)))
}

/// `O_q^+(GL_2)` with `detq` and `d` registered as denominators.
pub fn oq_gl2() -> Result<Presentation, PresentationError> {
    let p = oq_gl2_plus()?;
    let det = quantum_det(4, L);
    Ok(p
        .with_commuter("detq", det, vec![0; 4])?
        .with_commuter("d", NCElement::term(Monomial::generator(4, 3, 1), QLaurent::one()), vec![0, 2, -2, 0])?)
}

/// All relations of `D_q^+(GL_2)` over `x11 < x12 < x21 < x22 < d11 < d12 < d21 < d22`.
pub fn dq_gl2_relations() -> Result<Vec<FreeElem>, PresentationError> {
    let sym = symbols(&[("X", X), ("D", D)]);
    let mut rels = expand_matrix_relation(X_RELATION, &sym)?;
    rels.extend(expand_matrix_relation(D_RELATION, &sym)?);
    rels.extend(expand_matrix_relation(CROSS_RELATION, &sym)?);
    Ok(rels)
}

pub fn gl2_generator_names() -> Vec<String> {
    ["x11", "x12", "x21", "x22", "d11", "d12", "d21", "d22"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// `D_q^+(GL_2)` with named `detqX`, `detqD`.
pub fn dq_gl2_plus() -> Result<Presentation, PresentationError> {
    let rules = relations_to_rules(&dq_gl2_relations()?, 8)?;
    Ok(Presentation::new("dq_gl2", gl2_generator_names(), rules)?
        .with_grading(vec![0, 1, -1, 0, 0, 1, -1, 0])?
        .with_grading(vec![1, 1, 1, 1, 0, 0, 0, 0])?
        .with_grading(vec![0, 0, 0, 0, 1, 1, 1, 1])?
        .with_named("detqX", quantum_det(8, X))
        .with_named("detqD", quantum_det(8, D)))
}

/// `D_q^+(GL_2)` with both quantum determinants registered as denominators.
pub fn dq_gl2() -> Result<Presentation, PresentationError> {
    let p = dq_gl2_plus()?;
    Ok(p
        .with_commuter("detqX", quantum_det(8, X), vec![0, 0, 0, 0, 2, 2, 2, 2])?
        .with_commuter("detqD", quantum_det(8, D), vec![-2, -2, -2, -2, 0, 0, 0, 0])?)
}

/// Embedding of `O_q(GL_2)` into `D_q(GL_2)` by `L -> X` (`offset = 0`) or
/// `L -> D` (`offset = 4`).
pub fn embed_oq<E: Clone + PartialEq>(e: &NCElement<E>, ring: &impl crate::coefficients::CoeffRing<Elem = E>, offset: usize) -> NCElement<E> {
    e.relabel(ring, 8, &[offset, offset + 1, offset + 2, offset + 3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Algebra;

    fn lq(p: &[(i64, i64)]) -> QLaurent {
        QLaurent::from_pairs(p)
    }

    #[test]
    fn reflection_equation_gives_the_six_relations() {
        let p = oq_gl2_plus().unwrap();
        assert_eq!(p.rules().len(), 6);
        let alg = Algebra::new(p, GenericQ);
        let m = |e: &[u32]| alg.monomial(Monomial::from_exponents(e));
        // cb = bc + (1 - q^-2)(ad - d^2)
        let want = alg.add(
            &m(&[0, 1, 1, 0]),
            &alg.scale(&alg.sub(&m(&[1, 0, 0, 1]), &m(&[0, 0, 0, 2])), &lq(&[(0, 1), (-2, -1)])),
        );
        assert_eq!(alg.normal_form(&[2, 1]), want);
        // ba = ab + (1 - q^-2) bd
        let want = alg.add(&m(&[1, 1, 0, 0]), &alg.scale(&m(&[0, 1, 0, 1]), &lq(&[(0, 1), (-2, -1)])));
        assert_eq!(alg.normal_form(&[1, 0]), want);
        // ca = ac + (q^-2 - 1) dc
        let dc = alg.normal_form(&[3, 2]);
        assert_eq!(dc, alg.scale(&m(&[0, 0, 1, 1]), &lq(&[(-2, 1)])));
        let want = alg.add(&m(&[1, 0, 1, 0]), &alg.scale(&dc, &lq(&[(-2, 1), (0, -1)])));
        assert_eq!(alg.normal_form(&[2, 0]), want);
        assert_eq!(alg.normal_form(&[3, 0]), m(&[1, 0, 0, 1]));
        assert_eq!(alg.normal_form(&[3, 1]), alg.scale(&m(&[0, 1, 0, 1]), &lq(&[(2, 1)])));
    }

    #[test]
    fn heisenberg_double_rule_counts() {
        let rels = dq_gl2_relations().unwrap();
        let cross: Vec<_> = rels[32..].to_vec();
        assert_eq!(relations_to_rules(&cross, 8).unwrap().len(), 16);
        let p = dq_gl2_plus().unwrap();
        assert_eq!(p.rules().len(), 28);
        // The X-X subsystem is the reflection equation system renamed.
        let oq = oq_gl2_plus().unwrap();
        for (&(j, i), rhs) in oq.rules() {
            assert_eq!(p.rule(j, i).unwrap(), &embed_oq(rhs, &GenericQ, 0));
            assert_eq!(p.rule(j + 4, i + 4).unwrap(), &embed_oq(rhs, &GenericQ, 4));
        }
    }

    #[test]
    fn localized_variants_register() {
        assert_eq!(oq_gl2().unwrap().commuters().len(), 2);
        assert_eq!(dq_gl2().unwrap().commuters().len(), 2);
    }
}
