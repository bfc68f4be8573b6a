use crate::coefficients::CoeffRing;

use super::{Algebra, NCElement};
use crate::expr::{format_element, Style};

/// An overlap `g_k g_j g_i` whose two reductions disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub generators: [String; 3],
    /// Rewriting `g_k g_j` first, minus rewriting `g_j g_i` first.
    pub difference: String,
}

/// Reduce every overlap `g_k g_j g_i` (`k > j > i`) both ways and return the
/// triples where the results differ. An empty list means the rules are
/// confluent.
pub fn check_confluence<R: CoeffRing>(alg: &Algebra<R>) -> Vec<Overlap> {
    let pres = alg.presentation();
    let n = alg.ngens();
    let ring = alg.ring();
    let mut out = Vec::new();
    for k in 0..n {
        for j in 0..k {
            for i in 0..j {
                let left_first = alg.lift(pres.rule(k, j).expect("complete rules"));
                let right_first = alg.lift(pres.rule(j, i).expect("complete rules"));
                let a = alg.mul(&left_first, &alg.generator(i));
                let b = alg.mul(&alg.generator(k), &right_first);
                if a != b {
                    let d: NCElement<R::Elem> = a.sub(ring, &b);
                    let names = pres.generators();
                    out.push(Overlap {
                        generators: [names[k].clone(), names[j].clone(), names[i].clone()],
                        difference: format_element(ring, names, &d, Style::Ascii),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{GenericQ, QLaurent};
    use crate::engine::Monomial;
    use crate::presentations::{dq_cn, dq_gl2_plus, oq_gl2_plus};

    #[test]
    fn shipped_rule_sets_are_confluent() {
        for n in 1..=3 {
            assert!(check_confluence(&Algebra::new(dq_cn(n).unwrap(), GenericQ)).is_empty(), "N = {n}");
        }
        assert!(check_confluence(&Algebra::new(oq_gl2_plus().unwrap(), GenericQ)).is_empty());
        assert!(check_confluence(&Algebra::new(dq_gl2_plus().unwrap(), GenericQ)).is_empty());
    }

    #[test]
    fn dropping_a_correction_term_breaks_confluence() {
        let pres = dq_cn(2).unwrap();
        // d2 x2 -> q^2 x2 d2 + (q^2 - 1), forgetting the x1 d1 part.
        let mut rhs = NCElement::term(Monomial::from_exponents(&[0, 1, 0, 1]), QLaurent::q_pow(2));
        rhs.add_term(&GenericQ, Monomial::one(4), &(&QLaurent::q_pow(2) - &QLaurent::one()));
        let broken = pres.with_rule(3, 1, rhs);
        let bad = check_confluence(&Algebra::new(broken, GenericQ));
        assert!(!bad.is_empty());
    }
}
