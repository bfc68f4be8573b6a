use std::collections::BTreeMap;

use crate::coefficients::{CoeffRing, GenericQ, QLaurent};
use crate::engine::{Monomial, NCElement, Presentation};

use super::PresentationError;

fn lq(pairs: &[(i64, i64)]) -> QLaurent {
    QLaurent::from_pairs(pairs)
}

/// Index of `x_i` (1-based `i`) in the `D_q(C^N)` generator order.
pub fn x_index(_n: usize, i: usize) -> usize {
    i - 1
}

/// Index of `d_i` (1-based `i`).
pub fn d_index(n: usize, i: usize) -> usize {
    n + i - 1
}

/// `beta_i = 1 + sum_{j <= i} x_j d_j` as a Laurent element over `2n` generators.
pub fn beta(n: usize, i: usize) -> NCElement<QLaurent> {
    let mut e = NCElement::one(&GenericQ, 2 * n);
    for j in 1..=i {
        let mut m = Monomial::one(2 * n);
        m.set_exp(x_index(n, j), 1);
        m.set_exp(d_index(n, j), 1);
        e.add_term(&GenericQ, m, &QLaurent::one());
    }
    e
}

/// Scalar-commutation weights of `beta_i`: `+2` on `x_j`, `-2` on `d_j` for `j <= i`.
pub fn beta_weights(n: usize, i: usize, scale: i64) -> Vec<i64> {
    let mut w = vec![0; 2 * n];
    for j in 1..=i {
        w[x_index(n, j)] = scale;
        w[d_index(n, j)] = -scale;
    }
    w
}

fn weyl_rules(n: usize) -> BTreeMap<(usize, usize), NCElement<QLaurent>> {
    let g = 2 * n;
    let mut rules = BTreeMap::new();
    let pair = |lo: usize, hi: usize| {
        let mut m = Monomial::one(g);
        m.set_exp(lo, m.exp(lo) + 1);
        m.set_exp(hi, m.exp(hi) + 1);
        m
    };
    for j in 1..=n {
        for i in 1..j {
            let (xi, xj) = (x_index(n, i), x_index(n, j));
            rules.insert((xj, xi), NCElement::term(pair(xi, xj), lq(&[(1, 1)])));
            let (di, dj) = (d_index(n, i), d_index(n, j));
            rules.insert((dj, di), NCElement::term(pair(di, dj), lq(&[(-1, 1)])));
        }
    }
    for j in 1..=n {
        for i in 1..=n {
            let (dj, xi) = (d_index(n, j), x_index(n, i));
            if i != j {
                rules.insert((dj, xi), NCElement::term(pair(xi, dj), lq(&[(1, 1)])));
            } else {
                let mut rhs = NCElement::term(pair(xi, dj), lq(&[(2, 1)]));
                rhs.add_scaled(&GenericQ, &beta(n, i - 1), &lq(&[(2, 1), (0, -1)]));
                rules.insert((dj, xi), rhs);
            }
        }
    }
    rules
}

fn weyl_generators(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|i| format!("d{i}")))
        .collect()
}

/// The algebra of `q`-difference operators on `C^N`, generators
/// `x1..xN, d1..dN`, with the `Z^N` grading `x_i -> e_i`, `d_i -> -e_i`,
/// named elements `beta_0..beta_N` and every `beta_i` (`i >= 1`)
/// registered as a scalar commuter.
pub fn dq_cn(n: usize) -> Result<Presentation, PresentationError> {
    let mut p = Presentation::new(format!("dq{n}"), weyl_generators(n), weyl_rules(n))?;
    for k in 1..=n {
        let mut w = vec![0; 2 * n];
        w[x_index(n, k)] = 1;
        w[d_index(n, k)] = -1;
        p = p.with_grading(w)?;
    }
    for i in 0..=n {
        p = p.with_named(format!("beta_{i}"), beta(n, i));
    }
    for i in 1..=n {
        p = p.with_commuter(format!("beta_{i}"), beta(n, i), beta_weights(n, i, 2))?;
    }
    Ok(p)
}

/// `dq_cn` extended by formal square roots `alpha_i` of `beta_i`.
pub fn dq_cn_with_roots(n: usize) -> Result<Presentation, PresentationError> {
    let mut p = dq_cn(n)?;
    for i in 1..=n {
        p = p.with_square_root(format!("alpha_{i}"), &format!("beta_{i}"), beta_weights(n, i, 1))?;
    }
    Ok(p)
}

/// Quantum affine space: generators `x1..xN` with `x_j x_i = q x_i x_j`.
pub fn oq_cn(n: usize) -> Result<Presentation, PresentationError> {
    let mut rules = BTreeMap::new();
    for j in 0..n {
        for i in 0..j {
            let mut m = Monomial::one(n);
            m.set_exp(i, 1);
            m.set_exp(j, 1);
            rules.insert((j, i), NCElement::term(m, lq(&[(1, 1)])));
        }
    }
    let gens = (1..=n).map(|i| format!("x{i}")).collect();
    Ok(Presentation::new(format!("oq{n}"), gens, rules)?)
}

/// The q-difference action of a `D_q(C^N)` element on a polynomial of
/// quantum affine space (both written as PBW elements).
pub fn act<R: CoeffRing>(
    ring: &R,
    n: usize,
    op: &NCElement<R::Elem>,
    poly: &NCElement<R::Elem>,
) -> NCElement<R::Elem> {
    let mut out = NCElement::zero();
    for (m, c) in op.terms() {
        // Rightmost factor acts first.
        let mut cur = poly.clone();
        for g in m.word().collect::<Vec<_>>().into_iter().rev() {
            cur = act_generator(ring, n, g, &cur);
        }
        out.add_scaled(ring, &cur, c);
    }
    out
}

fn act_generator<R: CoeffRing>(ring: &R, n: usize, g: usize, p: &NCElement<R::Elem>) -> NCElement<R::Elem> {
    let mut out = NCElement::zero();
    for (m, c) in p.terms() {
        let e = m.exponents();
        if g < n {
            let before: u32 = e[..g].iter().sum();
            out.add_term(ring, m.with_bumped(g, 1), &ring.mul(c, &ring.q_pow(before as i64)));
        } else {
            let i = g - n;
            if e[i] == 0 {
                continue;
            }
            let before: u32 = e[..i].iter().sum();
            let f = QLaurent::from_pairs(&[(before as i64 + 2 * e[i] as i64, 1), (before as i64, -1)]);
            let mut m2 = m.clone();
            m2.set_exp(i, e[i] - 1);
            out.add_term(ring, m2, &ring.mul(c, &ring.from_laurent(&f)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Algebra;

    #[test]
    fn small_cases() {
        let p0 = dq_cn(0).unwrap();
        assert_eq!(p0.ngens(), 0);
        let p1 = dq_cn(1).unwrap();
        assert_eq!(p1.rules().len(), 1);
        let p2 = dq_cn(2).unwrap();
        let sub = p2.restrict("dq1", &[0, 2]).unwrap();
        assert_eq!(sub.rules(), p1.rules());
    }

    #[test]
    fn d2_x2_relation() {
        let alg = Algebra::new(dq_cn(2).unwrap(), GenericQ);
        let lhs = alg.normal_form(&[3, 1]);
        let mut rhs = alg.scale(&alg.normal_form(&[1, 3]), &lq(&[(2, 1)]));
        rhs = alg.add(&rhs, &alg.scale(&alg.lift(&beta(2, 1)), &lq(&[(2, 1), (0, -1)])));
        assert_eq!(lhs, rhs);
        assert_eq!(alg.normal_form(&[1, 0]), alg.scale(&alg.normal_form(&[0, 1]), &lq(&[(1, 1)])));
    }

    #[test]
    fn action_is_a_representation() {
        let n = 2;
        let ring = GenericQ;
        let alg = Algebra::new(dq_cn(n).unwrap(), ring);
        let polys: Vec<NCElement<QLaurent>> = [[0, 0], [1, 0], [2, 3], [4, 1]]
            .iter()
            .map(|e| NCElement::term(Monomial::from_exponents(e), QLaurent::one()))
            .collect();
        for g in 0..4 {
            for h in 0..4 {
                let prod = alg.normal_form(&[g, h]);
                for p in &polys {
                    let one_step = act(&ring, n, &prod, p);
                    let two_steps = act(&ring, n, &alg.generator(g), &act(&ring, n, &alg.generator(h), p));
                    assert_eq!(one_step, two_steps, "g={g} h={h}");
                }
            }
        }
        // d1 . x1^3 = (q^6 - 1) x1^2
        let p = NCElement::term(Monomial::from_exponents(&[3, 0]), QLaurent::one());
        let got = act(&ring, n, &alg.generator(2), &p);
        let want = NCElement::term(Monomial::from_exponents(&[2, 0]), lq(&[(6, 1), (0, -1)]));
        assert_eq!(got, want);
        // d2 . x1 x2 = q (q^2 - 1) x1
        let p = NCElement::term(Monomial::from_exponents(&[1, 1]), QLaurent::one());
        let got = act(&ring, n, &alg.generator(3), &p);
        let want = NCElement::term(Monomial::from_exponents(&[1, 0]), lq(&[(3, 1), (1, -1)]));
        assert_eq!(got, want);
    }
}
