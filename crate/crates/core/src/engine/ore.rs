use std::collections::BTreeMap;

use crate::coefficients::CoeffRing;

use super::{Algebra, EngineError, Monomial, NCElement};

/// Ordered product `s_0^{a_0} s_1^{a_1} ...` of registered scalar
/// commuters, keyed by registration index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Denominator(BTreeMap<usize, u32>);

impl Denominator {
    pub fn one() -> Self {
        Denominator(BTreeMap::new())
    }

    pub fn power(commuter: usize, e: u32) -> Self {
        let mut d = Denominator::one();
        if e > 0 {
            d.0.insert(commuter, e);
        }
        d
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, commuter: usize) -> u32 {
        self.0.get(&commuter).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&k, &e)| (k, e))
    }

    fn seq(&self) -> Vec<(usize, u32)> {
        self.factors().collect()
    }

    fn from_seq(seq: &[(usize, u32)]) -> Self {
        let mut d = Denominator::one();
        for &(k, e) in seq {
            if e > 0 {
                *d.0.entry(k).or_insert(0) += e;
            }
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OreOp {
    Add,
    Sub,
    Mul,
}

/// Right fraction `numerator * denominator^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreFraction<E> {
    pub numerator: NCElement<E>,
    pub denominator: Denominator,
}

impl<E: Clone + PartialEq> OreFraction<E> {
    pub fn from_element(e: NCElement<E>) -> Self {
        OreFraction {
            numerator: e,
            denominator: Denominator::one(),
        }
    }

    /// The element itself when the denominator is trivial.
    pub fn as_element(&self) -> Option<&NCElement<E>> {
        self.denominator.is_one().then_some(&self.numerator)
    }
}

impl<R: CoeffRing> Algebra<R> {
    fn commuter_count(&self) -> usize {
        self.presentation().commuters().len()
    }

    /// `w_i . m` summed over the monomials of commuter `j`, which must all
    /// agree. Formal square roots contribute half the value of their square.
    fn commuter_weight_on(&self, i: usize, j: usize) -> Result<i64, EngineError> {
        let cs = self.presentation().commuters();
        let w = &cs[i].weights;
        let twice = self.twice_weight(w, j)?;
        if twice % 2 != 0 {
            return Err(EngineError::CommuterMismatch {
                name: cs[i].name.clone(),
                probe: cs[j].name.clone(),
            });
        }
        Ok(twice / 2)
    }

    fn twice_weight(&self, w: &[i64], j: usize) -> Result<i64, EngineError> {
        let c = &self.presentation().commuters()[j];
        if let Some(k) = c.square_root_of {
            return self.twice_weight(w, k).map(|v| v / 2);
        }
        let el = c.element.as_ref().expect("registered element");
        let mut vals = el.monomials().map(|m| m.weight(w));
        let first = vals.next().unwrap_or(0);
        if vals.any(|v| v != first) {
            return Err(EngineError::CommuterMismatch {
                name: c.name.clone(),
                probe: "inhomogeneous weight".into(),
            });
        }
        Ok(2 * first)
    }

    /// `k` with `product(seq) = q^k * product(sorted(seq))`, using
    /// `s_i^a s_j^b = q^{ab e(i,j)} s_j^b s_i^a`.
    pub fn sort_q_power(&self, seq: &[(usize, u32)]) -> Result<i64, EngineError> {
        let mut k = 0i64;
        for (x, &(i, a)) in seq.iter().enumerate() {
            for &(j, b) in &seq[x + 1..] {
                if i > j {
                    k += (a as i64) * (b as i64) * self.commuter_weight_on(i, j)?;
                }
            }
        }
        Ok(k)
    }

    /// Collapse `alpha^2` to its square and return the accompanying q-power.
    fn collapse_roots(&self, d: Denominator) -> Result<(i64, Denominator), EngineError> {
        let cs = self.presentation().commuters();
        let mut k = 0i64;
        let mut d = d;
        loop {
            let Some((root, e)) = d.factors().find(|&(i, e)| e >= 2 && cs[i].square_root_of.is_some()) else {
                return Ok((k, d));
            };
            let sq = cs[root].square_root_of.unwrap();
            let mut seq = Vec::new();
            for (i, a) in d.factors() {
                if i == root {
                    seq.push((root, e % 2));
                    seq.push((sq, e / 2));
                } else {
                    seq.push((i, a));
                }
            }
            seq.retain(|&(_, a)| a > 0);
            k += self.sort_q_power(&seq)?;
            d = Denominator::from_seq(&seq);
        }
    }

    /// Move `D^{-1}` past `n`: returns `n'` with `D^{-1} n = n' D^{-1}`.
    fn twist(&self, n: &NCElement<R::Elem>, d: &Denominator) -> NCElement<R::Elem> {
        let cs = self.presentation().commuters();
        let ring = self.ring();
        let mut out = NCElement::zero();
        for (m, c) in n.terms() {
            let e: i64 = d.factors().map(|(i, a)| a as i64 * m.weight(&cs[i].weights)).sum();
            out.add_term(ring, m.clone(), &ring.mul(c, &ring.q_pow(-e)));
        }
        out
    }

    fn commuter_power(&self, d: &Denominator) -> Result<NCElement<R::Elem>, EngineError> {
        let cs = self.presentation().commuters();
        let mut acc = self.one();
        for (i, a) in d.factors() {
            let Some(el) = cs[i].element.as_ref() else {
                return Err(EngineError::ParityMismatch(cs[i].name.clone()));
            };
            acc = self.mul(&acc, &self.pow(&self.lift(el), a));
        }
        Ok(acc)
    }

    /// `s^{-power}` for the commuter named `name`.
    pub fn commuter_inverse(&self, name: &str, power: u32) -> Result<OreFraction<R::Elem>, EngineError> {
        let i = self
            .presentation()
            .commuter_index(name)
            .ok_or_else(|| EngineError::UnregisteredDenominator(name.to_string()))?;
        self.ore_normalize(OreFraction {
            numerator: self.one(),
            denominator: Denominator::power(i, power),
        })
    }

    pub fn fraction(&self, e: NCElement<R::Elem>) -> OreFraction<R::Elem> {
        OreFraction::from_element(e)
    }

    fn check_denominator(&self, d: &Denominator) -> Result<(), EngineError> {
        match d.factors().find(|&(i, _)| i >= self.commuter_count()) {
            Some((i, _)) => Err(EngineError::UnregisteredDenominator(format!("#{i}"))),
            None => Ok(()),
        }
    }

    /// Canonical form: square roots collapsed, powers of a commuter equal to
    /// the last generator cancelled against the numerator, and the zero
    /// fraction given the trivial denominator.
    pub fn ore_normalize(&self, f: OreFraction<R::Elem>) -> Result<OreFraction<R::Elem>, EngineError> {
        self.check_denominator(&f.denominator)?;
        let ring = self.ring();
        if f.numerator.is_zero() {
            return Ok(OreFraction::from_element(NCElement::zero()));
        }
        let (k, mut den) = self.collapse_roots(f.denominator)?;
        let mut num = f.numerator.scale(ring, &ring.q_pow(-k));
        let n = self.ngens();
        let cs = self.presentation().commuters();
        for (i, c) in cs.iter().enumerate() {
            let a = den.exponent(i);
            if a == 0 || n == 0 {
                continue;
            }
            let Some(el) = &c.element else { continue };
            let last = Monomial::generator(n, n - 1, 1);
            if el.len() != 1 || el.coeff(&last).is_none_or(|v| !v.is_one()) {
                continue;
            }
            let avail = num.monomials().map(|m| m.exp(n - 1)).min().unwrap_or(0);
            let cut = a.min(avail);
            if cut == 0 {
                continue;
            }
            // D = q^{-kk} (D' s_i^a), so N D^{-1} = q^{kk} (N s_i^{-a}) D'^{-1}.
            let mut rest: Vec<(usize, u32)> = den.factors().filter(|&(j, _)| j != i).collect();
            rest.push((i, a));
            let kk = self.sort_q_power(&rest)?;
            let mut shifted = NCElement::zero();
            for (m, v) in num.terms() {
                let mut m2 = m.clone();
                m2.set_exp(n - 1, m.exp(n - 1) - cut);
                shifted.add_term(ring, m2, &ring.mul(v, &ring.q_pow(kk)));
            }
            rest.pop();
            rest.push((i, a - cut));
            let kk2 = self.sort_q_power(&rest)?;
            // Re-sort the remaining word: D'' s_i^{a-cut} = q^{kk2} sorted.
            num = shifted.scale(ring, &ring.q_pow(-kk2));
            den = Denominator::from_seq(&rest);
        }
        Ok(OreFraction {
            numerator: num,
            denominator: den,
        })
    }

    /// Rewrite `f` over the larger denominator `c` (which must contain it).
    fn over(&self, f: &OreFraction<R::Elem>, c: &Denominator) -> Result<NCElement<R::Elem>, EngineError> {
        let extra: Vec<(usize, u32)> = c
            .factors()
            .map(|(i, a)| (i, a - f.denominator.exponent(i)))
            .filter(|&(_, a)| a > 0)
            .collect();
        let ext = Denominator::from_seq(&extra);
        let mut seq = f.denominator.seq();
        seq.extend(extra.iter().copied());
        let k = self.sort_q_power(&seq)?;
        let num = self.mul(&f.numerator, &self.commuter_power(&ext)?);
        Ok(num.scale(self.ring(), &self.ring().q_pow(-k)))
    }

    pub fn ore_arith(
        &self,
        f: &OreFraction<R::Elem>,
        g: &OreFraction<R::Elem>,
        op: OreOp,
    ) -> Result<OreFraction<R::Elem>, EngineError> {
        let f = &self.ore_normalize(f.clone())?;
        let g = &self.ore_normalize(g.clone())?;
        let ring = self.ring();
        match op {
            OreOp::Mul => {
                let twisted = self.twist(&g.numerator, &f.denominator);
                let num = self.mul(&f.numerator, &twisted);
                let mut seq = g.denominator.seq();
                seq.extend(f.denominator.factors());
                let k = self.sort_q_power(&seq)?;
                self.ore_normalize(OreFraction {
                    numerator: num.scale(ring, &ring.q_pow(-k)),
                    denominator: Denominator::from_seq(&seq),
                })
            }
            OreOp::Add | OreOp::Sub => {
                if g.numerator.is_zero() {
                    return Ok(f.clone());
                }
                if f.numerator.is_zero() {
                    let g = g.clone();
                    return Ok(if op == OreOp::Sub {
                        OreFraction {
                            numerator: g.numerator.neg(ring),
                            denominator: g.denominator,
                        }
                    } else {
                        g
                    });
                }
                let mut c = f.denominator.clone();
                for (i, a) in g.denominator.factors() {
                    let e = c.0.entry(i).or_insert(0);
                    *e = (*e).max(a);
                }
                let a = self.over(f, &c)?;
                let b = self.over(g, &c)?;
                let num = if op == OreOp::Add { a.add(ring, &b) } else { a.sub(ring, &b) };
                self.ore_normalize(OreFraction {
                    numerator: num,
                    denominator: c,
                })
            }
        }
    }

    pub fn ore_mul(&self, f: &OreFraction<R::Elem>, g: &OreFraction<R::Elem>) -> Result<OreFraction<R::Elem>, EngineError> {
        self.ore_arith(f, g, OreOp::Mul)
    }

    pub fn ore_eq(&self, f: &OreFraction<R::Elem>, g: &OreFraction<R::Elem>) -> Result<bool, EngineError> {
        Ok(self.ore_arith(f, g, OreOp::Sub)?.numerator.is_zero())
    }
}
