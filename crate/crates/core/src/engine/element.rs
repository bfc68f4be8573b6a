use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::coefficients::CoeffRing;

/// Ordered PBW monomial `g_1^{e_1} ... g_k^{e_k}`.
///
/// Ordering is degree first, then lexicographic on the exponent sequence
/// with earlier generators weighing more, so `a^3 > a*b*c > b*c*d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 8]>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(SmallVec::from_elem(0, ngens))
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn generator(ngens: usize, g: usize, power: u32) -> Self {
        let mut m = Self::one(ngens);
        m.0[g] = power;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn ngens(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exp(&self, g: usize) -> u32 {
        self.0[g]
    }

    pub fn set_exp(&mut self, g: usize, e: u32) {
        self.0[g] = e;
    }

    /// Index of the last generator with a positive exponent.
    pub fn last_gen(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    pub fn first_gen(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Exponent-wise sum; the PBW product when every generator of `self`
    /// precedes every generator of `other`.
    pub fn concat(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn with_bumped(&self, g: usize, by: u32) -> Monomial {
        let mut m = self.clone();
        m.0[g] += by;
        m
    }

    /// The generator sequence spelled out left to right.
    pub fn word(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(g, &e)| std::iter::repeat_n(g, e as usize))
    }

    /// `sum_g weights[g] * e_g`.
    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Finite linear combination of PBW monomials in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NCElement<E> {
    terms: BTreeMap<Monomial, E>,
}

impl<E> Default for NCElement<E> {
    fn default() -> Self {
        NCElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<E: Clone> NCElement<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(m: Monomial, c: E) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, c);
        NCElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    /// Largest monomial and its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &E)> {
        self.terms.iter().next_back()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, E)> {
        self.terms.into_iter()
    }
}

impl<E: Clone + PartialEq> NCElement<E> {
    pub fn from_terms<R: CoeffRing<Elem = E>>(
        ring: &R,
        terms: impl IntoIterator<Item = (Monomial, E)>,
    ) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(ring, m, &c);
        }
        out
    }

    pub fn scalar<R: CoeffRing<Elem = E>>(ring: &R, ngens: usize, c: E) -> Self {
        if ring.is_zero(&c) {
            Self::zero()
        } else {
            Self::term(Monomial::one(ngens), c)
        }
    }

    pub fn one<R: CoeffRing<Elem = E>>(ring: &R, ngens: usize) -> Self {
        Self::term(Monomial::one(ngens), ring.one())
    }

    pub fn add_term<R: CoeffRing<Elem = E>>(&mut self, ring: &R, m: Monomial, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                ring.add_assign(e, c);
                if ring.is_zero(e) {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled<R: CoeffRing<Elem = E>>(&mut self, ring: &R, other: &Self, c: &E) {
        if ring.is_zero(c) {
            return;
        }
        let unit = ring.is_one(c);
        for (m, v) in &other.terms {
            if unit {
                self.add_term(ring, m.clone(), v);
            } else {
                self.add_term(ring, m.clone(), &ring.mul(c, v));
            }
        }
    }

    pub fn add<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(ring, other, &ring.one());
        out
    }

    pub fn sub<R: CoeffRing<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(ring, other, &ring.neg(&ring.one()));
        out
    }

    pub fn neg<R: CoeffRing<Elem = E>>(&self, ring: &R) -> Self {
        self.scale(ring, &ring.neg(&ring.one()))
    }

    pub fn scale<R: CoeffRing<Elem = E>>(&self, ring: &R, c: &E) -> Self {
        if ring.is_zero(c) {
            return Self::zero();
        }
        NCElement {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), ring.mul(c, v)))
                .filter(|(_, v)| !ring.is_zero(v))
                .collect(),
        }
    }

    /// Change coefficient ring term by term.
    pub fn map_coeffs<S: CoeffRing>(&self, target: &S, f: impl Fn(&E) -> S::Elem) -> NCElement<S::Elem> {
        let mut out = NCElement::zero();
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), &f(c));
        }
        out
    }

    /// Rename generators: `map[g]` is the target index of source generator `g`.
    /// Only valid when the image order keeps every monomial in PBW order.
    pub fn relabel<R: CoeffRing<Elem = E>>(&self, ring: &R, target_ngens: usize, map: &[usize]) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut t = Monomial::one(target_ngens);
            for (g, &e) in m.exponents().iter().enumerate() {
                t.set_exp(map[g], e);
            }
            out.add_term(ring, t, c);
        }
        out
    }
}

impl<E: fmt::Debug> fmt::Debug for NCElement<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_order_puts_powers_of_first_generator_on_top() {
        let a3 = Monomial::from_exponents(&[3, 0, 0, 0]);
        let abc = Monomial::from_exponents(&[1, 1, 1, 0]);
        let bcd = Monomial::from_exponents(&[0, 1, 1, 1]);
        let a = Monomial::from_exponents(&[1, 0, 0, 0]);
        assert!(a3 > abc && abc > bcd && bcd > a);
    }

    #[test]
    fn word_spells_generators() {
        let m = Monomial::from_exponents(&[2, 0, 1]);
        assert_eq!(m.word().collect::<Vec<_>>(), vec![0, 0, 2]);
        assert_eq!(m.last_gen(), Some(2));
        assert_eq!(m.first_gen(), Some(0));
    }
}
