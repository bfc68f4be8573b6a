use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use crate::coefficients::{CoeffRing, QLaurent};

use super::{EngineError, Monomial, NCElement, Presentation};

const MAX_DEPTH: usize = 4096;

type Elem<R> = NCElement<<R as CoeffRing>::Elem>;

/// A presentation specialized to a coefficient ring, with a product cache.
#[derive(Debug)]
pub struct Algebra<R: CoeffRing> {
    pres: Arc<Presentation>,
    ring: R,
    /// Rule right-hand sides indexed by `j * n + i`.
    rules: Vec<Option<Elem<R>>>,
    cache: RwLock<HashMap<(Monomial, usize), Arc<Elem<R>>>>,
    steps: AtomicU64,
}

impl<R: CoeffRing> Clone for Algebra<R> {
    fn clone(&self) -> Self {
        Algebra::new(self.pres.clone(), self.ring.clone())
    }
}

impl<R: CoeffRing> Algebra<R> {
    pub fn new(pres: impl Into<Arc<Presentation>>, ring: R) -> Self {
        let pres = pres.into();
        let n = pres.ngens();
        let mut rules = vec![None; n * n];
        for (&(j, i), rhs) in pres.rules() {
            rules[j * n + i] = Some(rhs.map_coeffs(&ring, |c| ring.from_laurent(c)));
        }
        Algebra {
            pres,
            ring,
            rules,
            cache: RwLock::new(HashMap::new()),
            steps: AtomicU64::new(0),
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn shared_presentation(&self) -> Arc<Presentation> {
        self.pres.clone()
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn ngens(&self) -> usize {
        self.pres.ngens()
    }

    /// Rewrite steps performed so far (cache misses on `monomial * generator`).
    pub fn steps(&self) -> u64 {
        self.steps.load(Ordering::Relaxed)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn one(&self) -> Elem<R> {
        NCElement::one(&self.ring, self.ngens())
    }

    pub fn zero(&self) -> Elem<R> {
        NCElement::zero()
    }

    pub fn scalar(&self, c: R::Elem) -> Elem<R> {
        NCElement::scalar(&self.ring, self.ngens(), c)
    }

    pub fn generator(&self, g: usize) -> Elem<R> {
        NCElement::term(Monomial::generator(self.ngens(), g, 1), self.ring.one())
    }

    pub fn gen(&self, name: &str) -> Option<Elem<R>> {
        self.pres.generator_index(name).map(|g| self.generator(g))
    }

    pub fn monomial(&self, m: Monomial) -> Elem<R> {
        NCElement::term(m, self.ring.one())
    }

    /// Bring an element with Laurent coefficients into this ring.
    pub fn lift(&self, e: &NCElement<QLaurent>) -> Elem<R> {
        e.map_coeffs(&self.ring, |c| self.ring.from_laurent(c))
    }

    pub fn named(&self, name: &str) -> Option<Elem<R>> {
        self.pres.named_element(name).map(|e| self.lift(e))
    }

    fn rule(&self, j: usize, i: usize) -> &Elem<R> {
        self.rules[j * self.ngens() + i]
            .as_ref()
            .expect("presentation has a rule for every out-of-order pair")
    }

    /// Normal form of an ordered word of generator indices.
    pub fn normal_form(&self, word: &[usize]) -> Elem<R> {
        let mut acc = self.one();
        for &g in word {
            acc = self.mul_gen(&acc, g, 0);
        }
        acc
    }

    /// Normal form of a word given as `(generator, power)` pairs.
    pub fn normal_form_powers(&self, word: &[(usize, u32)]) -> Elem<R> {
        let mut acc = self.one();
        for &(g, p) in word {
            let m = Monomial::generator(self.ngens(), g, p);
            acc = self.mul(&acc, &self.monomial(m));
        }
        acc
    }

    fn mul_gen(&self, a: &Elem<R>, g: usize, depth: usize) -> Elem<R> {
        let mut out = NCElement::zero();
        for (m, c) in a.terms() {
            let p = self.mono_times_gen(m, g, depth);
            out.add_scaled(&self.ring, &p, c);
        }
        out
    }

    fn mono_times_gen(&self, m: &Monomial, g: usize, depth: usize) -> Arc<Elem<R>> {
        if m.exponents()[g + 1..].iter().all(|&e| e == 0) {
            return Arc::new(self.monomial(m.with_bumped(g, 1)));
        }
        let key = (m.clone(), g);
        if let Some(hit) = self.cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        if depth > MAX_DEPTH {
            panic!("rewriting did not terminate");
        }
        self.steps.fetch_add(1, Ordering::Relaxed);
        let h = m.last_gen().expect("nonempty monomial");
        let mut prefix = m.clone();
        prefix.set_exp(h, m.exp(h) - 1);
        let mut out = NCElement::zero();
        for (t, c) in self.rule(h, g).terms() {
            let p = self.mul_mono_mono_at(&prefix, t, depth + 1);
            out.add_scaled(&self.ring, &p, c);
        }
        let out = Arc::new(out);
        self.cache.write().unwrap().insert(key, out.clone());
        out
    }

    fn mul_mono_mono_at(&self, a: &Monomial, b: &Monomial, depth: usize) -> Elem<R> {
        match (a.last_gen(), b.first_gen()) {
            (None, _) => self.monomial(b.clone()),
            (_, None) => self.monomial(a.clone()),
            (Some(l), Some(f)) if l <= f => self.monomial(a.concat(b)),
            _ => {
                let mut acc = self.monomial(a.clone());
                for g in b.word() {
                    acc = self.mul_gen(&acc, g, depth);
                }
                acc
            }
        }
    }

    /// PBW normal form of `a * b` for monomials.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Elem<R> {
        self.mul_mono_mono_at(a, b, 0)
    }

    pub fn mul(&self, a: &Elem<R>, b: &Elem<R>) -> Elem<R> {
        let mut out = NCElement::zero();
        for (mb, cb) in b.terms() {
            for (ma, ca) in a.terms() {
                let p = self.mul_mono_mono_at(ma, mb, 0);
                out.add_scaled(&self.ring, &p, &self.ring.mul(ca, cb));
            }
        }
        out
    }

    /// Product with a check that both factors carry this ring's coefficients.
    pub fn multiply(&self, a: &Elem<R>, b: &Elem<R>) -> Result<Elem<R>, EngineError> {
        for e in [a, b] {
            if e.terms().any(|(_, c)| !self.ring.owns(c)) {
                return Err(EngineError::ModeMismatch {
                    expected: self.ring.mode().to_string(),
                });
            }
        }
        Ok(self.mul(a, b))
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a Elem<R>>) -> Elem<R>
    where
        R::Elem: 'a,
    {
        factors.into_iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    pub fn commutator(&self, a: &Elem<R>, b: &Elem<R>) -> Elem<R> {
        self.mul(a, b).sub(&self.ring, &self.mul(b, a))
    }

    pub fn pow(&self, a: &Elem<R>, n: u32) -> Elem<R> {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn add(&self, a: &Elem<R>, b: &Elem<R>) -> Elem<R> {
        a.add(&self.ring, b)
    }

    pub fn sub(&self, a: &Elem<R>, b: &Elem<R>) -> Elem<R> {
        a.sub(&self.ring, b)
    }

    pub fn scale(&self, a: &Elem<R>, c: &R::Elem) -> Elem<R> {
        a.scale(&self.ring, c)
    }

    /// Whether `a * b == q^k * b * a`.
    pub fn q_commutes(&self, a: &Elem<R>, b: &Elem<R>, k: i64) -> bool {
        self.mul(a, b) == self.scale(&self.mul(b, a), &self.ring.q_pow(k))
    }

    pub fn is_central(&self, a: &Elem<R>) -> bool {
        (0..self.ngens()).all(|g| {
            let x = self.generator(g);
            self.mul(a, &x) == self.mul(&x, a)
        })
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::coefficients::GenericQ;

    /// Hand-written D_q(C^1): x < d, d*x -> q^2 x d + (q^2 - 1).
    fn weyl1() -> Algebra<GenericQ> {
        let mut rhs = NCElement::zero();
        rhs.add_term(&GenericQ, Monomial::from_exponents(&[1, 1]), &QLaurent::q_pow(2));
        rhs.add_term(&GenericQ, Monomial::one(2), &QLaurent::from_pairs(&[(2, 1), (0, -1)]));
        let mut rules = BTreeMap::new();
        rules.insert((1, 0), rhs);
        let p = Presentation::new("weyl1", vec!["x1".into(), "d1".into()], rules).unwrap();
        Algebra::new(p, GenericQ)
    }

    #[test]
    fn d_power_times_x() {
        let alg = weyl1();
        for n in 1..=6u32 {
            let lhs = alg.normal_form_powers(&[(1, n), (0, 1)]);
            let mut rhs = NCElement::zero();
            rhs.add_term(&GenericQ, Monomial::from_exponents(&[1, n]), &QLaurent::q_pow(2 * n as i64));
            rhs.add_term(
                &GenericQ,
                Monomial::from_exponents(&[0, n - 1]),
                &QLaurent::from_pairs(&[(2 * n as i64, 1), (0, -1)]),
            );
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn unit_and_ordered_products() {
        let alg = weyl1();
        let x = alg.generator(0);
        assert_eq!(alg.mul(&alg.one(), &x), x);
        assert!(alg.commutator(&x, &x).is_zero());
        let xd = alg.normal_form(&[0, 1]);
        assert_eq!(xd.len(), 1);
    }

    #[test]
    fn associativity_on_small_words() {
        let alg = weyl1();
        let a = alg.normal_form(&[1, 1, 0]);
        let b = alg.normal_form(&[1, 0, 0]);
        let c = alg.normal_form(&[1, 0, 1]);
        assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn mode_mismatch_is_reported() {
        use crate::coefficients::RootOfUnity;
        let p = weyl1().shared_presentation();
        let r3 = Algebra::new(p.clone(), RootOfUnity::new(3).unwrap());
        let r5 = Algebra::new(p, RootOfUnity::new(5).unwrap());
        let x5 = r5.generator(0);
        assert!(matches!(r3.multiply(&x5, &x5), Err(EngineError::ModeMismatch { .. })));
    }
}
