//! Commutative 2x2 matrices over a coefficient ring, and commutative
//! polynomials used to compare central images with classical formulas.

use std::collections::BTreeMap;

use crate::coefficients::{CoeffField, CoeffRing};

/// Minimal commutative arithmetic for matrix entries.
pub trait Arith {
    type T: Clone;
    fn zero(&self) -> Self::T;
    fn one(&self) -> Self::T;
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T;
    fn is_zero(&self, a: &Self::T) -> bool;
}

impl<R: CoeffRing> Arith for R {
    type T = R::Elem;
    fn zero(&self) -> R::Elem {
        CoeffRing::zero(self)
    }
    fn one(&self) -> R::Elem {
        CoeffRing::one(self)
    }
    fn add(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        CoeffRing::add(self, a, b)
    }
    fn sub(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        CoeffRing::sub(self, a, b)
    }
    fn mul(&self, a: &R::Elem, b: &R::Elem) -> R::Elem {
        CoeffRing::mul(self, a, b)
    }
    fn is_zero(&self, a: &R::Elem) -> bool {
        CoeffRing::is_zero(self, a)
    }
}

pub type Mat2<T> = [[T; 2]; 2];

pub fn mat_mul<A: Arith>(r: &A, a: &Mat2<A::T>, b: &Mat2<A::T>) -> Mat2<A::T> {
    let e = |i: usize, j: usize| r.add(&r.mul(&a[i][0], &b[0][j]), &r.mul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn det<A: Arith>(r: &A, m: &Mat2<A::T>) -> A::T {
    r.sub(&r.mul(&m[0][0], &m[1][1]), &r.mul(&m[0][1], &m[1][0]))
}

/// `adj(m)`, so that `m adj(m) = det(m) I`.
pub fn adjugate<A: Arith>(r: &A, m: &Mat2<A::T>) -> Mat2<A::T> {
    let neg = |x: &A::T| r.sub(&r.zero(), x);
    [[m[1][1].clone(), neg(&m[0][1])], [neg(&m[1][0]), m[0][0].clone()]]
}

pub fn identity<A: Arith>(r: &A) -> Mat2<A::T> {
    [[r.one(), r.zero()], [r.zero(), r.one()]]
}

pub fn inverse<F: CoeffField>(f: &F, m: &Mat2<F::Elem>) -> Option<Mat2<F::Elem>> {
    let d = f.inv(&det(f, m))?;
    let adj = adjugate(f, m);
    Some(adj.map(|row| row.map(|x| CoeffRing::mul(f, &x, &d))))
}

/// Commutative polynomial: exponent vector to coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommPoly<E> {
    pub terms: BTreeMap<Vec<u32>, E>,
}

/// Polynomials in `nvars` commuting variables over `R`.
#[derive(Debug, Clone)]
pub struct PolyRing<R: CoeffRing> {
    pub ring: R,
    pub nvars: usize,
}

impl<R: CoeffRing> PolyRing<R> {
    pub fn new(ring: R, nvars: usize) -> Self {
        PolyRing { ring, nvars }
    }

    pub fn constant(&self, c: R::Elem) -> CommPoly<R::Elem> {
        let mut terms = BTreeMap::new();
        if !self.ring.is_zero(&c) {
            terms.insert(vec![0; self.nvars], c);
        }
        CommPoly { terms }
    }

    pub fn var(&self, i: usize) -> CommPoly<R::Elem> {
        let mut e = vec![0; self.nvars];
        e[i] = 1;
        CommPoly {
            terms: BTreeMap::from([(e, self.ring.one())]),
        }
    }

    pub fn eval(&self, p: &CommPoly<R::Elem>, values: &[R::Elem]) -> R::Elem {
        let r = &self.ring;
        let mut acc = r.zero();
        for (e, c) in &p.terms {
            let mut t = c.clone();
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    t = r.mul(&t, &r.pow(v, k));
                }
            }
            acc = r.add(&acc, &t);
        }
        acc
    }

    fn insert(&self, terms: &mut BTreeMap<Vec<u32>, R::Elem>, e: Vec<u32>, c: R::Elem) {
        let r = &self.ring;
        let slot = terms.entry(e.clone()).or_insert_with(|| r.zero());
        *slot = r.add(slot, &c);
        if r.is_zero(slot) {
            terms.remove(&e);
        }
    }
}

impl<R: CoeffRing> Arith for PolyRing<R> {
    type T = CommPoly<R::Elem>;
    fn zero(&self) -> Self::T {
        CommPoly { terms: BTreeMap::new() }
    }
    fn one(&self) -> Self::T {
        self.constant(self.ring.one())
    }
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T {
        let mut terms = a.terms.clone();
        for (e, c) in &b.terms {
            self.insert(&mut terms, e.clone(), c.clone());
        }
        CommPoly { terms }
    }
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T {
        let mut terms = a.terms.clone();
        for (e, c) in &b.terms {
            self.insert(&mut terms, e.clone(), self.ring.neg(c));
        }
        CommPoly { terms }
    }
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T {
        let mut terms = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                self.insert(&mut terms, e, self.ring.mul(ca, cb));
            }
        }
        CommPoly { terms }
    }
    fn is_zero(&self, a: &Self::T) -> bool {
        a.terms.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Classical;
    use num_rational::BigRational;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn inverse_and_adjugate() {
        let m = [[r(2), r(1)], [r(5), r(3)]];
        let inv = inverse(&Classical, &m).unwrap();
        assert_eq!(mat_mul(&Classical, &m, &inv), identity(&Classical));
        assert!(inverse(&Classical, &[[r(1), r(2)], [r(2), r(4)]]).is_none());
    }

    #[test]
    fn symbolic_determinant() {
        let p = PolyRing::new(Classical, 3);
        let m = [[p.var(0), p.var(1)], [p.var(2), p.one()]];
        let d = det(&p, &m);
        assert_eq!(p.eval(&d, &[r(3), r(4), r(5)]), r(-17));
    }
}
