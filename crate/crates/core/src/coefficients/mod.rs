//! Exact scalar arithmetic: Laurent polynomials in `q`, their images at a
//! primitive odd root of unity, and the rational-function field used for
//! elimination.
//!
//! Algebras are parameterized by a [`CoeffRing`], a small "ring object"
//! that knows how to combine its elements. This keeps cyclotomic moduli out
//! of every individual number.

mod cyclotomic;
mod laurent;
mod poly;
mod ratfunc;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

pub use cyclotomic::{cyclotomic, specialize, CycNumber, CyclotomicField};
pub use laurent::QLaurent;
pub use poly::QPoly;
pub use ratfunc::RatFunc;

pub(crate) use poly::{format_q_terms, format_rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("root-of-unity level must be odd and greater than 1, got {0}")]
    BadLevel(u32),
}

/// How `q` is interpreted by a coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Mode {
    /// `q` is a formal parameter.
    Generic,
    /// `q` is a primitive `l`-th root of unity.
    Root(u32),
    /// `q = 1`.
    Classical,
    /// `q` is a formal parameter and denominators are allowed.
    FunctionField,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Generic => write!(f, "generic"),
            Mode::Root(l) => write!(f, "root({l})"),
            Mode::Classical => write!(f, "classical"),
            Mode::FunctionField => write!(f, "function-field"),
        }
    }
}

pub trait CoeffRing: Clone + Send + Sync + fmt::Debug + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn mode(&self) -> Mode;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_laurent(&self, a: &QLaurent) -> Self::Elem;
    /// Canonical text form, e.g. `q^2 - 1`.
    fn format(&self, a: &Self::Elem) -> String;

    /// `a` as `sum c_k q^k` with descending `k`, when it has that shape.
    fn q_terms(&self, _a: &Self::Elem) -> Option<Vec<(i64, BigRational)>> {
        None
    }

    /// Whether `a` was produced by this ring (level checks for roots of unity).
    fn owns(&self, _a: &Self::Elem) -> bool {
        true
    }

    fn add_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.add(a, b);
    }

    fn from_int(&self, c: i64) -> Self::Elem {
        self.from_laurent(&QLaurent::from_int(c))
    }

    fn from_rational(&self, c: &BigRational) -> Self::Elem {
        self.from_laurent(&QLaurent::from_rational(c.clone()))
    }

    fn q_pow(&self, k: i64) -> Self::Elem {
        self.from_laurent(&QLaurent::q_pow(k))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, e: u32) -> Self::Elem {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }
}

pub trait CoeffField: CoeffRing {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

/// Laurent polynomials in a formal `q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenericQ;

impl CoeffRing for GenericQ {
    type Elem = QLaurent;

    fn mode(&self) -> Mode {
        Mode::Generic
    }
    fn zero(&self) -> QLaurent {
        QLaurent::zero()
    }
    fn one(&self) -> QLaurent {
        QLaurent::one()
    }
    fn is_zero(&self, a: &QLaurent) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        a + b
    }
    fn sub(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        a - b
    }
    fn neg(&self, a: &QLaurent) -> QLaurent {
        -a
    }
    fn mul(&self, a: &QLaurent, b: &QLaurent) -> QLaurent {
        a * b
    }
    fn from_laurent(&self, a: &QLaurent) -> QLaurent {
        a.clone()
    }
    fn format(&self, a: &QLaurent) -> String {
        a.to_string()
    }
    fn add_assign(&self, a: &mut QLaurent, b: &QLaurent) {
        *a += b;
    }
    fn is_one(&self, a: &QLaurent) -> bool {
        a.is_one()
    }
    fn q_terms(&self, a: &QLaurent) -> Option<Vec<(i64, BigRational)>> {
        Some(a.terms().collect::<Vec<_>>().into_iter().rev().map(|(k, c)| (k, c.clone())).collect())
    }
}

/// `q` specialized to a primitive odd root of unity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootOfUnity(pub CyclotomicField);

impl RootOfUnity {
    pub fn new(level: u32) -> Result<Self, CoeffError> {
        Ok(RootOfUnity(CyclotomicField::new(level)?))
    }

    pub fn level(&self) -> u32 {
        self.0.level()
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.0
    }
}

impl CoeffRing for RootOfUnity {
    type Elem = CycNumber;

    fn mode(&self) -> Mode {
        Mode::Root(self.0.level())
    }
    fn zero(&self) -> CycNumber {
        self.0.zero()
    }
    fn one(&self) -> CycNumber {
        self.0.one()
    }
    fn is_zero(&self, a: &CycNumber) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &CycNumber, b: &CycNumber) -> CycNumber {
        self.0.add(a, b)
    }
    fn sub(&self, a: &CycNumber, b: &CycNumber) -> CycNumber {
        self.0.sub(a, b)
    }
    fn neg(&self, a: &CycNumber) -> CycNumber {
        self.0.neg(a)
    }
    fn mul(&self, a: &CycNumber, b: &CycNumber) -> CycNumber {
        self.0.mul(a, b)
    }
    fn from_laurent(&self, a: &QLaurent) -> CycNumber {
        self.0.specialize(a)
    }
    fn format(&self, a: &CycNumber) -> String {
        self.0.format(a)
    }
    fn owns(&self, a: &CycNumber) -> bool {
        a.level() == self.0.level()
    }
    fn q_pow(&self, k: i64) -> CycNumber {
        self.0.q_pow(k)
    }
    fn from_rational(&self, c: &BigRational) -> CycNumber {
        self.0.rational(c.clone())
    }
    fn q_terms(&self, a: &CycNumber) -> Option<Vec<(i64, BigRational)>> {
        Some(
            a.residue()
                .coeffs()
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as i64, c.clone()))
                .collect(),
        )
    }
}

impl CoeffField for RootOfUnity {
    fn inv(&self, a: &CycNumber) -> Option<CycNumber> {
        self.0.inv(a)
    }
}

/// The classical limit `q = 1`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Classical;

impl CoeffRing for Classical {
    type Elem = BigRational;

    fn mode(&self) -> Mode {
        Mode::Classical
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(1))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_laurent(&self, a: &QLaurent) -> BigRational {
        a.at_one()
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn add_assign(&self, a: &mut BigRational, b: &BigRational) {
        *a += b;
    }
    fn q_terms(&self, a: &BigRational) -> Option<Vec<(i64, BigRational)>> {
        Some(if a.is_zero() { vec![] } else { vec![(0, a.clone())] })
    }
}

impl CoeffField for Classical {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// Rational functions in a formal `q`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FunctionField;

impl CoeffRing for FunctionField {
    type Elem = RatFunc;

    fn mode(&self) -> Mode {
        Mode::FunctionField
    }
    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn from_laurent(&self, a: &QLaurent) -> RatFunc {
        RatFunc::from_laurent(a)
    }
    fn format(&self, a: &RatFunc) -> String {
        a.to_string()
    }
}

impl CoeffField for FunctionField {
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv()
    }
}

/// Laurent-polynomial arithmetic selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaurentOp {
    Add,
    Sub,
    Mul,
}

pub fn laurent_arith(a: &QLaurent, b: &QLaurent, op: LaurentOp) -> QLaurent {
    match op {
        LaurentOp::Add => a + b,
        LaurentOp::Sub => a - b,
        LaurentOp::Mul => a * b,
    }
}

pub fn exact_divide(a: &QLaurent, b: &QLaurent) -> Result<QLaurent, CoeffError> {
    a.exact_divide(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_collapses_q() {
        let a = QLaurent::from_pairs(&[(2, 1), (-3, 4)]);
        assert_eq!(Classical.from_laurent(&a), BigRational::from_integer(5.into()));
    }

    #[test]
    fn root_of_unity_ring_levels() {
        let r3 = RootOfUnity::new(3).unwrap();
        let r5 = RootOfUnity::new(5).unwrap();
        assert!(r3.owns(&r3.q_pow(1)));
        assert!(!r3.owns(&r5.q_pow(1)));
        assert!(RootOfUnity::new(4).is_err());
    }
}
