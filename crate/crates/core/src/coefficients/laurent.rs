use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{format_q_terms, QPoly};
use super::CoeffError;

/// Exact Laurent polynomial in `q` with rational coefficients.
///
/// The term map never stores a zero coefficient, so the zero polynomial is
/// the empty map and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigRational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent::default()
    }

    pub fn one() -> Self {
        Self::q_pow(0)
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::term(BigRational::one(), k)
    }

    /// `c * q^k`.
    pub fn term(c: BigRational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        QLaurent { terms }
    }

    pub fn from_int(c: i64) -> Self {
        Self::term(BigRational::from_integer(BigInt::from(c)), 0)
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::term(c, 0)
    }

    /// Build from `(exponent, integer coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut out = QLaurent::zero();
        for &(k, c) in pairs {
            out += &QLaurent::term(BigRational::from_integer(BigInt::from(c)), k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> BigRational {
        self.terms.get(&k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// If this is a single term `c q^k`, return it.
    pub fn as_monomial(&self) -> Option<(i64, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    /// If this is a rational constant, return it.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QLaurent {
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QLaurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QLaurent::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Split as `q^v * P(q)` with `P(0) != 0`. Zero maps to `(0, 0)`.
    pub fn to_shifted_poly(&self) -> (i64, QPoly) {
        let Some(v) = self.min_exp() else {
            return (0, QPoly::zero());
        };
        let top = self.max_exp().unwrap();
        let mut coeffs = vec![BigRational::zero(); (top - v + 1) as usize];
        for (k, c) in &self.terms {
            coeffs[(k - v) as usize] = c.clone();
        }
        (v, QPoly::from_coeffs(coeffs))
    }

    pub fn from_shifted_poly(shift: i64, p: &QPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.insert(k as i64 + shift, c.clone());
            }
        }
        QLaurent { terms }
    }

    /// Exact quotient `self / divisor` in the Laurent ring.
    ///
    /// Fails with [`CoeffError::NotDivisible`] when the quotient is not a
    /// Laurent polynomial.
    pub fn exact_divide(&self, divisor: &QLaurent) -> Result<QLaurent, CoeffError> {
        if divisor.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(QLaurent::zero());
        }
        let (va, pa) = self.to_shifted_poly();
        let (vb, pb) = divisor.to_shifted_poly();
        // pb(0) != 0 so pb is coprime to q; divisibility is decided by pa alone.
        let (quot, rem) = pa.div_rem(&pb);
        if !rem.is_zero() {
            return Err(CoeffError::NotDivisible {
                dividend: self.to_string(),
                divisor: divisor.to_string(),
            });
        }
        Ok(QLaurent::from_shifted_poly(va - vb, &quot))
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// Exact evaluation at a nonzero rational `q`.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (k, c) in &self.terms {
            acc += c * pow_rational(x, *k);
        }
        acc
    }

    fn add_term(&mut self, k: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }
}

pub(crate) fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigRational)> =
            self.terms.iter().rev().map(|(k, c)| (*k, c.clone())).collect();
        f.write_str(&format_q_terms(&terms))
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QLaurent({})", self)
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c);
        }
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka + kb, &(ca * cb));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QLaurent {
        QLaurent::q_pow(1)
    }

    #[test]
    fn difference_of_squares() {
        let one = QLaurent::one();
        let lhs = &(&q() - &one) * &(&q() + &one);
        assert_eq!(lhs, QLaurent::from_pairs(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn inverse_power_cancels() {
        assert!((&QLaurent::q_pow(-1) * &q()).is_one());
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = QLaurent::from_pairs(&[(2, 1), (0, -1)]);
        let b = QLaurent::from_pairs(&[(0, 1), (2, -1)]);
        let s = &a + &b;
        assert!(s.is_zero());
        assert_eq!(s.terms().count(), 0);
    }

    #[test]
    fn exact_division_examples() {
        let q2m1 = QLaurent::from_pairs(&[(2, 1), (0, -1)]);
        let qm1 = QLaurent::from_pairs(&[(1, 1), (0, -1)]);
        let qp1 = QLaurent::from_pairs(&[(1, 1), (0, 1)]);
        assert_eq!(q2m1.exact_divide(&qm1).unwrap(), qp1);
        let q3m1 = QLaurent::from_pairs(&[(3, 1), (0, -1)]);
        assert_eq!(
            q3m1.exact_divide(&qm1).unwrap(),
            QLaurent::from_pairs(&[(2, 1), (1, 1), (0, 1)])
        );
        assert!(matches!(
            qm1.exact_divide(&qp1),
            Err(CoeffError::NotDivisible { .. })
        ));
    }

    #[test]
    fn negative_powers_divide() {
        // (q^-2 - 1) / (q - 1) = -(q + 1) q^-2
        let a = QLaurent::from_pairs(&[(-2, 1), (0, -1)]);
        let b = QLaurent::from_pairs(&[(1, 1), (0, -1)]);
        let c = a.exact_divide(&b).unwrap();
        assert_eq!(&c * &b, a);
        assert_eq!(c, QLaurent::from_pairs(&[(-1, -1), (-2, -1)]));
    }

    #[test]
    fn display_orders_descending() {
        let a = QLaurent::from_pairs(&[(-2, -1), (2, 1), (0, 3)]);
        assert_eq!(a.to_string(), "q^2 + 3 - q^-2");
    }
}
