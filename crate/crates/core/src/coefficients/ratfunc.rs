use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::laurent::QLaurent;
use super::poly::QPoly;

/// Element of `Q(q)` kept in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: QPoly::one(),
            };
        }
        let g = QPoly::gcd(&num, &den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip();
        RatFunc {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_laurent(a: &QLaurent) -> Self {
        let (v, p) = a.to_shifted_poly();
        if v >= 0 {
            RatFunc::new(p.shift(v as usize), QPoly::one())
        } else {
            RatFunc::new(p, QPoly::monomial(BigRational::one(), (-v) as usize))
        }
    }

    /// Convert back to a Laurent polynomial when the denominator is a
    /// power of `q`.
    pub fn to_laurent(&self) -> Option<QLaurent> {
        let d = self.den.degree().unwrap();
        if self.den != QPoly::monomial(BigRational::one(), d) {
            return None;
        }
        Some(QLaurent::from_shifted_poly(-(d as i64), &self.num))
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            None
        } else {
            Some(RatFunc::new(self.den.clone(), self.num.clone()))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == QPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_roundtrip_and_reduction() {
        let a = QLaurent::from_pairs(&[(-2, 1), (1, 3)]);
        assert_eq!(RatFunc::from_laurent(&a).to_laurent().unwrap(), a);
        let x = RatFunc::new(QPoly::from_ints(&[-1, 0, 1]), QPoly::from_ints(&[-2, 2]));
        assert_eq!(x.numer(), &QPoly::from_coeffs(vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())]));
        assert_eq!(x.denom(), &QPoly::one());
        let y = RatFunc::new(QPoly::one(), QPoly::from_ints(&[1, 1]));
        assert!(y.to_laurent().is_none());
        assert_eq!(y.mul(&y.inv().unwrap()), RatFunc::one());
    }
}
