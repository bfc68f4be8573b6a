//! Arithmetic in `Q(zeta_l)` for odd `l`, realized as `Q[q] / Phi_l(q)`.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::laurent::QLaurent;
use super::poly::{format_q_terms, QPoly};
use super::CoeffError;

/// The `n`-th cyclotomic polynomial for any `n >= 1`.
fn cyclotomic_any(n: u32) -> QPoly {
    // q^n - 1 divided by Phi_d for every proper divisor d of n.
    let mut p = &QPoly::monomial(BigRational::one(), n as usize) - &QPoly::one();
    for d in 1..n {
        if n % d == 0 {
            let (quot, rem) = p.div_rem(&cyclotomic_any(d));
            debug_assert!(rem.is_zero());
            p = quot;
        }
    }
    p
}

/// `Phi_l(q)` for odd `l > 1`.
pub fn cyclotomic(level: u32) -> Result<QPoly, CoeffError> {
    if level <= 1 || level % 2 == 0 {
        return Err(CoeffError::BadLevel(level));
    }
    Ok(cyclotomic_any(level))
}

/// An element of `Q(zeta_l)`: a residue of degree `< phi(l)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    residue: QPoly,
    level: u32,
}

impl CycNumber {
    pub fn residue(&self) -> &QPoly {
        &self.residue
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// If this is a rational number, return it.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.residue.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.residue.coeff(0)),
            _ => None,
        }
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc{}({})", self.level, self.residue)
    }
}

/// `Q(zeta_l)` with its defining modulus.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    level: u32,
    modulus: Arc<QPoly>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level
    }
}

impl CyclotomicField {
    pub fn new(level: u32) -> Result<Self, CoeffError> {
        Ok(CyclotomicField {
            level,
            modulus: Arc::new(cyclotomic(level)?),
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    /// `phi(l)`, the degree of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    fn wrap(&self, p: QPoly) -> CycNumber {
        let residue = if p.degree().is_some_and(|d| d >= self.degree()) {
            p.rem(&self.modulus)
        } else {
            p
        };
        CycNumber {
            residue,
            level: self.level,
        }
    }

    pub fn zero(&self) -> CycNumber {
        self.wrap(QPoly::zero())
    }

    pub fn one(&self) -> CycNumber {
        self.wrap(QPoly::one())
    }

    pub fn rational(&self, r: BigRational) -> CycNumber {
        self.wrap(QPoly::constant(r))
    }

    /// `zeta^k`, using `zeta^l = 1`.
    pub fn q_pow(&self, k: i64) -> CycNumber {
        let e = k.rem_euclid(self.level as i64) as usize;
        self.wrap(QPoly::monomial(BigRational::one(), e))
    }

    /// Image of a Laurent polynomial under `q -> zeta_l`.
    pub fn specialize(&self, a: &QLaurent) -> CycNumber {
        let l = self.level as i64;
        let mut coeffs = vec![BigRational::zero(); self.level as usize];
        for (k, c) in a.terms() {
            coeffs[k.rem_euclid(l) as usize] += c;
        }
        self.wrap(QPoly::from_coeffs(coeffs))
    }

    pub fn add(&self, a: &CycNumber, b: &CycNumber) -> CycNumber {
        CycNumber {
            residue: &a.residue + &b.residue,
            level: self.level,
        }
    }

    pub fn sub(&self, a: &CycNumber, b: &CycNumber) -> CycNumber {
        CycNumber {
            residue: &a.residue - &b.residue,
            level: self.level,
        }
    }

    pub fn neg(&self, a: &CycNumber) -> CycNumber {
        CycNumber {
            residue: -&a.residue,
            level: self.level,
        }
    }

    /// Product, reduced modulo `Phi_l` immediately.
    pub fn mul(&self, a: &CycNumber, b: &CycNumber) -> CycNumber {
        self.wrap(&a.residue * &b.residue)
    }

    pub fn inv(&self, a: &CycNumber) -> Option<CycNumber> {
        if a.is_zero() {
            return None;
        }
        // Phi_l is irreducible, so gcd(a, Phi_l) = 1.
        let (g, s, _) = QPoly::ext_gcd(&a.residue, &self.modulus);
        debug_assert_eq!(g, QPoly::one());
        Some(self.wrap(s))
    }

    pub fn format(&self, a: &CycNumber) -> String {
        let terms: Vec<(i64, BigRational)> = a
            .residue
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i64, c.clone()))
            .collect();
        format_q_terms(&terms)
    }
}

/// Image of `a` at a primitive `l`-th root of unity.
pub fn specialize(a: &QLaurent, level: u32) -> Result<CycNumber, CoeffError> {
    Ok(CyclotomicField::new(level)?.specialize(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(3).unwrap(), QPoly::from_ints(&[1, 1, 1]));
        assert_eq!(cyclotomic(5).unwrap(), QPoly::from_ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn phi_nine_by_division() {
        // Oracle: (q^9 - 1) / (q^3 - 1).
        let num = QPoly::from_ints(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let den = QPoly::from_ints(&[-1, 0, 0, 1]);
        let (quot, rem) = num.div_rem(&den);
        assert!(rem.is_zero());
        assert_eq!(quot, QPoly::from_ints(&[1, 0, 0, 1, 0, 0, 1]));
        assert_eq!(cyclotomic(9).unwrap(), quot);
    }

    #[test]
    fn bad_levels() {
        for l in [0, 1, 2, 4, 10] {
            assert!(matches!(cyclotomic(l), Err(CoeffError::BadLevel(_))));
        }
    }

    #[test]
    fn specialize_examples() {
        let f = CyclotomicField::new(3).unwrap();
        assert_eq!(f.specialize(&QLaurent::q_pow(3)), f.one());
        assert!(f.specialize(&QLaurent::from_pairs(&[(2, 1), (1, 1), (0, 1)])).is_zero());
        for l in [3u32, 5, 7, 9] {
            let f = CyclotomicField::new(l).unwrap();
            for n in 1..=3 * l as i64 {
                let x = f.specialize(&QLaurent::from_pairs(&[(2 * n, 1), (0, -1)]));
                assert_eq!(x.is_zero(), n % l as i64 == 0, "l={l} n={n}");
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let f = CyclotomicField::new(5).unwrap();
        let a = f.specialize(&QLaurent::from_pairs(&[(3, 2), (1, -1), (0, 7)]));
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), f.one());
        assert!(f.inv(&f.zero()).is_none());
    }
}
