use std::collections::HashMap;

use crate::coefficients::CoeffRing;

use super::{Algebra, EngineError, NCElement, OreFraction};

/// Algebra map given by the images of the source generators, landing in
/// Ore fractions of a target algebra.
#[derive(Debug, Clone)]
pub struct AlgebraHom<E> {
    pub source_generators: Vec<String>,
    pub images: Vec<OreFraction<E>>,
}

impl<E: Clone + PartialEq> AlgebraHom<E> {
    pub fn new(source_generators: Vec<String>, images: Vec<OreFraction<E>>) -> Result<Self, EngineError> {
        if images.len() < source_generators.len() {
            return Err(EngineError::MissingImage(source_generators[images.len()].clone()));
        }
        Ok(AlgebraHom {
            source_generators,
            images,
        })
    }
}

impl<R: CoeffRing> Algebra<R> {
    /// Substitute generator images into `elem` (a source element written
    /// with the same coefficient ring) and normalize in `self`.
    pub fn apply_hom(
        &self,
        hom: &AlgebraHom<R::Elem>,
        elem: &NCElement<R::Elem>,
    ) -> Result<OreFraction<R::Elem>, EngineError> {
        let ring = self.ring();
        for (m, c) in elem.terms() {
            if !ring.owns(c) {
                return Err(EngineError::ModeMismatch {
                    expected: ring.mode().to_string(),
                });
            }
            if m.ngens() > hom.images.len() {
                return Err(EngineError::MissingImage(format!("#{}", hom.images.len())));
            }
        }
        let mut powers: HashMap<(usize, u32), OreFraction<R::Elem>> = HashMap::new();
        let mut total = OreFraction::from_element(NCElement::zero());
        for (m, c) in elem.terms() {
            let mut acc = OreFraction::from_element(self.one());
            for (g, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = match powers.get(&(g, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let mut p = OreFraction::from_element(self.one());
                        for _ in 0..e {
                            p = self.ore_mul(&p, &hom.images[g])?;
                        }
                        powers.insert((g, e), p.clone());
                        p
                    }
                };
                acc = self.ore_mul(&acc, &p)?;
            }
            acc.numerator = acc.numerator.scale(ring, c);
            total = self.ore_arith(&total, &acc, super::OreOp::Add)?;
        }
        Ok(total)
    }
}
