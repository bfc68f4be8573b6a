//! Quantum moment maps out of `O_q(GL_2)`: into `D_q(C^2)` by
//! `L -> [1 + d2 x2, d2 x1; d1 x2, 1 + x1 d1]` and into `D_q(GL_2)` by the
//! group commutator `D X^-1 D^-1 X`, with their Frobenius restrictions.

mod inverse;
mod matrix;
mod mu;
mod phi;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::center::CenterError;
use crate::coefficients::{CoeffError, CoeffRing, GenericQ};
use crate::engine::{Algebra, EngineError, OreFraction, OreOp};
use crate::expr::{format_element, format_fraction, format_sum, ExprError, Style};
use crate::presentations::{FreeElem, PresentationError};

pub use inverse::{lift_fraction, matrix_inverse_q, FractionMatrix};
pub use matrix::{adjugate, det, identity, inverse, mat_mul, Arith, CommPoly, Mat2, PolyRing};
pub use mu::{
    check_assignment, classical_mu, diagram_check_mu, mu_frobenius, mu_hom, mu_images, mu_q, DiagramReport, FrobeniusCheck, Identification,
    MU_IMAGES, MU_IMAGES_UNSCALED,
};
pub use phi::{classical_phi, phi_frobenius_check, phi_q, PhiDeterminant, PhiFrobeniusReport, PhiMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentMapError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Center(#[from] CenterError),
    #[error("relation {0} does not map to zero")]
    RelationFailure(String),
    #[error("no inverse with ansatz degree up to {0}")]
    NoSolution(usize),
    #[error("singular input matrix")]
    SingularInput,
    #[error("level {0} is beyond the supported bound")]
    ResourceBound(u32),
    #[error("{0}")]
    Mismatch(String),
}

/// One defining relation of the source and its image.
#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub image: String,
    pub holds: bool,
}

/// A homomorphism given by generator images, with per-relation transcripts.
#[derive(Debug, Clone, Serialize)]
pub struct HomReport {
    pub source: String,
    pub target: String,
    pub images: Vec<(String, String)>,
    pub relations: Vec<RelationCheck>,
    /// Extra identities, e.g. the image of the determinant.
    pub checks: Vec<(String, bool)>,
}

impl HomReport {
    pub fn verified(&self) -> bool {
        self.relations.iter().all(|r| r.holds) && self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Text of a relation given as a linear combination of words.
pub fn format_free(names: &[String], rel: &FreeElem) -> String {
    let terms = rel.iter().rev().map(|(w, c)| {
        let word: Vec<&str> = w.iter().map(|&g| names[g].as_str()).collect();
        (word.join("*"), c)
    });
    format_sum(&GenericQ, terms, Style::Ascii)
}

/// The defining relations `g_j g_i - rhs` of a presentation, one per rule.
pub fn rule_relations(pres: &crate::engine::Presentation) -> Vec<FreeElem> {
    pres.rules()
        .iter()
        .map(|(&(j, i), rhs)| {
            let mut rel = FreeElem::new();
            rel.insert(vec![j, i], crate::coefficients::QLaurent::one());
            for (m, c) in rhs.terms() {
                let w: Vec<usize> = m.word().collect();
                let e = rel.entry(w).or_insert_with(crate::coefficients::QLaurent::zero);
                *e -= c;
            }
            rel.retain(|_, c| !c.is_zero());
            rel
        })
        .collect()
}

/// Evaluate a word combination on images.
pub fn apply_free<R: CoeffRing>(
    alg: &Algebra<R>,
    images: &[OreFraction<R::Elem>],
    rel: &FreeElem,
) -> Result<OreFraction<R::Elem>, EngineError> {
    let ring = alg.ring();
    let mut total = OreFraction::from_element(alg.zero());
    for (w, c) in rel {
        let mut acc = OreFraction::from_element(alg.one());
        for &g in w {
            acc = alg.ore_mul(&acc, &images[g])?;
        }
        acc.numerator = acc.numerator.scale(ring, &ring.from_laurent(c));
        total = alg.ore_arith(&total, &acc, OreOp::Add)?;
    }
    Ok(total)
}

/// Check that each relation maps to zero, in parallel.
pub fn verify_relations<R: CoeffRing>(
    alg: &Algebra<R>,
    source_names: &[String],
    images: &[OreFraction<R::Elem>],
    relations: &[FreeElem],
) -> Result<Vec<RelationCheck>, EngineError> {
    relations
        .par_iter()
        .map(|rel| {
            let img = apply_free(alg, images, rel)?;
            Ok(RelationCheck {
                relation: format_free(source_names, rel),
                image: show_fraction(alg, &img),
                holds: img.numerator.is_zero(),
            })
        })
        .collect()
}

pub(crate) fn show_fraction<R: CoeffRing>(alg: &Algebra<R>, f: &OreFraction<R::Elem>) -> String {
    match f.as_element() {
        Some(e) => format_element(alg.ring(), alg.presentation().generators(), e, Style::Ascii),
        None => format_fraction(alg.ring(), alg.presentation(), f, Style::Ascii),
    }
}

/// Entry arithmetic on elements of an algebra, for matrices over it.
pub struct ElementArith<'a, R: CoeffRing>(pub &'a Algebra<R>);

impl<R: CoeffRing> Arith for ElementArith<'_, R> {
    type T = crate::engine::NCElement<R::Elem>;
    fn zero(&self) -> Self::T {
        self.0.zero()
    }
    fn one(&self) -> Self::T {
        self.0.one()
    }
    fn add(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.0.add(a, b)
    }
    fn sub(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.0.sub(a, b)
    }
    fn mul(&self, a: &Self::T, b: &Self::T) -> Self::T {
        self.0.mul(a, b)
    }
    fn is_zero(&self, a: &Self::T) -> bool {
        a.is_zero()
    }
}
