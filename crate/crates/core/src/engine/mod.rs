//! PBW normal forms for presented algebras, confluence checks, Ore
//! fractions with scalar-commuting denominators, and homomorphisms.

mod algebra;
mod confluence;
mod element;
mod hom;
mod ore;
mod presentation;

use thiserror::Error;

pub use algebra::Algebra;
pub use confluence::{check_confluence, Overlap};
pub use element::{Monomial, NCElement};
pub use hom::AlgebraHom;
pub use ore::{Denominator, OreFraction, OreOp};
pub use presentation::{Presentation, ScalarCommuter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("coefficient mode mismatch: algebra is {expected}, element is not")]
    ModeMismatch { expected: String },
    #[error("no rewrite rule for {0}*{1}")]
    MissingRule(String, String),
    #[error("malformed rule {0}")]
    BadRule(String),
    #[error("rule for {0}*{1} is not homogeneous for the grading")]
    InhomogeneousGrading(String, String),
    #[error("{name} does not q-commute as declared with {probe}")]
    CommuterMismatch { name: String, probe: String },
    #[error("denominator {0} is not a registered scalar commuter")]
    UnregisteredDenominator(String),
    #[error("cannot add fractions whose denominators differ by an odd power of {0}")]
    ParityMismatch(String),
    #[error("homomorphism is missing an image for generator {0}")]
    MissingImage(String),
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
}
