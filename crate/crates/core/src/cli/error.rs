use thiserror::Error;

use crate::center::CenterError;
use crate::coefficients::CoeffError;
use crate::engine::EngineError;
use crate::expr::ExprError;
use crate::fibers::FiberError;
use crate::momentmaps::MomentMapError;
use crate::poisson::PoissonError;
use crate::presentations::PresentationError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// A computation contradicted an expected identity.
    #[error("check failed: {0}")]
    Math(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Math(_) => 1,
            _ => 2,
        }
    }
}

impl From<CoeffError> for CliError {
    fn from(e: CoeffError) -> Self {
        match e {
            CoeffError::BadLevel(_) => CliError::Usage(e.to_string()),
            _ => CliError::Math(e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::NotDivisible(..)
            | EngineError::CommuterMismatch { .. }
            | EngineError::InhomogeneousGrading(..)
            | EngineError::ParityMismatch(_) => CliError::Math(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        match e {
            ExprError::Engine(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<PresentationError> for CliError {
    fn from(e: PresentationError) -> Self {
        match e {
            PresentationError::Engine(inner) => inner.into(),
            PresentationError::UnknownAlgebra(_) | PresentationError::Catalog(..) | PresentationError::BadTemplate(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<CenterError> for CliError {
    fn from(e: CenterError) -> Self {
        match e {
            CenterError::Engine(inner) => inner.into(),
            CenterError::Coeff(inner) => inner.into(),
            CenterError::Presentation(inner) => inner.into(),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<FiberError> for CliError {
    fn from(e: FiberError) -> Self {
        match e {
            FiberError::Coeff(inner) => inner.into(),
            FiberError::Presentation(inner) => inner.into(),
            FiberError::Engine(inner) => inner.into(),
            FiberError::Expr(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<MomentMapError> for CliError {
    fn from(e: MomentMapError) -> Self {
        match e {
            MomentMapError::Engine(inner) => inner.into(),
            MomentMapError::Coeff(inner) => inner.into(),
            MomentMapError::Presentation(inner) => inner.into(),
            MomentMapError::Expr(inner) => inner.into(),
            MomentMapError::Center(inner) => inner.into(),
            MomentMapError::ResourceBound(l) => CliError::Resource(format!("level {l}")),
            other => CliError::Math(other.to_string()),
        }
    }
}

impl From<PoissonError> for CliError {
    fn from(e: PoissonError) -> Self {
        match e {
            PoissonError::Presentation(inner) => inner.into(),
            PoissonError::Coeff(inner) => inner.into(),
            other => CliError::Math(other.to_string()),
        }
    }
}
