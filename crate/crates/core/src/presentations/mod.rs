//! The concrete algebras: `D_q(C^N)`, quantum affine space, the reflection
//! equation algebra `O_q(GL_2)` and `D_q(GL_2)`, plus identity catalogs.

mod catalog;
mod gl2;
mod rmatrix;
mod weyl;

use thiserror::Error;

use crate::engine::EngineError;

pub use catalog::{
    builtin_catalog, builtin_catalogs, instantiate, verify_catalog, Bounds, Catalog, CatalogReport, IdentityRecord,
    InstanceResult, RangeEnd, CATALOG_SCHEMA,
};
pub use gl2::{
    dq_gl2, dq_gl2_plus, dq_gl2_relations, embed_oq, gl2_generator_names, oq_gl2, oq_gl2_plus, oq_relations,
    quantum_det, quantum_trace, CROSS_RELATION, D, D_RELATION, L, REFLECTION_EQUATION, X, X_RELATION,
};
pub use rmatrix::{expand_matrix_relation, parse_template, relations_to_rules, FreeElem, MatrixFactor, RMatrix};
pub use weyl::{act, beta, beta_weights, d_index, dq_cn, dq_cn_with_roots, oq_cn, x_index};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("R-matrix is not invertible over Laurent polynomials")]
    SingularR,
    #[error("bad matrix template token {0}")]
    BadTemplate(String),
    #[error("relation is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("relations do not orient to PBW rules: {0}")]
    Degenerate(String),
    #[error("rule coefficient for {0} is not a Laurent polynomial")]
    NonLaurent(String),
    #[error("unknown algebra {0}")]
    UnknownAlgebra(String),
    #[error("catalog {0}: {1}")]
    Catalog(String, String),
}

/// Presentation by short name: `dq<N>`, `dq<N>roots`, `oq<N>`, `oq_gl2`,
/// `oq_gl2_plus`, `dq_gl2`, `dq_gl2_plus`.
pub fn by_name(name: &str) -> Result<crate::engine::Presentation, PresentationError> {
    match name {
        "oq_gl2" => oq_gl2(),
        "oq_gl2_plus" => oq_gl2_plus(),
        "dq_gl2" => dq_gl2(),
        "dq_gl2_plus" => dq_gl2_plus(),
        _ => {
            let parse = |prefix: &str, suffix: &str| {
                name.strip_prefix(prefix)
                    .and_then(|r| r.strip_suffix(suffix))
                    .and_then(|r| r.parse::<usize>().ok())
            };
            if let Some(n) = parse("dq", "roots") {
                dq_cn_with_roots(n)
            } else if let Some(n) = parse("dq", "") {
                dq_cn(n)
            } else if let Some(n) = parse("oq", "") {
                oq_cn(n)
            } else {
                Err(PresentationError::UnknownAlgebra(name.to_string()))
            }
        }
    }
}
