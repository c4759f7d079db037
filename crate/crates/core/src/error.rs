use thiserror::Error;

/// Failures surfaced by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a Lie element: remainder supported on {0}")]
    NotALieElement(String),
    #[error("not a Lie coalgebra: d^2 != 0 on {0}")]
    NotACoLieCoalgebra(String),
    #[error("inconsistent structure tables: d^2 != 0 on {0}")]
    TableInconsistency(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("invalid bar element: {0}")]
    InvalidElement(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("linear system infeasible: {0}")]
    Infeasible(String),
    #[error("identity violated: {0}")]
    IdentityViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
