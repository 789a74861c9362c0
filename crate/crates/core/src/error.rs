use thiserror::Error;

/// Errors surfaced by the exact and numeric layers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("cannot invert a series whose constant term is zero")]
    ZeroConstantTerm,

    #[error("pole located at the origin: every pole p_i must be nonzero")]
    PoleAtOrigin,

    #[error("Laurent data of order {order} cannot supply derivative order {requested} (need order >= {requested} - 1)")]
    InsufficientLaurentOrder { order: usize, requested: usize },

    #[error("need at least {needed} usable coefficients for a radius estimate, got {got}")]
    InsufficientTerms { needed: usize, got: usize },

    #[error("vector field is singular at (x, gamma) = ({x}, {gamma})")]
    SingularPoint { x: f64, gamma: f64 },

    #[error("argument outside the admissible domain: {0}")]
    DomainError(String),

    #[error("no bracket: both probe trajectories classify as {0}")]
    NoBracket(&'static str),

    #[error("no sign change of the polynomial on ({lo}, {hi})")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("unknown residue label: {0}")]
    UnknownResidue(String),

    #[error("{0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
