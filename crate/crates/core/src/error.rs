use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("the polynomial has a nonzero constant term; the germ must vanish at the origin")]
    ConstantTerm,
    #[error("all terms cancel; the support is empty")]
    EmptySupport,
    #[error("too many variables: {0} (at most {max})", max = crate::MAX_VARS)]
    TooManyVariables(usize),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("invalid weight {0}: weights must lie in the open interval (0, 1)")]
    InvalidWeight(String),
    #[error("the Newton polyhedron is not convenient (no support point on axis {axis})")]
    NotConvenient { axis: usize },
    #[error("Newton-diagram formulas need the non-degeneracy assumption; pass it explicitly")]
    RefusedWithoutNondegeneracyFlag,
    #[error("polynomial division is not exact: {0}")]
    NonExactDivision(String),
    #[error("negative multiplicity {multiplicity} at exponent {exponent}")]
    NegativeMultiplicity { exponent: String, multiplicity: String },
    #[error("k = {k} does not kill the monodromy: k*(1 - {exponent}) is not an integer")]
    MonodromyOrder { k: u64, exponent: String },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("expected dimension {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("independent computations disagree for {what}: {left} vs {right}")]
    MethodMismatch {
        what: String,
        left: String,
        right: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
