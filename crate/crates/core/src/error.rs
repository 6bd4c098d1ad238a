use thiserror::Error;

/// Errors raised by the engine. All verdict-like outcomes (validation
/// failures, obstructions, inconclusive searches) are ordinary return
/// values; these are the hard failures.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different graded contexts")]
    MixedContexts,
    #[error("matrix does not map the source subspace into the target subspace")]
    MappingNotWellDefined,
    #[error("algebra is not minimal: generator {0} has a linear differential term")]
    NotMinimal(String),
    #[error("cutoff {given} too small, need at least {needed}")]
    CutoffTooSmall { given: usize, needed: usize },
    #[error("polynomial is not a cocycle")]
    NotACocycle,
    #[error("cohomology tables were computed at different cutoffs ({0} vs {1})")]
    CutoffMismatch(usize, usize),
    #[error("graded Lie algebra fails its axioms: {0}")]
    LieInvalid(String),
    #[error("differential is not purely quadratic on generator {0}")]
    NotQuadratic(String),
    #[error("seed assignment does not commute with the differentials: {0}")]
    SeedInvalid(String),
    #[error("restriction of the total differential disagrees with the base differential on {0}")]
    RestrictionMismatch(String),
    #[error("relative minimality violated: d({0}) has a bare fiber-linear term")]
    RelativeMinimalityViolation(String),
    #[error("d^2 != 0 on generator {0}")]
    DSquaredViolation(String),
    #[error("base differential is not purely quadratic")]
    BaseNotQuadratic,
    #[error("degree-gap hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("fiber quotient is not a sphere model")]
    NotSpherical,
    #[error("theta({0}) is not d1-closed; input algebra is invalid")]
    ClosednessViolation(String),
    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;
