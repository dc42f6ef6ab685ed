use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not a diffeomorphism: derivative {0}")]
    NotDiffeomorphism(String),
    #[error("normalization violated: phi(0) = {value}")]
    NormalizationViolated { value: f64 },
    #[error("range violated: |phi| reaches {value}")]
    RangeViolated { value: f64 },
    #[error("near-singular derivative: |phi'| = {value:e} at y = {at}")]
    NearSingular { value: f64, at: f64 },
    #[error("degenerate normalization: |s| = {value:e}")]
    DegenerateNormalization { value: f64 },
    #[error("map is not monotone on its stated domain: {0}")]
    NotMonotone(String),
    #[error("inconsistent detection: {0}")]
    InconsistentDetection(String),
    #[error("operator degeneracy: {0}")]
    OperatorDegeneracy(String),
    #[error("empty renormalization orbit")]
    EmptyOrbit,
    #[error("no superstable parameter found: {0}")]
    NotFound(String),
    #[error("inconsistent anchor: {0}")]
    InconsistentAnchor(String),
    #[error("type predicate not bracketed: {0}")]
    NotBracketed(String),
    #[error("iteration budget exceeded: period {period} > {budget}")]
    BudgetExceeded { period: usize, budget: usize },
    #[error("combinatorial mismatch at level {level}: {detail}")]
    CombinatorialMismatch { level: usize, detail: String },
    #[error("corrupted geometry at level {level}: {detail}")]
    CorruptedGeometry { level: usize, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
