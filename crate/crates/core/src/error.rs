use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants that come from a failed numerical test carry the measured
/// residual together with the threshold it was compared against.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KFrameError {
    #[error("input contains NaN or infinite entries")]
    NonFiniteInput,
    #[error("matrix has no entries ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("singular value decomposition did not converge")]
    DecompositionFailed,
    #[error("range inclusion fails: residual {residual:e} > threshold {threshold:e}")]
    RangeNotIncluded { residual: f64, threshold: f64 },
    #[error("restriction is rank deficient: rank {rank} on a subspace of dimension {dim}")]
    RankDeficientRestriction { rank: usize, dim: usize },
    #[error("operator is not invertible (smallest singular value {sigma_min:e})")]
    NotInvertible { sigma_min: f64 },
    #[error("not a K-frame: R(K) is not contained in R(T_F) (residual {residual:e} > {threshold:e})")]
    NotKFrame { residual: f64, threshold: f64 },
    #[error("K is the zero operator")]
    ZeroOperator,
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("{count} vectors cannot be indexed by an orthonormal set in dimension {dim}")]
    IndexExceedsDimension { count: usize, dim: usize },
    #[error("sequence is not minimal: synthesis operator has rank {rank} < {count}")]
    NotMinimal { rank: usize, count: usize },
    #[error("perturbation is inadmissible: |pi_R(K) T_F phi| = {violation:e} > {threshold:e}")]
    InadmissiblePerturbation { violation: f64, threshold: f64 },
    #[error("not a K-dual: residual {residual:e} > threshold {threshold:e}")]
    NotADual { residual: f64, threshold: f64 },
    #[error("coefficients do not represent the canonical expansion: residual {residual:e} > {threshold:e}")]
    NotARepresentation { residual: f64, threshold: f64 },
    #[error("symbol is not semi-normalized: {0}")]
    NotSemiNormalized(String),
    #[error("multiplier has no K-right inverse: residual {residual:e} > {threshold:e}")]
    NoRightInverse { residual: f64, threshold: f64 },
    #[error("multiplier has no K-left inverse: residual {residual:e} > {threshold:e}")]
    NoLeftInverse { residual: f64, threshold: f64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("not a K-inverse: residual {residual:e} > threshold {threshold:e}")]
    NotAnInverse { residual: f64, threshold: f64 },
    #[error("perturbation condition violated: rho {rho:e} > tau {tau:e}")]
    ConditionViolated { rho: f64, tau: f64 },
    #[error("multiplier restricted to R(K) is singular (smallest singular value {sigma_min:e})")]
    RestrictionSingular { sigma_min: f64 },
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

impl KFrameError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        use KFrameError::*;
        match self {
            NonFiniteInput => "non_finite_input",
            EmptyMatrix { .. } => "empty_matrix",
            ShapeMismatch(_) => "shape_mismatch",
            DecompositionFailed => "decomposition_failed",
            RangeNotIncluded { .. } => "range_not_included",
            RankDeficientRestriction { .. } => "rank_deficient_restriction",
            NotInvertible { .. } => "not_invertible",
            NotKFrame { .. } => "not_k_frame",
            ZeroOperator => "zero_operator",
            InvalidBounds(_) => "invalid_bounds",
            IndexExceedsDimension { .. } => "index_exceeds_dimension",
            NotMinimal { .. } => "not_minimal",
            InadmissiblePerturbation { .. } => "inadmissible_perturbation",
            NotADual { .. } => "not_a_dual",
            NotARepresentation { .. } => "not_a_representation",
            NotSemiNormalized(_) => "not_semi_normalized",
            NoRightInverse { .. } => "no_right_inverse",
            NoLeftInverse { .. } => "no_left_inverse",
            HypothesisNotMet(_) => "hypothesis_not_met",
            NotAnInverse { .. } => "not_an_inverse",
            ConditionViolated { .. } => "condition_violated",
            RestrictionSingular { .. } => "restriction_singular",
            InternalConsistency(_) => "internal_consistency",
        }
    }

    /// Errors caused by malformed input rather than by a mathematical verdict.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            KFrameError::NonFiniteInput
                | KFrameError::EmptyMatrix { .. }
                | KFrameError::ShapeMismatch(_)
                | KFrameError::IndexExceedsDimension { .. }
        )
    }

    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            KFrameError::InternalConsistency(_) | KFrameError::DecompositionFailed
        )
    }
}

pub type Result<T> = std::result::Result<T, KFrameError>;
