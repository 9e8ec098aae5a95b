use thiserror::Error;

pub type Result<T, E = RicciError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RicciError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("edge index {0} out of range")]
    UnknownEdge(usize),

    #[error("metric has {found} weights but graph has {expected} edges")]
    MetricLength { expected: usize, found: usize },

    #[error("weight of edge {edge} must be positive and finite, got {value}")]
    NonPositiveWeight { edge: usize, value: f64 },

    #[error("epsilon {epsilon} too large at vertex `{vertex}`: needs epsilon < 1/Deg = {limit}")]
    EpsilonTooLarge { vertex: String, epsilon: f64, limit: f64 },

    #[error("metric is degenerate on edge {edge}: weight {weight} >= alternative distance {alternative}")]
    DegenerateMetric { edge: usize, weight: f64, alternative: f64 },

    #[error("graph becomes disconnected after removing edge {edge} at t = {time}")]
    DisconnectedAfterSurgery { time: f64, edge: String },

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("simplex exceeded {0} pivots")]
    LpIterationLimit(usize),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("largest eigenvalue is not simple: gap {gap:e}")]
    DegenerateSpectrum { gap: f64 },

    #[error("Perron vector has a non-positive entry {value:e} at index {index}")]
    PerronVectorNotPositive { index: usize, value: f64 },

    #[error("step size too large: weights stayed non-positive after {halvings} halvings at t = {time}")]
    StepSizeTooLarge { time: f64, halvings: usize },

    #[error("weights overflow at t = {0}")]
    Overflow(f64),

    #[error("graph is not a tree")]
    NotATree,

    #[error("graph does not carry uniform measures")]
    NotUniformMeasure,

    #[error("trajectory needs at least 3 samples, got {0}")]
    TooFewSamples(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl RicciError {
    /// True for errors caused by bad input rather than by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            RicciError::InvalidGraph(_)
                | RicciError::InvalidParameter(_)
                | RicciError::UnknownVertex(_)
                | RicciError::UnknownEdge(_)
                | RicciError::MetricLength { .. }
                | RicciError::NonPositiveWeight { .. }
                | RicciError::EpsilonTooLarge { .. }
                | RicciError::DegenerateMetric { .. }
                | RicciError::NotATree
                | RicciError::NotUniformMeasure
                | RicciError::TooFewSamples(_)
                | RicciError::Parse { .. }
        )
    }
}
