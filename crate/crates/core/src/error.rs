use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("term has {got} labels but the state has {expected} modes")]
    LabelCount { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate state: norm {norm:e} is below the singular tolerance")]
    DegenerateState { norm: f64 },

    #[error("gate wiring: {0}")]
    GateWiring(String),

    #[error("measurement wiring: {0}")]
    MeasurementWiring(String),

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("mode {mode} violates the {{+g, -g, 0}} label grid; class heralding is not pure")]
    HeterogeneousClass { mode: usize },

    #[error("heralded state differs between counts in the same class (fidelity {fidelity})")]
    InconsistentHerald { fidelity: f64 },

    #[error("no correction is defined for an ambiguous detection pattern")]
    NoCorrectionDefined,

    #[error("state does not factor across the requested split (fidelity {fidelity})")]
    Factorization { fidelity: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cutoff {cutoff} too small: tail mass {tail:e} exceeds {eps:e}; try cutoff {suggested}")]
    CutoffTooSmall {
        cutoff: usize,
        tail: f64,
        eps: f64,
        suggested: usize,
    },
}
