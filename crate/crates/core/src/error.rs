use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("amplitude count {len} is not a power of two")]
    BadAmplitudeCount { len: usize },

    #[error("state vector is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("projector vectors are not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },

    #[error("observable is malformed for this state: outcome probabilities sum to {total}")]
    IncompleteMeasurement { total: f64 },

    #[error("block state lies outside the logical subspace (residual probability {residual:e})")]
    OutsideLogicalSubspace { residual: f64 },

    #[error("unknown state name `{0}`")]
    UnknownState(String),

    #[error("{0} is not a four-qubit logical state")]
    NotLogicalState(String),

    #[error("illegal apple allotment: {0}")]
    IllegalAllotment(String),
}
