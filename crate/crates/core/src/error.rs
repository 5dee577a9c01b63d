use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count must be at least 1")]
    NoModes,
    #[error("mode index {mode} out of range for {modes} mode(s)")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("occupation vector has length {found}, expected {expected}")]
    OccupationLength { expected: usize, found: usize },
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("state is not normalized (norm {norm:.3e})")]
    NotNormalized { norm: f64 },
    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("trace is {trace:.3e}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("diagonal entry {value:.3e} is negative or has imaginary part")]
    BadDiagonal { value: f64 },
    #[error("matrix contains NaN entries")]
    NotANumber,
    #[error("picture {picture} is not compatible with a {kind} input")]
    PictureMismatch { picture: &'static str, kind: &'static str },
    #[error("closed forms are only tabulated for pure states (ket or ketbra picture)")]
    MixedClosedForm,
    #[error("NOON row requires N >= 3, got {0}")]
    NoonTooSmall(u32),
    #[error("one-mode superposition needs at least two nonzero terms")]
    SuperpositionTooSmall,
    #[error("probe list is empty")]
    EmptyProbes,
    #[error("truncation leakage {leakage:.3e} exceeds tolerance {tolerance:.3e}")]
    Leakage { leakage: f64, tolerance: f64 },
    #[error("generator index {index} out of range for a basis of {dim}")]
    GeneratorIndex { index: usize, dim: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
