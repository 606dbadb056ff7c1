use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("F_(kn) is not divisible by F_k (k = {k}, n = {n}): divisor table is corrupt")]
    DivisibilityViolation { k: u32, n: u64 },

    #[error("degenerate (p, q) bases: p == q == {0}")]
    DegenerateBases(f64),

    #[error("golden derivative is singular at x = 0")]
    SingularPoint,

    #[error("golden exponential did not converge within {terms} terms")]
    NonConvergence { terms: usize },

    #[error("cutoff {dim} is too small (need at least {min})")]
    CutoffTooSmall { dim: usize, min: usize },

    #[error("level k = {0} is not allowed here (odd k required)")]
    InvalidLevel(u32),

    #[error("operator is not block-diagonal (off-diagonal max |entry| = {0:e})")]
    NotBlockDiagonal(f64),

    #[error("index {n} out of range for cutoff {dim}")]
    IndexOutOfRange { n: usize, dim: usize },

    #[error("energy-ratio iterate hit zero at step {step}")]
    DivisionByZero { step: usize },

    #[error("adaptive cutoff exceeded the cap of {cap}")]
    CutoffCapExceeded { cap: usize },

    #[error("closed-form normalizer {closed} disagrees with direct norm {direct}")]
    NormalizerMismatch { closed: f64, direct: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("invalid spectrum: eigenvalue {0:e} is negative")]
    InvalidSpectrum(f64),

    #[error("real-amplitude state required")]
    ComplexInput,

    #[error("|beta| = {0} is outside the supported range")]
    RangeUnsupported(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("invalid Bloch point (theta = {theta}, phi = {phi})")]
    InvalidBlochPoint { theta: f64, phi: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
