use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("factor index {index} out of range for {nfactors} factors")]
    BadFactorIndex { index: usize, nfactors: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("operator is not hermitian")]
    NotHermitian,
    #[error("operator is not unitary")]
    NonUnitary,
    #[error("schedule step {0} is not unitary")]
    NonUnitaryStep(usize),
    #[error("eigenbasis columns are not orthonormal")]
    NonOrthonormalBasis,
    #[error("dense solver failed to converge within the iteration cap")]
    NoConvergence,
    #[error("time index {t} out of range for clock dimension {n}")]
    TimeOutOfRange { t: usize, n: usize },
    #[error("phase index {k} out of range for clock dimension {n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("clock dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("spectrum does not satisfy U^N = 1: {0}")]
    NotCyclic(String),
    #[error("spectrum is not of the cyclic form E_0 + 2πk/N")]
    NotCyclicSpectrum,
    #[error("branches are not periodic with the requested period: {0}")]
    NotPeriodic(String),
    #[error("period {l} does not divide clock dimension {n}")]
    BadPeriod { l: usize, n: usize },
    #[error("branch states are neither pairwise parallel nor orthogonal: {0}")]
    NotClustered(String),
    #[error("system factors do not admit the requested A|B split: {0}")]
    BadSplit(String),
    #[error("operator is not a two-qubit (4x4) matrix")]
    NotTwoQubit,
    #[error("operator is not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("energy variance is zero")]
    ZeroVariance,
    #[error("invalid clock dimension {0}")]
    BadN(usize),
    #[error("branch coefficients are not normalized at t={0}")]
    NotNormalizedBranch(usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
