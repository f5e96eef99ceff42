use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid too narrow: edge amplitude {edge:.3e} vs peak {peak:.3e}")]
    GridTooNarrow { edge: f64, peak: f64 },
    #[error("wave functions live on different grids")]
    GridMismatch,
    #[error("grid must be symmetric about zero for Fourier transforms")]
    AsymmetricGrid,
    #[error("state has vanishing norm (squared norm {weight:.3e})")]
    ZeroNorm { weight: f64 },
    #[error("ancilla with k = {k} cannot realize the monomial (k^2 - 2 vanishes)")]
    SingularAncilla { k: f64 },
    #[error("photon subtraction annihilates the ancilla")]
    ZeroAncilla,
    #[error("polynomial factorization residual {residual:.3e} exceeds tolerance")]
    IllConditioned { residual: f64 },
    #[error("analytic outcome density only covers coherent and Fock inputs")]
    UnsupportedInput,
    #[error("scan range is empty")]
    EmptyScanRange,
    #[error("outcome ensemble is empty")]
    EmptyEnsemble,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
