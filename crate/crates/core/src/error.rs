use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit is not normalized: |alpha|^2 + |beta|^2 = {norm_sq}")]
    UnnormalizedQubit { norm_sq: f64 },

    #[error("negative or non-finite parameter `{name}` = {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("basis has excitation {basis}, but the requested state carries {requested}")]
    ExcitationMismatch { basis: u32, requested: u32 },

    #[error("expected {expected} phases (one per atom), got {got}")]
    PhaseCount { expected: usize, got: usize },

    #[error("state vectors or operators live on different bases")]
    BasisMismatch,

    #[error("nonzero cycling field requires the metastable level in the basis")]
    BiasWithoutMetastable,

    #[error("bias G'2 = {0} is degenerate; use the unbiased solution")]
    DegenerateBias(f64),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("integrator step size underflow at tau = {tau} (step {step})")]
    StepUnderflow { tau: f64, step: f64 },

    #[error("time grid is not sorted ascending at index {0}")]
    UnsortedGrid(usize),

    #[error("Fock conversion supports at most {cap} photons, got {got}")]
    PhotonCapExceeded { cap: u32, got: u32 },

    #[error("probability of the empty field p(0,0) = {0} is nonzero")]
    VacuumProbability(f64),

    #[error("quadrature order {got} is below the minimum {min}")]
    QuadratureOrder { got: usize, min: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}
