use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported matrix dimension {0} (supported: 1..=4)")]
    UnsupportedDim(usize),

    #[error("dimension mismatch: {0}x{0} vs {1}x{1}")]
    DimMismatch(usize, usize),

    #[error("matrix is not Hermitian (‖M − M†‖_F = {0:e})")]
    NotHermitian(f64),

    #[error("function undefined at eigenvalue {0:e}")]
    DomainError(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid state derivative: {0}")]
    InvalidDerivative(String),

    #[error(
        "no SLD vanishing on the kernel exists: derivative element {magnitude:e} \
         between eigenvectors ({m}, {n}) with eigenvalue sum below threshold"
    )]
    KernelObstruction { m: usize, n: usize, magnitude: f64 },

    #[error("bad quadrature parameters: s_max = {s_max}, panels = {panels}")]
    BadQuadrature { s_max: f64, panels: usize },

    #[error("outcome {index} has vanishing probability but nonvanishing sensitivity {sensitivity:e}")]
    SingularOutcome { index: usize, sensitivity: f64 },

    #[error("Fisher information must be positive (got {0})")]
    NonpositiveFisher(f64),

    #[error("measurement count must be at least 1")]
    ZeroMeasurements,

    #[error("parameter {value} ± {step} leaves the family domain [{lo}, {hi}]")]
    DomainEdge { value: f64, step: f64, lo: f64, hi: f64 },

    #[error("time must be nonnegative (got {0})")]
    NegativeTime(f64),

    #[error("decoherence rate must be nonnegative (got {0})")]
    NegativeRate(f64),

    #[error("integrator needs at least one step")]
    ZeroSteps,

    #[error("trace drifted by {0:e} during integration")]
    TraceDrift(f64),

    #[error("mixing angle {0} is degenerate (tan/cot diverge)")]
    DegenerateAngle(f64),

    #[error("invalid oscillation parameters: {0}")]
    InvalidConfig(String),

    #[error("embedded state is mixed (purity {0}); use the logarithmic negativity")]
    MixedStateUnsupported(f64),

    #[error("QFI routes disagree: Tr[ρL²] = {trace_rho_l2}, Tr[∂ρ L] = {trace_drho_l}")]
    InconsistentQfi { trace_rho_l2: f64, trace_drho_l: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
