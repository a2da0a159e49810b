use thiserror::Error;

/// Errors produced by the library.
///
/// Numerical routines report the tolerance they actually achieved so callers
/// can decide whether a degraded result is still usable.
#[derive(Debug, Error)]
pub enum QceError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureNotConverged { achieved: f64, requested: f64 },

    #[error("potential is not confining: integral diverges ({0})")]
    DivergentPotential(String),

    #[error(
        "QCE(1) breakdown: partition function non-positive (Z = {z:.6e}) at beta = {beta:.6e}, \
         V_eff = {veff:.6e}, N = {n}"
    )]
    QceBreakdown { z: f64, beta: f64, veff: f64, n: u32 },

    #[error("pressure is non-monotonic in V_eff at this point; report dP/dV directly")]
    NonMonotonePressure,

    #[error("level list incomplete: e^(-beta E_max) = {tail:.3e} not below {bound:.3e} * Z")]
    IncompleteLevelList { tail: f64, bound: f64 },

    #[error("Bethe solver did not converge for quantum numbers {quantum_numbers:?}")]
    BetheNotConverged { quantum_numbers: Vec<f64> },

    #[error("basis extrapolation not converged: estimates {trend:?}")]
    ExtrapolationNotConverged { trend: Vec<f64> },

    #[error("Talbot contour evaluation did not converge at epsilon = {epsilon:.6e}")]
    ContourNotConverged { epsilon: f64 },

    #[error("missing ground-state provider: {0}")]
    MissingProvider(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QceError>;
