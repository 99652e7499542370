use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("time {t} lies outside the loop window [-{tau}, {tau}]")]
    OutOfWindow { t: f64, tau: f64 },

    #[error("all Rabi frequencies vanish; mixing angles are undefined")]
    DegeneratePoint,

    #[error("invalid loop specification: {0}")]
    InvalidSpec(String),

    #[error("frame discontinuity near the requested point (overlap defect {defect:.3e})")]
    GaugeJump { defect: f64 },

    #[error(
        "holonomy did not converge: successive refinements differ by {difference:.3e} \
         at {steps} steps (unitarity defect {defect:.3e})"
    )]
    Unconverged { difference: f64, defect: f64, steps: usize },

    #[error("norm drifted by {drift:.3e} with dt = {dt:.3e}; reduce the time step")]
    StepSize { drift: f64, dt: f64 },
}
