use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// `alpha = k0 / v >= 1`: substrate accumulates without bound.
    #[error("no stationary point: alpha = {alpha} >= 1 (influx exceeds the limiting rate)")]
    NoStationaryPoint { alpha: f64 },

    #[error("integration diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("step {step} exceeds t_C/10 = {limit} for the full mass-action field")]
    StepTooLarge { step: f64, limit: f64 },

    #[error("|det(DfP)| = {det} is below the hyperbolicity threshold {threshold}")]
    LossOfHyperbolicity { det: f64, threshold: f64 },

    #[error("point is off the critical manifold: residual {residual} > tolerance {tolerance}")]
    OffManifold { residual: f64, tolerance: f64 },

    #[error("unknown tag `{0}`")]
    UnknownTag(String),

    #[error("invalid initial state: {0}")]
    InvalidState(String),

    #[error("event budget {budget} exhausted during burn-in ({burn_in} time units)")]
    InsufficientBudget { budget: u64, burn_in: f64 },

    #[error("absorbing state reached at t = {time} (total propensity is zero)")]
    Absorbing { time: f64 },

    #[error("Lyapunov system is singular (Jacobian not Hurwitz)")]
    SingularLyapunov,
}
