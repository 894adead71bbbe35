//! Error types shared across the crate.

use crate::trajectory::Trajectory;

/// Crate-wide error type.
///
/// Variants map onto the CLI exit-code contract: `Config` is a caller
/// mistake, `InvariantBreach` is a conserved-quantity violation detected
/// after the fact, and everything else is a numeric/domain failure.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration or parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Evaluation at a point outside the valid domain (e.g. a
    /// non-removable singularity of the gauge shape function).
    #[error("domain error: {what} at u = {at}")]
    Domain { what: String, at: f64 },

    /// The quadrature coordinate sits on a double root of the radicand:
    /// the motion is a separatrix with divergent period.
    #[error("degenerate (double) turning point at u = {at}; the period diverges there — use the ODE oracle instead")]
    DegenerateTurningPoint { at: f64 },

    /// The starting coordinate is classically forbidden (radicand < 0).
    #[error("forbidden start: radicand g({coordinate}) = {radicand} < 0; no real velocity exists there")]
    ForbiddenStart { coordinate: f64, radicand: f64 },

    /// No closed-form solution is registered for this configuration.
    #[error("closed form unavailable: {0}")]
    ClosedFormUnavailable(String),

    /// A numeric stage failed to reach its tolerance or diverged.
    #[error("numeric failure in {stage}: {message}")]
    Numeric { stage: &'static str, message: String },

    /// The superpotential well has more than two turning points at the
    /// requested energy.
    #[error("multi-well superpotential: found {count} classically allowed regions; the quantization integral needs exactly one")]
    MultiWell { count: usize },

    /// The quantization integral saturates below the requested level.
    #[error("no bound level n = {n}: quantization integral tops out at {max_integral} < target {target}")]
    NoLevel { n: usize, max_integral: f64, target: f64 },

    /// Adaptive integration gave up; the partial trajectory is attached.
    #[error("ODE integration failed: {reason} (reached t = {t_reached})")]
    OdeFailure {
        reason: String,
        t_reached: f64,
        partial: Box<Trajectory>,
    },

    /// A conserved quantity drifted past its configured tolerance.
    #[error("invariant breach: {0}")]
    InvariantBreach(String),
}

pub type Result<T> = std::result::Result<T, Error>;
