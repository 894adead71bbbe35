//! Planar charged-particle dynamics in separable non-uniform magnetic
//! fields.
//!
//! The field class is generated by a gauge shape function `f` on one
//! coordinate: `B(u) = b0 d/du [u f(u)]`. For such fields the motion has
//! two first integrals (gauge momentum and energy), which reduce the
//! trajectory to a single quadrature
//!
//! ```text
//! t(u) = ∫ du / sqrt(k3 - (k1 + s k2 u f(u))^2)
//! ```
//!
//! inverted here numerically between turning points ([`quadrature`]),
//! solved in closed form where one exists ([`closed_form`]), and
//! cross-checked by an independent Lorentz-force integrator ([`oracle`]).
//! For rotationally symmetric profiles the spin-1/2 problem factorizes;
//! [`susy`] builds the zero mode, decides its square integrability, and
//! quantizes the superpotential well semiclassically.

pub mod closed_form;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod numerics;
pub mod oracle;
pub mod quadrature;
pub mod susy;
pub mod trajectory;

pub use closed_form::{closed_form_exponential, closed_form_trajectory, closed_form_uniform, Branch};
pub use dynamics::{
    derive_constants, radicand, turning_points, ExpClosedFormConstants, MotionConstants,
    ParticleParams, ScanFlag, TurningPoint, TurningPointKind, TurningPointScan,
};
pub use error::{Error, Result};
pub use field::{FieldProfile, GaugeAxis, ProfileKind};
pub use oracle::{acceleration, compare, integrate, DeviationReport, OdeSettings};
pub use quadrature::{
    companion_coordinate, orbit_period, trajectory_quadrature, MotionState, QuadratureMotion,
};
pub use susy::{
    annihilation_drift, effective_potential, normalizability, quantization_integral, swkb_levels,
    swkb_levels_with_convention, zero_mode, NormalizabilityVerdict, QuantizationConvention,
    SpectrumLevel, SpectrumResult, SpinBranch, SusyProblem, Verdict, ZeroMode,
};
pub use trajectory::{ToleranceInfo, Trajectory, TrajectoryMethod, TrajectorySample};
