//! Closed-form trajectories: the uniform-field circle, the zero-field
//! line, and the oscillatory solution for the exponentially decaying
//! field, with the arctangent branch unwrapped so x(t) is continuous.

use crate::dynamics::{
    derive_constants, ExpClosedFormConstants, MotionConstants, ParticleParams,
};
use crate::error::{Error, Result};
use crate::field::{FieldProfile, GaugeAxis, ProfileKind};
use crate::quadrature::residuals;
use crate::trajectory::{ToleranceInfo, Trajectory, TrajectoryMethod, TrajectorySample};

/// Sign branch of the quadrature square root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Uniform-field circle, zero-phase anchor:
/// `(x, y) = (sqrt(k3)/k2 sin(k2 t), sqrt(k3)/k2 cos(k2 t) - k1/k2)`.
pub fn closed_form_uniform(constants: &MotionConstants, t: f64) -> Result<(f64, f64)> {
    if constants.k2 == 0.0 {
        return Err(Error::ClosedFormUnavailable(
            "k2 = 0 has no cyclotron circle; use the zero-field line".into(),
        ));
    }
    let r = constants.k3.sqrt() / constants.k2;
    let phase = constants.k2 * t;
    Ok((r * phase.sin(), r * phase.cos() - constants.k1 / constants.k2))
}

/// Oscillatory solution for the exponentially decaying field:
///
/// ```text
/// y = log(l sin(+-alpha t) + m)
/// x = (k1+k2) t - 2 atan_unwrapped(((k1+k2) tan(alpha t/2) +- sqrt(k3)) / alpha)
/// ```
///
/// where the unwrapped arctangent adds a `pi` continuation at every pole
/// of `tan(alpha t/2)` so that x is continuous in t.
pub fn closed_form_exponential(
    constants: &MotionConstants,
    t: f64,
    branch: Branch,
) -> Result<(f64, f64)> {
    let cf = ExpClosedFormConstants::from_constants(constants)?;
    let alpha = cf.alpha();
    let arg = cf.l * (branch.sign() * alpha * t).sin() + cf.m_aux;
    if arg <= 0.0 {
        return Err(Error::Domain { what: "log argument l sin + m not positive".into(), at: t });
    }
    let y = arg.ln();
    let x = exp_x_formula(constants, &cf, t, branch.sign());
    Ok((x, y))
}

/// The x(t) formula with a zero integration constant (x(0) is not
/// anchored; trajectory builders shift it).
fn exp_x_formula(c: &MotionConstants, cf: &ExpClosedFormConstants, t: f64, sign: f64) -> f64 {
    let a_sum = c.k1 + c.k2;
    let alpha = cf.alpha();
    a_sum * t - 2.0 * unwrapped_arctan(a_sum, sign * c.k3.sqrt(), alpha, t)
}

/// Continuous version of `arctan((a tan(alpha t/2) + b)/alpha)`: each pole
/// of the tangent at `alpha t/2 = pi/2 + n pi` adds a `pi` step.
fn unwrapped_arctan(a: f64, b: f64, alpha: f64, t: f64) -> f64 {
    let half = 0.5 * alpha * t;
    let wraps = (half / std::f64::consts::PI + 0.5).floor();
    let principal = ((a * half.tan() + b) / alpha).atan();
    // The principal branch jumps by -pi sign(a) across each pole.
    principal + std::f64::consts::PI * wraps * a.signum()
}

/// Closed-form trajectory from initial conditions: circle, line, or the
/// exponential-profile solution with the phase fixed by the start point.
pub fn closed_form_trajectory(
    params: &ParticleParams,
    profile: &FieldProfile,
    t_end: f64,
    n_samples: usize,
) -> Result<Trajectory> {
    params.validate()?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Config(format!("t_end = {t_end} must be positive and finite")));
    }
    if n_samples == 0 {
        return Err(Error::Config("need at least one sample".into()));
    }
    let constants = derive_constants(params, profile)?;
    let times = sample_times(t_end, n_samples);

    let samples: Vec<TrajectorySample> = if constants.k3 == 0.0 {
        // Magnetic force vanishes at v = 0: the particle never moves.
        times
            .iter()
            .map(|&t| TrajectorySample { t, x: params.x0, y: params.y0, vx: 0.0, vy: 0.0 })
            .collect()
    } else if let Some(shape_const) = profile.constant_value() {
        let omega = constants.k2 * shape_const;
        if omega == 0.0 {
            line_samples(params, &times)
        } else {
            circle_samples(params, omega, &times)
        }
    } else {
        match profile.builtin_kind() {
            Some(ProfileKind::ZeroField) => line_samples(params, &times),
            Some(ProfileKind::ExpDecay) if profile.axis() == GaugeAxis::YGauge => {
                exp_samples(params, profile, &constants, &times)?
            }
            _ => {
                return Err(Error::ClosedFormUnavailable(format!(
                    "no closed form registered for profile '{}' on the {} axis",
                    profile.label(),
                    profile.axis()
                )))
            }
        }
    };

    let (er, mr) = residuals(&samples, &constants, profile)?;
    Trajectory::new(
        TrajectoryMethod::ClosedForm,
        profile.label(),
        constants.k1,
        constants.k2,
        constants.k3,
        samples,
        er,
        mr,
        ToleranceInfo::default(),
    )
}

fn sample_times(t_end: f64, n_samples: usize) -> Vec<f64> {
    if n_samples == 1 {
        return vec![0.0];
    }
    (0..n_samples)
        .map(|i| t_end * i as f64 / (n_samples - 1) as f64)
        .collect()
}

fn line_samples(params: &ParticleParams, times: &[f64]) -> Vec<TrajectorySample> {
    times
        .iter()
        .map(|&t| TrajectorySample {
            t,
            x: params.x0 + params.vx0 * t,
            y: params.y0 + params.vy0 * t,
            vx: params.vx0,
            vy: params.vy0,
        })
        .collect()
}

/// Circle through the initial conditions with signed cyclotron frequency
/// `omega = q B/m`; velocities rotate clockwise for positive omega.
fn circle_samples(params: &ParticleParams, omega: f64, times: &[f64]) -> Vec<TrajectorySample> {
    times
        .iter()
        .map(|&t| {
            let (s, c) = (omega * t).sin_cos();
            let vx = params.vx0 * c + params.vy0 * s;
            let vy = -params.vx0 * s + params.vy0 * c;
            let x = params.x0 + (params.vx0 * s - params.vy0 * c + params.vy0) / omega;
            let y = params.y0 + (params.vx0 * c + params.vy0 * s - params.vx0) / omega;
            TrajectorySample { t, x, y, vx, vy }
        })
        .collect()
}

fn exp_samples(
    params: &ParticleParams,
    profile: &FieldProfile,
    constants: &MotionConstants,
    times: &[f64],
) -> Result<Vec<TrajectorySample>> {
    let cf = ExpClosedFormConstants::from_constants(constants)?;
    let alpha = cf.alpha();

    // Phase shift tau0 such that y(0) = y0 and sign(y-dot(0)) = sign(vy0).
    let sin_phase = ((params.y0.exp() - cf.m_aux) / cf.l).clamp(-1.0, 1.0);
    let cos_phase = if params.vy0 == 0.0 {
        0.0
    } else {
        params.vy0.signum() * (1.0 - sin_phase * sin_phase).max(0.0).sqrt()
    };
    let tau0 = sin_phase.atan2(cos_phase) / alpha;

    let x_anchor = exp_x_formula(constants, &cf, tau0, 1.0);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let tp = t + tau0;
        let arg = cf.l * (alpha * tp).sin() + cf.m_aux;
        if arg <= 0.0 {
            return Err(Error::Domain {
                what: "log argument l sin + m not positive".into(),
                at: t,
            });
        }
        let y = arg.ln();
        let x = params.x0 + exp_x_formula(constants, &cf, tp, 1.0) - x_anchor;
        let vy = cf.l * alpha * (alpha * tp).cos() / arg;
        let vx = constants.k1 + constants.k2 * profile.shape_times_u(y)?;
        out.push(TrajectorySample { t, x, y, vx, vy });
    }
    // Pin the first sample to the initial conditions exactly.
    out[0] = TrajectorySample {
        t: times[0],
        x: params.x0,
        y: params.y0,
        vx: params.vx0,
        vy: params.vy0,
    };
    Ok(out)
}
