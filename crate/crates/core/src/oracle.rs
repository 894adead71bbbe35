//! Independent ground truth: adaptive Dormand-Prince 5(4) integration of
//! the Newton-Lorentz equations for any field profile, with cubic-Hermite
//! dense output and first-integral diagnostics.
//!
//! The oracle never uses the gauge-momentum relation, which makes that
//! conservation law a nontrivial cross-check on both this integrator and
//! the quadrature path.

use crate::dynamics::{derive_constants, MotionConstants, ParticleParams};
use crate::error::{Error, Result};
use crate::field::{FieldProfile, GaugeAxis};
use crate::numerics::interp::hermite;
use crate::trajectory::{ToleranceInfo, Trajectory, TrajectoryMethod, TrajectorySample};

/// Adaptive integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct OdeSettings {
    /// Initial step; `0` picks a heuristic from the local gyrofrequency.
    pub dt_initial: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeSettings {
    fn default() -> Self {
        OdeSettings { dt_initial: 0.0, rel_tol: 1e-9, abs_tol: 1e-12, max_steps: 2_000_000 }
    }
}

impl OdeSettings {
    pub fn with_tols(rel: f64, abs: f64) -> Self {
        OdeSettings { rel_tol: rel, abs_tol: abs, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("ODE tolerances must be positive".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::Config("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// State layout: `[x, y, vx, vy]`.
pub type State = [f64; 4];

/// Planar Lorentz acceleration `a = (q/m) v x B z-hat`:
/// `ax = (q/m) vy Bz`, `ay = -(q/m) vx Bz`, with `Bz` evaluated at the
/// profile's gauge coordinate (y, x, or r).
pub fn acceleration(
    profile: &FieldProfile,
    params: &ParticleParams,
    state: &State,
) -> Result<(f64, f64)> {
    let [x, y, vx, vy] = *state;
    let coord = match profile.axis() {
        GaugeAxis::YGauge => y,
        GaugeAxis::XGauge => x,
        GaugeAxis::Radial => (x * x + y * y).sqrt(),
    };
    let bz = profile.field(coord)?;
    let qm = params.charge / params.mass;
    Ok((qm * vy * bz, -qm * vx * bz))
}

fn derivative(profile: &FieldProfile, params: &ParticleParams, state: &State) -> Result<State> {
    let (ax, ay) = acceleration(profile, params, state)?;
    Ok([state[2], state[3], ax, ay])
}

/// One Dormand-Prince 5(4) step from `(t, y)` with step `h`.
///
/// Returns `(y5, error_estimate, f_new)` where `f_new` is the derivative
/// at the new point (FSAL). Exposed so convergence-order tests can drive
/// the stepper at fixed h.
pub fn dopri5_step(
    profile: &FieldProfile,
    params: &ParticleParams,
    _t: f64,
    y: &State,
    f0: &State,
    h: f64,
) -> Result<(State, State, State)> {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
    const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
    const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
    const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
    const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
    const E7: f64 = -1.0 / 40.0;

    let k1 = *f0;
    let mut s = [0.0; 4];
    for i in 0..4 {
        s[i] = y[i] + h * A21 * k1[i];
    }
    let k2 = derivative(profile, params, &s)?;
    for i in 0..4 {
        s[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
    }
    let k3 = derivative(profile, params, &s)?;
    for i in 0..4 {
        s[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
    }
    let k4 = derivative(profile, params, &s)?;
    for i in 0..4 {
        s[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
    }
    let k5 = derivative(profile, params, &s)?;
    for i in 0..4 {
        s[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
    }
    let k6 = derivative(profile, params, &s)?;
    let mut y5 = [0.0; 4];
    for i in 0..4 {
        y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    }
    let k7 = derivative(profile, params, &y5)?;
    let mut err = [0.0; 4];
    for i in 0..4 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Ok((y5, err, k7))
}

/// Integrate the Lorentz equations from the particle's initial state to
/// `t_end`, sampling `n_samples` uniform times by dense output.
pub fn integrate(
    profile: &FieldProfile,
    params: &ParticleParams,
    t_end: f64,
    settings: &OdeSettings,
    n_samples: usize,
) -> Result<Trajectory> {
    params.validate()?;
    settings.validate()?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Config(format!("t_end = {t_end} must be positive and finite")));
    }
    if n_samples == 0 {
        return Err(Error::Config("need at least one sample".into()));
    }

    let times: Vec<f64> = if n_samples == 1 {
        vec![0.0]
    } else {
        (0..n_samples)
            .map(|i| t_end * i as f64 / (n_samples - 1) as f64)
            .collect()
    };

    let mut state: State = [params.x0, params.y0, params.vx0, params.vy0];
    let mut t = 0.0;
    let mut f = derivative(profile, params, &state)?;
    // Cap steps at the sample spacing so the cubic-Hermite dense output
    // stays subordinate to the step-error control.
    let h_max = t_end / (n_samples.saturating_sub(1).max(64) as f64);
    let mut h = if settings.dt_initial > 0.0 {
        settings.dt_initial.min(h_max)
    } else {
        let bz = f[2].hypot(f[3]) / params.speed_squared().sqrt().max(1e-30);
        (0.05 / (bz + 1.0 / t_end)).min(h_max)
    };

    let mut samples: Vec<TrajectorySample> = Vec::with_capacity(n_samples);
    samples.push(TrajectorySample {
        t: 0.0,
        x: params.x0,
        y: params.y0,
        vx: params.vx0,
        vy: params.vy0,
    });
    let mut next_sample = 1usize;

    let fail = |reason: String,
                t_reached: f64,
                samples: &[TrajectorySample],
                profile: &FieldProfile,
                params: &ParticleParams,
                settings: &OdeSettings|
     -> Error {
        let partial = assemble(
            samples.to_vec(),
            profile,
            params,
            settings,
            derive_constants_or_radial(params, profile),
        )
        .unwrap_or_else(|_| {
            Trajectory::new(
                TrajectoryMethod::OdeOracle,
                profile.label(),
                0.0,
                0.0,
                params.speed_squared(),
                vec![samples[0]],
                vec![0.0],
                vec![0.0],
                tolerance_info(settings),
            )
            .expect("single-sample trajectory")
        });
        Error::OdeFailure { reason, t_reached, partial: Box::new(partial) }
    };

    let mut steps = 0usize;
    while t < t_end && next_sample < times.len() {
        if steps >= settings.max_steps {
            return Err(fail(
                format!("max_steps = {} exceeded", settings.max_steps),
                t,
                &samples,
                profile,
                params,
                settings,
            ));
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        if h <= f64::EPSILON * t.abs().max(1.0) * 16.0 {
            return Err(fail("step size underflow".into(), t, &samples, profile, params, settings));
        }

        let (y_new, err, f_new) = dopri5_step(profile, params, t, &state, &f, h)?;
        let mut norm2 = 0.0;
        for i in 0..4 {
            let scale = settings.abs_tol + settings.rel_tol * state[i].abs().max(y_new[i].abs());
            let r = err[i] / scale;
            norm2 += r * r;
        }
        let err_norm = (norm2 / 4.0).sqrt();

        if err_norm <= 1.0 {
            let t_new = t + h;
            // Fill dense-output samples covered by this step.
            while next_sample < times.len() && times[next_sample] <= t_new + 1e-14 * t_end {
                let ts = times[next_sample].min(t_new);
                let mut vals = [0.0; 4];
                for i in 0..4 {
                    vals[i] = hermite(ts, t, t_new, state[i], y_new[i], f[i], f_new[i]);
                }
                samples.push(TrajectorySample {
                    t: times[next_sample],
                    x: vals[0],
                    y: vals[1],
                    vx: vals[2],
                    vy: vals[3],
                });
                next_sample += 1;
            }
            t = t_new;
            state = y_new;
            f = f_new;
        }

        let scale = if err_norm > 0.0 {
            (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * scale).min(h_max);
    }

    assemble(samples, profile, params, settings, derive_constants_or_radial(params, profile))
}

fn tolerance_info(settings: &OdeSettings) -> ToleranceInfo {
    ToleranceInfo { ode_rel: settings.rel_tol, ode_abs: settings.abs_tol, ..Default::default() }
}

/// Landau gauges expose (k1, k2, k3); the radial gauge has no cyclic
/// Cartesian coordinate, so k1 records the conserved canonical angular
/// momentum per mass instead.
fn derive_constants_or_radial(params: &ParticleParams, profile: &FieldProfile) -> MotionConstants {
    match profile.axis() {
        GaugeAxis::Radial => {
            let k2 = params.charge * profile.b0() / params.mass;
            let l0 = angular_gauge_momentum(params, profile, params.x0, params.y0, params.vx0, params.vy0);
            MotionConstants { k1: l0, k2, k3: params.speed_squared() }
        }
        _ => derive_constants(params, profile).unwrap_or(MotionConstants {
            k1: f64::NAN,
            k2: f64::NAN,
            k3: params.speed_squared(),
        }),
    }
}

/// Conserved angular momentum per mass for a planar axisymmetric field
/// `Bz(r)`: `x vy - y vx + (q/m) F(r)` with the flux function
/// `F(r) = ∫_0^r s Bz(s) ds = b0 (r^2 f(r) - ∫ s f(s) ds)`.
fn angular_gauge_momentum(
    params: &ParticleParams,
    profile: &FieldProfile,
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
) -> f64 {
    let r = (x * x + y * y).sqrt();
    let rf = profile.shape_times_u(r).unwrap_or(f64::NAN);
    let action = profile
        .shape_action_integral(r)
        .map(|(_, v)| v)
        .unwrap_or(f64::NAN);
    x * vy - y * vx + params.charge / params.mass * profile.b0() * (r * rf - action)
}

fn assemble(
    samples: Vec<TrajectorySample>,
    profile: &FieldProfile,
    params: &ParticleParams,
    settings: &OdeSettings,
    constants: MotionConstants,
) -> Result<Trajectory> {
    let mut er = Vec::with_capacity(samples.len());
    let mut mr = Vec::with_capacity(samples.len());
    match profile.axis() {
        GaugeAxis::Radial => {
            let l0 = constants.k1;
            for s in &samples {
                let v2 = s.vx * s.vx + s.vy * s.vy;
                er.push((v2 - constants.k3).abs() / constants.k3.max(1e-12));
                let l = angular_gauge_momentum(params, profile, s.x, s.y, s.vx, s.vy);
                mr.push((l - l0).abs() / l0.abs().max(1.0));
            }
        }
        _ => {
            let (e, m) = crate::quadrature::residuals(&samples, &constants, profile)?;
            er = e;
            mr = m;
        }
    }
    Trajectory::new(
        TrajectoryMethod::OdeOracle,
        profile.label(),
        constants.k1,
        constants.k2,
        constants.k3,
        samples,
        er,
        mr,
        tolerance_info(settings),
    )
}

/// Pairwise deviation report between two trajectories on their common
/// time range; `b` is resampled onto `a`'s grid by cubic Hermite.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct DeviationReport {
    pub max_position: f64,
    pub rms_position: f64,
    pub max_energy_residual_diff: f64,
    pub t_of_max: f64,
    pub n_points: usize,
}

pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<DeviationReport> {
    let (a0, a1) = (a.samples.first().unwrap().t, a.samples.last().unwrap().t);
    let (b0, b1) = (b.samples.first().unwrap().t, b.samples.last().unwrap().t);
    let lo = a0.max(b0);
    let hi = a1.min(b1);
    if hi <= lo {
        return Err(Error::Config(format!(
            "trajectories do not overlap in time: [{a0}, {a1}] vs [{b0}, {b1}]"
        )));
    }

    let mut max_pos = 0.0f64;
    let mut t_of_max = lo;
    let mut sum2 = 0.0;
    let mut max_ediff = 0.0f64;
    let mut n = 0usize;
    let mut cursor = 0usize;
    for (i, sa) in a.samples.iter().enumerate() {
        if sa.t < lo || sa.t > hi {
            continue;
        }
        // Advance to the b-segment containing sa.t.
        while cursor + 1 < b.samples.len() - 1 && b.samples[cursor + 1].t < sa.t {
            cursor += 1;
        }
        let s0 = &b.samples[cursor];
        let s1 = &b.samples[cursor + 1];
        let bx = hermite(sa.t, s0.t, s1.t, s0.x, s1.x, s0.vx, s1.vx);
        let by = hermite(sa.t, s0.t, s1.t, s0.y, s1.y, s0.vy, s1.vy);
        let d = ((sa.x - bx).powi(2) + (sa.y - by).powi(2)).sqrt();
        if d > max_pos {
            max_pos = d;
            t_of_max = sa.t;
        }
        sum2 += d * d;
        n += 1;
        // Linear interpolation is plenty for the residual diagnostics.
        let frac = ((sa.t - s0.t) / (s1.t - s0.t)).clamp(0.0, 1.0);
        let eb = b.energy_residual[cursor] * (1.0 - frac) + b.energy_residual[cursor + 1] * frac;
        max_ediff = max_ediff.max((a.energy_residual[i] - eb).abs());
    }
    if n == 0 {
        return Err(Error::Config("no common sample times in the overlap".into()));
    }
    Ok(DeviationReport {
        max_position: max_pos,
        rms_position: (sum2 / n as f64).sqrt(),
        max_energy_residual_diff: max_ediff,
        t_of_max,
        n_points: n,
    })
}
