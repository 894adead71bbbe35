//! Trajectories by quadrature: invert `t(u) = ∫ du/sqrt(g(u))` between
//! turning points and stitch half-periods.
//!
//! The integrand has integrable `1/sqrt` singularities at simple turning
//! points, so each leg is mapped through `u = a + (b-a) sin^2(theta)`,
//! which makes the transformed integrand smooth on `[0, pi/2]`. Cumulative
//! times and companion-coordinate displacements are accumulated on a dense
//! theta grid with Gauss-Legendre panels; inversion uses monotone cubic
//! interpolation refined by Newton steps on the integral itself.

use crate::dynamics::{
    companion_velocity, derive_constants, gauge_sign, radicand, radicand_derivative,
    turning_points, MotionConstants, ParticleParams, TurningPointKind,
};
use crate::error::{Error, Result};
use crate::field::{FieldProfile, GaugeAxis};
use crate::numerics::interp::MonotoneCubic;
use crate::numerics::quad::{cumulative_quadratic, GaussLegendre};
use crate::trajectory::{ToleranceInfo, Trajectory, TrajectoryMethod, TrajectorySample};

/// Theta panels per leg; the inversion contract wants at least 512 nodes
/// per half-period.
const LEG_PANELS: usize = 1024;
/// Below this angle the endpoint-linearized form of the leg integrals is
/// used instead of quadrature (the radicand underflows to rounding noise
/// closer to a turning point).
const THETA_EPS: f64 = 1e-5;

/// One monotone leg of the motion between two endpoint coordinates
/// `a < b`, either of which may be a real turning point or a virtual
/// boundary placed beyond the particle's reach.
///
/// Endpoint roots carry a residual `g(a') = delta > 0` at floating-point
/// resolution, which hides `~2 sqrt(delta)/|g'|` of leg time in an
/// unresolvable sliver; those corrections are computed analytically and
/// folded into the leg time and companion displacement.
#[derive(Debug, Clone)]
pub struct LegMap {
    a: f64,
    b: f64,
    a_is_tp: bool,
    b_is_tp: bool,
    thetas: Vec<f64>,
    t_cum: Vec<f64>,
    comp_cum: Vec<f64>,
    /// Time across the resolvable part of the leg, `[a, b]` as stored.
    t_map: f64,
    comp_map: f64,
    /// Analytic endpoint sliver times (zero at virtual boundaries).
    sliver_a: f64,
    sliver_b: f64,
    /// Companion velocities at the endpoints, for the sliver displacement.
    w_a: f64,
    w_b: f64,
    /// Full leg time including slivers.
    t_leg: f64,
    comp_leg: f64,
    inv: MonotoneCubic,
    gl: GaussLegendre,
    constants: MotionConstants,
    profile: FieldProfile,
}

impl LegMap {
    fn integrand(&self, theta: f64) -> f64 {
        let u = self.coordinate_of_theta(theta);
        let g = radicand(&self.constants, &self.profile, u)
            .unwrap_or(f64::NAN)
            .max(1e-300);
        2.0 * (self.b - self.a) * theta.sin() * theta.cos() / g.sqrt()
    }

    fn companion_integrand(&self, theta: f64) -> f64 {
        let u = self.coordinate_of_theta(theta);
        let w = companion_velocity(&self.constants, &self.profile, u).unwrap_or(f64::NAN);
        w * self.integrand(theta)
    }

    pub fn coordinate_of_theta(&self, theta: f64) -> f64 {
        let s = theta.sin();
        self.a + (self.b - self.a) * s * s
    }

    pub fn theta_of_coordinate(&self, u: f64) -> f64 {
        let ratio = ((u - self.a) / (self.b - self.a)).clamp(0.0, 1.0);
        ratio.sqrt().asin()
    }

    /// Map time (sliver-free) from `a` to the position at `theta`.
    fn map_time_at_theta(&self, theta: f64) -> f64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let theta = theta.clamp(0.0, half_pi);
        if theta <= THETA_EPS {
            return self.integrand(THETA_EPS) * theta;
        }
        if theta >= half_pi - THETA_EPS {
            return self.t_map - self.integrand(half_pi - THETA_EPS) * (half_pi - theta);
        }
        let dx = half_pi / LEG_PANELS as f64;
        let k = ((theta / dx) as usize).min(LEG_PANELS - 1);
        self.t_cum[k] + self.gl.integrate(|th| self.integrand(th), self.thetas[k], theta)
    }

    /// Companion displacement (sliver-free) from `a` to `theta`.
    fn map_companion_at_theta(&self, theta: f64) -> f64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let theta = theta.clamp(0.0, half_pi);
        if theta <= THETA_EPS {
            return self.companion_integrand(THETA_EPS) * theta;
        }
        if theta >= half_pi - THETA_EPS {
            return self.comp_map - self.companion_integrand(half_pi - THETA_EPS) * (half_pi - theta);
        }
        let dx = half_pi / LEG_PANELS as f64;
        let k = ((theta / dx) as usize).min(LEG_PANELS - 1);
        self.comp_cum[k]
            + self
                .gl
                .integrate(|th| self.companion_integrand(th), self.thetas[k], theta)
    }

    /// Time from the true leg start (turning point) to `theta`.
    pub fn time_at_theta(&self, theta: f64) -> f64 {
        self.sliver_a + self.map_time_at_theta(theta)
    }

    /// Invert the leg time: monotone-cubic guess plus Newton refinement on
    /// the integral (skipped in the endpoint panels, where the cubic is
    /// already at its accuracy floor and the radicand loses precision).
    pub fn theta_at_time(&self, tau: f64) -> f64 {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let tau = (tau - self.sliver_a).clamp(0.0, self.t_map);
        let mut theta = self.inv.eval(tau).clamp(0.0, half_pi);
        let dx = half_pi / LEG_PANELS as f64;
        if theta > dx && theta < half_pi - dx {
            for _ in 0..2 {
                let h = self.integrand(theta);
                if !(h.is_finite() && h > 0.0) {
                    break;
                }
                let dt = self.map_time_at_theta(theta) - tau;
                theta = (theta - dt / h).clamp(dx * 0.5, half_pi - dx * 0.5);
            }
        }
        theta
    }

    /// Companion displacement accumulated over `[0, tau]` of an ascending
    /// leg, endpoint slivers included.
    pub fn ascending_companion(&self, tau: f64) -> f64 {
        let tau = tau.clamp(0.0, self.t_leg);
        let head = self.w_a * tau.min(self.sliver_a);
        let tail = self.w_b * (tau - self.sliver_a - self.t_map).clamp(0.0, self.sliver_b);
        let theta = self.theta_at_time(tau);
        head + self.map_companion_at_theta(theta) + tail
    }

    pub fn leg_time(&self) -> f64 {
        self.t_leg
    }

    pub fn companion_per_leg(&self) -> f64 {
        self.comp_leg
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    pub fn endpoint_is_turning_point(&self) -> (bool, bool) {
        (self.a_is_tp, self.b_is_tp)
    }
}

/// A full quadrature solution: a leg map plus the phase bookkeeping that
/// folds absolute time into ascending/descending legs with reflections at
/// real turning points.
#[derive(Debug, Clone)]
pub struct QuadratureMotion {
    leg: LegMap,
    tau0: f64,
    comp_anchor: f64,
    comp_phase0: f64,
    u0: f64,
    udot0: f64,
}

/// Phase-space state of the transverse/companion pair at one time.
#[derive(Debug, Clone, Copy)]
pub struct MotionState {
    /// Transverse (quadrature) coordinate.
    pub u: f64,
    /// Its velocity, sign included.
    pub u_dot: f64,
    /// Companion (cyclic) coordinate.
    pub companion: f64,
    /// Companion velocity `w(u)`.
    pub companion_dot: f64,
}

impl QuadratureMotion {
    /// Build from explicit constants. `u0`/`udot0` are the transverse
    /// coordinate and velocity, `comp0` the companion coordinate.
    pub fn with_constants(
        constants: MotionConstants,
        profile: &FieldProfile,
        u0: f64,
        udot0: f64,
        comp0: f64,
        t_end: f64,
    ) -> Result<Self> {
        gauge_sign(profile.axis())?;
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::Config(format!("t_end = {t_end} must be positive and finite")));
        }
        if constants.k3 <= 0.0 {
            return Err(Error::Config(
                "zero-energy motion is stationary; quadrature needs k3 > 0".into(),
            ));
        }
        let g_scale = constants.radicand_scale();
        let g_tol = 1e-12 * g_scale;
        let g0 = radicand(&constants, profile, u0)?;
        if g0 < -g_tol {
            return Err(Error::ForbiddenStart { coordinate: u0, radicand: g0 });
        }
        let at_tp = g0.abs() <= g_tol || g0 < 0.0;

        let speed = constants.k3.sqrt();
        let reach = speed * t_end;
        let margin = (1e-3 * reach).max(1e-9 * (1.0 + u0.abs()));
        let (lo, hi) = (u0 - reach - margin, u0 + reach + margin);
        let scan = turning_points(&constants, profile, (lo, hi))?;

        // Direction of initial motion along u.
        let slope = radicand_derivative(&constants, profile, u0)?;
        let direction = if at_tp {
            if slope.abs() * (hi - lo) <= g_tol {
                return Err(Error::DegenerateTurningPoint { at: u0 });
            }
            slope.signum()
        } else if udot0 != 0.0 {
            udot0.signum()
        } else {
            // Interior start with zero transverse velocity is inconsistent
            // (udot^2 should equal g); pick the uphill direction.
            slope.signum()
        };

        let coord_tol = 1e-9 * (1.0 + u0.abs());
        // Newton-polish each candidate root with the analytic derivative;
        // every saved decimal digit of the root pays off as half a digit
        // of leg-time accuracy.
        let polish = |mut u: f64| -> f64 {
            for _ in 0..4 {
                let g = radicand(&constants, profile, u).unwrap_or(f64::NAN);
                let dg = radicand_derivative(&constants, profile, u).unwrap_or(f64::NAN);
                if !(g.is_finite() && dg.is_finite()) || dg == 0.0 {
                    break;
                }
                let step = g / dg;
                if !step.is_finite() || step.abs() > 0.1 * (1.0 + u.abs()) {
                    break;
                }
                u -= step;
            }
            u
        };
        let simple_roots: Vec<f64> = scan
            .points
            .iter()
            .filter(|p| p.kind == TurningPointKind::Simple)
            .map(|p| polish(p.coordinate))
            .collect();
        let below = simple_roots
            .iter()
            .filter(|&&r| r < u0 - coord_tol)
            .fold(f64::NEG_INFINITY, |m, &r| m.max(r));
        let above = simple_roots
            .iter()
            .filter(|&&r| r > u0 + coord_tol)
            .fold(f64::INFINITY, |m, &r| m.min(r));

        let (a, a_is_tp, b, b_is_tp) = if at_tp {
            if direction > 0.0 {
                let b = if above.is_finite() { above } else { hi };
                (u0, true, b, above.is_finite())
            } else {
                let a = if below.is_finite() { below } else { lo };
                (a, below.is_finite(), u0, true)
            }
        } else {
            let a = if below.is_finite() { below } else { lo };
            let b = if above.is_finite() { above } else { hi };
            (a, below.is_finite(), b, above.is_finite())
        };

        if b - a <= coord_tol {
            return Err(Error::DegenerateTurningPoint { at: u0 });
        }
        // A double root inside the leg would pinch the motion; ones
        // outside the travelled interval are harmless.
        for p in &scan.points {
            if p.kind == TurningPointKind::Double
                && p.coordinate > a - coord_tol
                && p.coordinate < b + coord_tol
            {
                return Err(Error::DegenerateTurningPoint { at: p.coordinate });
            }
        }

        let leg = Self::build_leg(constants, profile, a, a_is_tp, b, b_is_tp)?;

        let tau_u0 = if at_tp {
            if direction > 0.0 {
                0.0
            } else {
                leg.t_leg
            }
        } else {
            leg.time_at_theta(leg.theta_of_coordinate(u0))
        };
        let tau0 = if direction > 0.0 { tau_u0 } else { 2.0 * leg.t_leg - tau_u0 };
        let comp_phase0 = Self::companion_phase(&leg, tau0);
        Ok(QuadratureMotion { leg, tau0, comp_anchor: comp0, comp_phase0, u0, udot0 })
    }

    fn build_leg(
        constants: MotionConstants,
        profile: &FieldProfile,
        a: f64,
        a_is_tp: bool,
        b: f64,
        b_is_tp: bool,
    ) -> Result<LegMap> {
        let gl = GaussLegendre::new(8);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let n = LEG_PANELS;
        let thetas: Vec<f64> = (0..=n).map(|i| half_pi * i as f64 / n as f64).collect();

        // Endpoint sliver corrections at real turning points.
        let sliver = |u: f64, is_tp: bool| -> Result<f64> {
            if !is_tp {
                return Ok(0.0);
            }
            let g_res = radicand(&constants, profile, u)?.max(0.0);
            let dg = radicand_derivative(&constants, profile, u)?.abs();
            if dg == 0.0 {
                return Ok(0.0);
            }
            Ok(2.0 * g_res.sqrt() / dg)
        };
        let sliver_a = sliver(a, a_is_tp)?;
        let sliver_b = sliver(b, b_is_tp)?;
        let w_a = companion_velocity(&constants, profile, a)?;
        let w_b = companion_velocity(&constants, profile, b)?;

        let mut probe = LegMap {
            a,
            b,
            a_is_tp,
            b_is_tp,
            thetas: thetas.clone(),
            t_cum: vec![0.0; n + 1],
            comp_cum: vec![0.0; n + 1],
            t_map: 0.0,
            comp_map: 0.0,
            sliver_a,
            sliver_b,
            w_a,
            w_b,
            t_leg: 0.0,
            comp_leg: 0.0,
            inv: MonotoneCubic::new(vec![0.0, 1.0], vec![0.0, 1.0]),
            gl,
            constants,
            profile: profile.clone(),
        };

        // Sanity: g must be non-negative across the leg interior.
        let g_tol = 1e3 * 1e-12 * constants.radicand_scale();
        for &theta in &thetas[1..n] {
            let u = probe.coordinate_of_theta(theta);
            let g = radicand(&constants, &probe.profile, u)?;
            if g < -g_tol {
                return Err(Error::Numeric {
                    stage: "quadrature leg",
                    message: format!(
                        "radicand dips negative ({g:e}) at u = {u} inside the supposed allowed interval [{a}, {b}]"
                    ),
                });
            }
        }

        let mut t_cum = vec![0.0; n + 1];
        let mut comp_cum = vec![0.0; n + 1];
        for i in 0..n {
            let (lo, hi) = (thetas[i], thetas[i + 1]);
            let dt = probe.gl.integrate(|th| probe.integrand(th), lo, hi);
            let dc = probe.gl.integrate(|th| probe.companion_integrand(th), lo, hi);
            if !(dt.is_finite() && dt > 0.0 && dc.is_finite()) {
                return Err(Error::Numeric {
                    stage: "quadrature leg",
                    message: format!("non-finite leg integrand near theta = {lo}"),
                });
            }
            t_cum[i + 1] = t_cum[i] + dt;
            comp_cum[i + 1] = comp_cum[i] + dc;
        }
        let t_map = t_cum[n];
        let comp_map = comp_cum[n];
        let inv = MonotoneCubic::new(t_cum.clone(), thetas.clone());

        probe.t_cum = t_cum;
        probe.comp_cum = comp_cum;
        probe.t_map = t_map;
        probe.comp_map = comp_map;
        probe.t_leg = t_map + sliver_a + sliver_b;
        probe.comp_leg = comp_map + w_a * sliver_a + w_b * sliver_b;
        probe.inv = inv;
        Ok(probe)
    }

    /// Companion displacement accumulated from phase 0 to phase `p`.
    fn companion_phase(leg: &LegMap, p: f64) -> f64 {
        let t_leg = leg.t_leg;
        let k = (p / t_leg).floor();
        let tau = (p - k * t_leg).clamp(0.0, t_leg);
        let ascending = (k as i64).rem_euclid(2) == 0;
        let partial = if ascending {
            leg.ascending_companion(tau)
        } else {
            leg.comp_leg - leg.ascending_companion(t_leg - tau)
        };
        k * leg.comp_leg + partial
    }

    /// Full period of bounded motion (both endpoints real turning points).
    pub fn period(&self) -> Option<f64> {
        if self.leg.a_is_tp && self.leg.b_is_tp {
            Some(2.0 * self.leg.t_leg)
        } else {
            None
        }
    }

    pub fn leg(&self) -> &LegMap {
        &self.leg
    }

    /// Evaluate the motion at elapsed time `t >= 0`.
    pub fn eval(&self, t: f64) -> Result<MotionState> {
        if t == 0.0 {
            let w = companion_velocity(&self.leg.constants, &self.leg.profile, self.u0)?;
            return Ok(MotionState {
                u: self.u0,
                u_dot: self.udot0,
                companion: self.comp_anchor,
                companion_dot: w,
            });
        }
        let t_leg = self.leg.t_leg;
        let p = self.tau0 + t;
        let k = (p / t_leg).floor();
        let tau = (p - k * t_leg).clamp(0.0, t_leg);
        let ascending = (k as i64).rem_euclid(2) == 0;

        // Any leg boundary crossed since the start must be a real turning
        // point; virtual boundaries are placed beyond reach, so hitting one
        // means the reach estimate failed.
        let first_crossing = (self.tau0 / t_leg).floor() as i64 + 1;
        let last_crossing = k as i64;
        if last_crossing >= first_crossing {
            let (mut need_a, mut need_b) = (false, false);
            if last_crossing - first_crossing >= 1 {
                need_a = true;
                need_b = true;
            } else if (first_crossing - 1).rem_euclid(2) == 0 {
                need_b = true;
            } else {
                need_a = true;
            }
            if (need_a && !self.leg.a_is_tp) || (need_b && !self.leg.b_is_tp) {
                return Err(Error::Numeric {
                    stage: "quadrature stitching",
                    message: format!(
                        "trajectory reached the virtual boundary at t = {t}; reach estimate violated"
                    ),
                });
            }
        }

        let theta = if ascending {
            self.leg.theta_at_time(tau)
        } else {
            self.leg.theta_at_time(t_leg - tau)
        };
        let u = self.leg.coordinate_of_theta(theta);
        let g = radicand(&self.leg.constants, &self.leg.profile, u)?.max(0.0);
        let u_dot = if ascending { g.sqrt() } else { -g.sqrt() };
        let partial = if ascending {
            self.leg.ascending_companion(tau)
        } else {
            self.leg.comp_leg - self.leg.ascending_companion(t_leg - tau)
        };
        let comp_phase = k * self.leg.comp_leg + partial;
        let companion = self.comp_anchor + comp_phase - self.comp_phase0;
        let companion_dot = companion_velocity(&self.leg.constants, &self.leg.profile, u)?;
        Ok(MotionState { u, u_dot, companion, companion_dot })
    }
}

/// Compute a trajectory by quadrature inversion of the motion integral.
///
/// Samples are returned at `n_samples` uniform times in `[0, t_end]`. The
/// first sample reproduces the initial conditions exactly.
pub fn trajectory_quadrature(
    params: &ParticleParams,
    profile: &FieldProfile,
    t_end: f64,
    n_samples: usize,
) -> Result<Trajectory> {
    params.validate()?;
    gauge_sign(profile.axis())?;
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Config(format!("t_end = {t_end} must be positive and finite")));
    }
    if n_samples == 0 {
        return Err(Error::Config("need at least one sample".into()));
    }
    let constants = derive_constants(params, profile)?;

    if constants.k3 == 0.0 {
        return stationary_trajectory(params, profile, &constants, t_end, n_samples);
    }

    let (u0, udot0, comp0) = match profile.axis() {
        GaugeAxis::YGauge => (params.y0, params.vy0, params.x0),
        GaugeAxis::XGauge => (params.x0, params.vx0, params.y0),
        GaugeAxis::Radial => unreachable!("gauge_sign rejected radial"),
    };
    let motion = QuadratureMotion::with_constants(constants, profile, u0, udot0, comp0, t_end)?;

    let times = sample_times(t_end, n_samples);
    let mut samples = Vec::with_capacity(n_samples);
    for &t in &times {
        let st = motion.eval(t)?;
        let (x, y, vx, vy) = match profile.axis() {
            GaugeAxis::YGauge => (st.companion, st.u, st.companion_dot, st.u_dot),
            GaugeAxis::XGauge => (st.u, st.companion, st.u_dot, st.companion_dot),
            GaugeAxis::Radial => unreachable!(),
        };
        samples.push(TrajectorySample { t, x, y, vx, vy });
    }
    // First sample is the initial condition verbatim.
    samples[0] =
        TrajectorySample { t: 0.0, x: params.x0, y: params.y0, vx: params.vx0, vy: params.vy0 };

    let (er, mr) = residuals(&samples, &constants, profile)?;
    Trajectory::new(
        TrajectoryMethod::Quadrature,
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

/// Full oscillation period of the transverse coordinate, when the motion
/// is bounded between two simple turning points.
pub fn orbit_period(params: &ParticleParams, profile: &FieldProfile, t_end: f64) -> Result<Option<f64>> {
    let constants = derive_constants(params, profile)?;
    if constants.k3 == 0.0 {
        return Ok(None);
    }
    let (u0, udot0, comp0) = match profile.axis() {
        GaugeAxis::YGauge => (params.y0, params.vy0, params.x0),
        GaugeAxis::XGauge => (params.x0, params.vx0, params.y0),
        GaugeAxis::Radial => unreachable!("derive_constants rejected radial"),
    };
    let motion = QuadratureMotion::with_constants(constants, profile, u0, udot0, comp0, t_end)?;
    Ok(motion.period())
}

/// Integrate the companion coordinate from sampled transverse motion:
/// the cumulative integral of `w(u(t)) = k1 + s k2 u f(u)` over the given
/// time grid, anchored at `anchor`.
pub fn companion_coordinate(
    ts: &[f64],
    us: &[f64],
    constants: &MotionConstants,
    profile: &FieldProfile,
    anchor: f64,
) -> Result<Vec<f64>> {
    if ts.len() != us.len() {
        return Err(Error::Config("time and coordinate sample lengths differ".into()));
    }
    let mut w = Vec::with_capacity(us.len());
    for &u in us {
        w.push(companion_velocity(constants, profile, u)?);
    }
    Ok(cumulative_quadratic(ts, &w).into_iter().map(|v| anchor + v).collect())
}

fn sample_times(t_end: f64, n_samples: usize) -> Vec<f64> {
    if n_samples == 1 {
        return vec![0.0];
    }
    (0..n_samples)
        .map(|i| t_end * i as f64 / (n_samples - 1) as f64)
        .collect()
}

fn stationary_trajectory(
    params: &ParticleParams,
    profile: &FieldProfile,
    constants: &MotionConstants,
    t_end: f64,
    n_samples: usize,
) -> Result<Trajectory> {
    let times = sample_times(t_end, n_samples);
    let samples: Vec<TrajectorySample> = times
        .iter()
        .map(|&t| TrajectorySample { t, x: params.x0, y: params.y0, vx: 0.0, vy: 0.0 })
        .collect();
    let (er, mr) = residuals(&samples, constants, profile)?;
    Trajectory::new(
        TrajectoryMethod::Quadrature,
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

/// Per-sample conserved-quantity residuals for Landau-gauge trajectories.
pub(crate) fn residuals(
    samples: &[TrajectorySample],
    constants: &MotionConstants,
    profile: &FieldProfile,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut er = Vec::with_capacity(samples.len());
    let mut mr = Vec::with_capacity(samples.len());
    for s in samples {
        let v2 = s.vx * s.vx + s.vy * s.vy;
        er.push((v2 - constants.k3).abs() / constants.k3.max(1e-12));
        let m = match profile.axis() {
            GaugeAxis::YGauge => {
                (s.vx - constants.k1 - constants.k2 * profile.shape_times_u(s.y)?).abs()
            }
            GaugeAxis::XGauge => {
                (s.vy - constants.k1 + constants.k2 * profile.shape_times_u(s.x)?).abs()
            }
            GaugeAxis::Radial => {
                return Err(Error::Config("radial residuals are oracle-specific".into()))
            }
        };
        mr.push(m);
    }
    Ok((er, mr))
}
