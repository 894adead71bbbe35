//! Motion constants, the quadrature radicand, and turning-point analysis.
//!
//! For a Landau-gauge profile the cyclic coordinate yields a conserved
//! momentum, and energy conservation reduces the transverse motion to
//!
//! ```text
//! du/dt = +- sqrt(g(u)),   g(u) = k3 - (k1 + s k2 u f(u))^2
//! ```
//!
//! with `s = +1` for the y gauge and `s = -1` for the x gauge. Roots of
//! `g` are the turning points of the transverse coordinate.

use crate::error::{Error, Result};
use crate::field::{FieldProfile, GaugeAxis};
use crate::numerics::roots::{bisect, refine_extremum};

/// Charge, mass, and initial phase-space point of the particle.
#[derive(Debug, Clone, Copy)]
pub struct ParticleParams {
    pub charge: f64,
    pub mass: f64,
    pub x0: f64,
    pub y0: f64,
    pub vx0: f64,
    pub vy0: f64,
}

impl ParticleParams {
    pub fn new(charge: f64, mass: f64, x0: f64, y0: f64, vx0: f64, vy0: f64) -> Result<Self> {
        let p = ParticleParams { charge, mass, x0, y0, vx0, vy0 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let vals = [self.charge, self.mass, self.x0, self.y0, self.vx0, self.vy0];
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(Error::Config("particle parameters must be finite".into()));
        }
        if self.mass <= 0.0 {
            return Err(Error::Config(format!("mass must be positive, got {}", self.mass)));
        }
        Ok(())
    }

    pub fn speed_squared(&self) -> f64 {
        self.vx0 * self.vx0 + self.vy0 * self.vy0
    }
}

/// The three constants that fully parametrize the planar dynamics:
/// conserved momentum per mass, cyclotron scale, and twice the energy per
/// mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

impl MotionConstants {
    pub fn new(k1: f64, k2: f64, k3: f64) -> Result<Self> {
        if ![k1, k2, k3].iter().all(|v| v.is_finite()) {
            return Err(Error::Config("motion constants must be finite".into()));
        }
        if k3 < 0.0 {
            return Err(Error::Config(format!("k3 = {k3} is a squared speed and cannot be negative")));
        }
        Ok(MotionConstants { k1, k2, k3 })
    }

    /// Magnitude scale of the radicand, used for root tolerances.
    pub fn radicand_scale(&self) -> f64 {
        self.k3.max(self.k1 * self.k1).max(1e-300)
    }
}

/// Sign of the gauge term in the companion velocity: `+1` for the y
/// gauge, `-1` for the x gauge.
pub fn gauge_sign(axis: GaugeAxis) -> Result<f64> {
    match axis {
        GaugeAxis::YGauge => Ok(1.0),
        GaugeAxis::XGauge => Ok(-1.0),
        GaugeAxis::Radial => Err(Error::Config(
            "radial profiles have no cyclic Cartesian coordinate; use the ODE oracle".into(),
        )),
    }
}

/// Derive the motion constants from initial data.
///
/// `k2 = q b0/m`; `k1` is the conserved gauge momentum per mass at the
/// initial point; `k3` is the squared initial speed.
pub fn derive_constants(params: &ParticleParams, profile: &FieldProfile) -> Result<MotionConstants> {
    params.validate()?;
    let s = gauge_sign(profile.axis())?;
    let k2 = params.charge * profile.b0() / params.mass;
    let (u0, v_cyclic) = match profile.axis() {
        GaugeAxis::YGauge => (params.y0, params.vx0),
        GaugeAxis::XGauge => (params.x0, params.vy0),
        GaugeAxis::Radial => unreachable!(),
    };
    let uf = profile.shape_times_u(u0)?;
    let k1 = v_cyclic - s * k2 * uf;
    MotionConstants::new(k1, k2, params.speed_squared())
}

/// Companion (cyclic-coordinate) velocity `w(u) = k1 + s k2 u f(u)`.
pub fn companion_velocity(
    constants: &MotionConstants,
    profile: &FieldProfile,
    u: f64,
) -> Result<f64> {
    let s = gauge_sign(profile.axis())?;
    Ok(constants.k1 + s * constants.k2 * profile.shape_times_u(u)?)
}

/// The quadrature radicand `g(u) = k3 - w(u)^2`.
pub fn radicand(constants: &MotionConstants, profile: &FieldProfile, u: f64) -> Result<f64> {
    let w = companion_velocity(constants, profile, u)?;
    Ok(constants.k3 - w * w)
}

/// Analytic derivative `g'(u) = -2 w(u) s k2 B(u)/b0`.
pub fn radicand_derivative(
    constants: &MotionConstants,
    profile: &FieldProfile,
    u: f64,
) -> Result<f64> {
    let s = gauge_sign(profile.axis())?;
    let w = companion_velocity(constants, profile, u)?;
    Ok(-2.0 * w * s * constants.k2 * profile.field(u)? / profile.b0())
}

/// Root multiplicity as seen by the sign of `g` on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TurningPointKind {
    Simple,
    Double,
}

#[derive(Debug, Clone, Copy)]
pub struct TurningPoint {
    pub coordinate: f64,
    pub kind: TurningPointKind,
}

/// Outcome flags of a turning-point scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanFlag {
    /// A double root was found: separatrix motion with divergent period.
    Degenerate,
    /// No roots in the bracket: the motion is unbounded there, or the
    /// whole bracket is classically forbidden.
    UnboundedOrForbidden,
}

#[derive(Debug, Clone)]
pub struct TurningPointScan {
    pub points: Vec<TurningPoint>,
    pub flag: Option<ScanFlag>,
}

/// Number of grid cells used when scanning for sign changes of `g`.
const SCAN_CELLS: usize = 2048;

/// Find the roots of the radicand on `bracket`, each refined by bisection
/// to `|g| < 1e-12 * scale`. Simple roots come from sign changes; double
/// roots from near-zero interior extrema.
pub fn turning_points(
    constants: &MotionConstants,
    profile: &FieldProfile,
    bracket: (f64, f64),
) -> Result<TurningPointScan> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Config(format!("bad turning-point bracket [{lo}, {hi}]")));
    }

    let g = |u: f64| radicand(constants, profile, u).unwrap_or(f64::NAN);
    let n = SCAN_CELLS;
    let mut us = Vec::with_capacity(n + 1);
    let mut gs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let u = lo + (hi - lo) * i as f64 / n as f64;
        us.push(u);
        gs.push(g(u));
    }

    // Tolerance scale: near a root, g varies on the scale of the constants
    // themselves. Only when those degenerate (k1 = k3 = 0) fall back to
    // the observed radicand range.
    let base = constants.k3.max(constants.k1 * constants.k1);
    let scale = if base > 0.0 {
        base
    } else {
        gs.iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |a, &b| a.max(b.abs()))
            .max(1e-300)
    };
    let g_tol = 1e-12 * scale;
    let double_tol = 1e-10 * scale;

    let mut points: Vec<TurningPoint> = Vec::new();
    let push_unique = |pt: TurningPoint, pts: &mut Vec<TurningPoint>| {
        let sep = 1e-10 * (1.0 + pt.coordinate.abs());
        if !pts.iter().any(|p| (p.coordinate - pt.coordinate).abs() < sep) {
            pts.push(pt);
        }
    };

    // Exact zeros landing on grid points are classified by the signs on
    // both sides (same sign means a double root).
    let mut flag = None;
    for i in 0..=n {
        if gs[i] != 0.0 {
            continue;
        }
        let left = if i > 0 { gs[i - 1] } else { f64::NAN };
        let right = if i < n { gs[i + 1] } else { f64::NAN };
        let kind = if left.is_finite() && right.is_finite() && left * right > 0.0 {
            flag = Some(ScanFlag::Degenerate);
            TurningPointKind::Double
        } else {
            TurningPointKind::Simple
        };
        push_unique(TurningPoint { coordinate: us[i], kind }, &mut points);
    }

    // Simple roots: sign changes between finite neighbours.
    for i in 0..n {
        let (ga, gb) = (gs[i], gs[i + 1]);
        if !(ga.is_finite() && gb.is_finite()) || ga == 0.0 || gb == 0.0 {
            continue;
        }
        if ga.signum() != gb.signum() {
            if let Some(r) = bisect(g, us[i], us[i + 1], g_tol, 0.0) {
                push_unique(
                    TurningPoint { coordinate: r, kind: TurningPointKind::Simple },
                    &mut points,
                );
            }
        }
    }

    // Double roots: interior extrema of g that touch zero without a sign
    // change.
    for i in 1..n {
        let (gm, gc, gp) = (gs[i - 1], gs[i], gs[i + 1]);
        if !(gm.is_finite() && gc.is_finite() && gp.is_finite()) {
            continue;
        }
        let local_max = gc >= gm && gc >= gp && gc <= 0.0;
        let local_min = gc <= gm && gc <= gp && gc >= 0.0;
        if !(local_max || local_min) {
            continue;
        }
        if gc.abs() > double_tol * 1e4 {
            continue;
        }
        let u_ext = refine_extremum(g, us[i - 1], us[i + 1], local_max);
        let g_ext = g(u_ext);
        if g_ext.is_finite() && g_ext.abs() <= double_tol {
            // Skip if it coincides with an already-found simple root pair.
            let sep = 1e-8 * (1.0 + u_ext.abs());
            if !points.iter().any(|p| (p.coordinate - u_ext).abs() < sep) {
                points.push(TurningPoint { coordinate: u_ext, kind: TurningPointKind::Double });
                flag = Some(ScanFlag::Degenerate);
            }
        }
    }

    points.sort_by(|a, b| a.coordinate.partial_cmp(&b.coordinate).unwrap());
    if points.is_empty() {
        flag = Some(ScanFlag::UnboundedOrForbidden);
    }
    Ok(TurningPointScan { points, flag })
}

/// Constants of the exponential-profile closed form.
///
/// `alpha2 = (k1+k2)^2 - k3` must be positive and the log argument
/// `l sin + m_aux` must stay positive for the closed form to exist.
#[derive(Debug, Clone, Copy)]
pub struct ExpClosedFormConstants {
    pub alpha2: f64,
    pub beta: f64,
    pub l: f64,
    pub m_aux: f64,
}

impl ExpClosedFormConstants {
    pub fn from_constants(c: &MotionConstants) -> Result<Self> {
        let a_sum = c.k1 + c.k2;
        let alpha2 = a_sum * a_sum - c.k3;
        if alpha2 <= 0.0 {
            return Err(Error::ClosedFormUnavailable(format!(
                "(k1+k2)^2 - k3 = {alpha2} <= 0; the oscillatory closed form needs it positive"
            )));
        }
        let beta = 2.0 * c.k1 * c.k2 + 2.0 * c.k2 * c.k2;
        let l = c.k3.sqrt() * c.k2 / alpha2;
        let m_aux = beta / (2.0 * alpha2);
        if m_aux - l.abs() <= 0.0 {
            return Err(Error::ClosedFormUnavailable(format!(
                "log argument l sin + m touches zero (l = {l}, m = {m_aux})"
            )));
        }
        Ok(ExpClosedFormConstants { alpha2, beta, l, m_aux })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha2.sqrt()
    }
}
