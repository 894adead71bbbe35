//! Radial spin-1/2 analysis for rotationally symmetric profiles: the
//! effective potential of the lower spin branch, its first-order
//! factorization, the zero mode and its square-integrability verdict, and
//! semiclassical (SWKB) energy levels from the superpotential.
//!
//! All wave-function work happens in log space, so steep Gaussian-type
//! factors never overflow.

use crate::error::{Error, Result};
use crate::field::{FieldProfile, GaugeAxis};
use crate::numerics::quad::GaussLegendre;
use crate::numerics::roots::bisect;

/// Eigenvalue branch of the spin term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinBranch {
    Lower,
    Upper,
}

/// A radial spin problem: field scale, profile, angular momentum quantum
/// number, spin branch and units.
#[derive(Debug, Clone)]
pub struct SusyProblem {
    pub b0: f64,
    pub profile: FieldProfile,
    pub m_quantum: i64,
    pub spin_branch: SpinBranch,
    pub hbar: f64,
    pub mass: f64,
}

impl SusyProblem {
    /// Natural units, lower branch. The profile must live on the radial
    /// axis.
    pub fn new(profile: FieldProfile, m_quantum: i64) -> Result<Self> {
        if profile.axis() != GaugeAxis::Radial {
            return Err(Error::Config(format!(
                "spin analysis needs a radial profile, got the {} axis",
                profile.axis()
            )));
        }
        let b0 = profile.b0();
        Ok(SusyProblem { b0, profile, m_quantum, spin_branch: SpinBranch::Lower, hbar: 1.0, mass: 1.0 })
    }

    pub fn with_spin(mut self, branch: SpinBranch) -> Self {
        self.spin_branch = branch;
        self
    }

    pub fn with_units(mut self, hbar: f64, mass: f64) -> Self {
        self.hbar = hbar;
        self.mass = mass;
        self
    }

    /// The operator factorization only holds on the lower branch with
    /// non-positive angular momentum; other inputs are accepted but
    /// flagged so callers can refuse them.
    pub fn in_factorization_regime(&self) -> bool {
        self.spin_branch == SpinBranch::Lower && self.m_quantum <= 0
    }

    /// Radial exponent `p = |m| + 1/2` of the zero mode.
    pub fn orbital_exponent(&self) -> f64 {
        self.m_quantum.unsigned_abs() as f64 + 0.5
    }
}

/// Effective radial potential after separating the angular factor and
/// removing the first-derivative term:
///
/// ```text
/// V(r) = B^2 r^2 f^2 + 2 B m f + (m^2 - 1/4)/r^2 -+ (2 B f + B r f')
/// ```
///
/// with `-` on the lower spin branch and `+` on the upper.
pub fn effective_potential(problem: &SusyProblem, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain { what: "radial potential needs r > 0".into(), at: r });
    }
    let b = problem.b0;
    let m = problem.m_quantum as f64;
    let f = problem.profile.shape(r)?;
    let fp = problem.profile.shape_prime(r)?;
    let orbital = b * b * r * r * f * f + 2.0 * b * m * f + (m * m - 0.25) / (r * r);
    let spin = 2.0 * b * f + b * r * fp;
    Ok(match problem.spin_branch {
        SpinBranch::Lower => orbital - spin,
        SpinBranch::Upper => orbital + spin,
    })
}

/// Non-derivative coefficient of the annihilation operator:
/// `B r f(r) - (|m| + 1/2)/r`.
pub fn annihilation_drift(problem: &SusyProblem, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain { what: "annihilation drift needs r > 0".into(), at: r });
    }
    let p = problem.orbital_exponent();
    Ok(problem.b0 * problem.profile.shape_times_u(r)? - p / r)
}

/// The zero mode `psi_0(r) = N_0 r^p exp(-S(r))` with
/// `S(r) = B ∫ s f(s) ds` anchored so `S(anchor) = 0`; the anchor is the
/// origin whenever `s f(s)` is integrable there.
#[derive(Debug, Clone)]
pub struct ZeroMode {
    pub exponent: f64,
    pub anchor: f64,
    b0: f64,
    hbar: f64,
    mass: f64,
    profile: FieldProfile,
}

/// Build the zero mode of the annihilation operator.
pub fn zero_mode(problem: &SusyProblem) -> Result<ZeroMode> {
    // Probe the action integral once to surface divergences early.
    let (anchor, probe) = problem.profile.shape_action_integral(1.0)?;
    if !probe.is_finite() {
        return Err(Error::Numeric {
            stage: "zero mode",
            message: "radial action integral diverges at finite r".into(),
        });
    }
    Ok(ZeroMode {
        exponent: problem.orbital_exponent(),
        anchor,
        b0: problem.b0,
        hbar: problem.hbar,
        mass: problem.mass,
        profile: problem.profile.clone(),
    })
}

impl ZeroMode {
    /// Radial action `S(r)` with `S(anchor) = 0`.
    pub fn action(&self, r: f64) -> Result<f64> {
        let (_, integral) = self.profile.shape_action_integral(r)?;
        let val = self.b0 * integral;
        if !val.is_finite() {
            return Err(Error::Numeric {
                stage: "zero mode",
                message: format!("radial action not finite at r = {r}"),
            });
        }
        Ok(val)
    }

    /// `log psi_0(r) = p log r - S(r)` (normalization constant dropped).
    pub fn log_psi(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(Error::Domain { what: "zero mode needs r > 0".into(), at: r });
        }
        Ok(self.exponent * r.ln() - self.action(r)?)
    }

    /// `d/dr log psi_0 = p/r - B r f(r)`.
    pub fn log_psi_prime(&self, r: f64) -> Result<f64> {
        if r <= 0.0 {
            return Err(Error::Domain { what: "zero mode needs r > 0".into(), at: r });
        }
        Ok(self.exponent / r - self.b0 * self.profile.shape_times_u(r)?)
    }

    /// Superpotential `W(r) = -(hbar/sqrt(2 mass)) psi_0'/psi_0
    ///                      = (hbar/sqrt(2 mass)) (B r f(r) - p/r)`.
    pub fn superpotential(&self, r: f64) -> Result<f64> {
        Ok(-self.hbar / (2.0 * self.mass).sqrt() * self.log_psi_prime(r)?)
    }

    /// Local power of `psi_0^2`: `d(2 log psi)/d(log r) = 2p - 2 B r^2 f(r)`.
    fn local_power(&self, r: f64) -> Result<f64> {
        Ok(2.0 * self.exponent - 2.0 * self.b0 * r * self.profile.shape_times_u(r)?)
    }
}

/// Square-integrability verdict for a zero mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Normalizable,
    NotNormalizable,
    Inconclusive,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct NormalizabilityVerdict {
    pub verdict: Verdict,
    /// The converged value of the norm integral, when it exists.
    pub norm_value: Option<f64>,
    /// Human-readable asymptotics summary.
    pub tail_report: String,
}

/// Log-sum-exp accumulator so the norm integral never overflows.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    max: f64,
    sum: f64,
}

impl LogSum {
    fn new() -> Self {
        LogSum { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    fn add(&mut self, log_term: f64) {
        if log_term == f64::NEG_INFINITY {
            return;
        }
        if log_term > self.max {
            self.sum = self.sum * (self.max - log_term).exp() + 1.0;
            self.max = log_term;
        } else {
            self.sum += (log_term - self.max).exp();
        }
    }

    fn log_value(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}

/// Rungs of the truncation ladder: `R = base * 2^k`. The zero mode decays
/// no faster than `r^{2p}` (p >= 1/2) at the origin, so the truncated
/// integral converges like `R^-2` there; 19 rungs push the final
/// increments safely below the Cauchy threshold.
const LADDER_RUNGS: usize = 19;
/// Cauchy threshold on consecutive truncated integrals.
const CAUCHY_TOL: f64 = 1e-10;

/// Decide square integrability of `psi_0^2` by a ladder of truncated
/// integrals `∫_{1/R}^{R}` with geometric `R`, cross-checked against the
/// local power of the integrand at both ends.
pub fn normalizability(zm: &ZeroMode) -> NormalizabilityVerdict {
    normalizability_with_base(zm, 4.0)
}

pub fn normalizability_with_base(zm: &ZeroMode, base: f64) -> NormalizabilityVerdict {
    let gl = GaussLegendre::new(16);
    // Integrate in v = log r: ∫ psi^2 dr = ∫ exp(2 log psi + v) dv.
    let log_term = |v: f64| -> f64 {
        match zm.log_psi(v.exp()) {
            Ok(lp) => 2.0 * lp + v,
            Err(_) => f64::NEG_INFINITY,
        }
    };

    let mut acc = LogSum::new();
    let mut log_integrals = Vec::with_capacity(LADDER_RUNGS);
    let mut v_hi_done = 0.0f64;
    let mut v_lo_done = 0.0f64;
    // Seed the core interval [1/base, base].
    let mut first = true;
    for k in 0..LADDER_RUNGS {
        let r_top = base * (2.0f64).powi(k as i32);
        let v_top = r_top.ln();
        if first {
            add_panels(&gl, &mut acc, &log_term, -v_top, v_top);
            first = false;
        } else {
            add_panels(&gl, &mut acc, &log_term, v_hi_done, v_top);
            add_panels(&gl, &mut acc, &log_term, -v_top, v_lo_done);
        }
        v_hi_done = v_top;
        v_lo_done = -v_top;
        log_integrals.push(acc.log_value());
    }

    let r_max = base * (2.0f64).powi(LADDER_RUNGS as i32 - 1);
    let top_slope = zm.log_psi_prime(r_max).map(|d| 2.0 * d).unwrap_or(f64::NAN);
    let top_power = zm.local_power(r_max).unwrap_or(f64::NAN);
    let lo_power = zm.local_power(1.0 / r_max).unwrap_or(f64::NAN);

    const LOG_CAP: f64 = 700.0;
    let values: Vec<f64> = log_integrals
        .iter()
        .map(|&l| if l > LOG_CAP { f64::INFINITY } else { l.exp() })
        .collect();
    let n = values.len();
    let tail_ok = values[n - 3..].iter().all(|v| v.is_finite());
    let cauchy = tail_ok
        && (values[n - 1] - values[n - 2]).abs() < CAUCHY_TOL
        && (values[n - 2] - values[n - 3]).abs() < CAUCHY_TOL;

    // Decay fast enough at infinity: slope bounded away from zero below,
    // or power-law decay steeper than 1/r.
    let decay_ok = top_slope < -1e-8 || top_power < -1.05;
    // Integrable at the origin: local power above -1.
    let origin_ok = lo_power > -0.95;

    let grows = {
        let inf = values.iter().any(|v| v.is_infinite());
        let geometric = if n >= 4 && tail_ok {
            let d1 = values[n - 1] - values[n - 2];
            let d2 = values[n - 2] - values[n - 3];
            let d3 = values[n - 3] - values[n - 4];
            d1 > 1e-8 && d1 >= 1.2 * d2 && d2 >= 1.2 * d3
        } else {
            false
        };
        inf || geometric
    };

    let tail_report = format!(
        "d(2 log psi)/dr at r={r_max:.0}: {top_slope:.3e}; log-log power at r={r_max:.0}: {top_power:.3e}; \
         log-log power at r={:.2e}: {lo_power:.3e}; ladder Cauchy(<{CAUCHY_TOL:.0e}): {cauchy}",
        1.0 / r_max
    );

    if cauchy && decay_ok && origin_ok {
        NormalizabilityVerdict {
            verdict: Verdict::Normalizable,
            norm_value: Some(values[n - 1]),
            tail_report,
        }
    } else if grows || !decay_ok || !origin_ok {
        NormalizabilityVerdict { verdict: Verdict::NotNormalizable, norm_value: None, tail_report }
    } else {
        NormalizabilityVerdict { verdict: Verdict::Inconclusive, norm_value: None, tail_report }
    }
}

fn add_panels(gl: &GaussLegendre, acc: &mut LogSum, log_term: &dyn Fn(f64) -> f64, lo: f64, hi: f64) {
    if hi <= lo {
        return;
    }
    let n_panels = ((hi - lo) / 0.25).ceil() as usize;
    let dv = (hi - lo) / n_panels as f64;
    for i in 0..n_panels {
        let a = lo + dv * i as f64;
        let b = a + dv;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (&x, &w) in gl.nodes.iter().zip(&gl.weights) {
            let v = mid + half * x;
            acc.add(log_term(v) + (w * half).ln());
        }
    }
}

/// Right-hand-side convention of the quantization condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantizationConvention {
    /// `(n + 1/2) pi hbar`.
    HalfInteger,
    /// `n pi hbar`.
    Integer,
}

impl QuantizationConvention {
    pub fn target(&self, n: usize, hbar: f64) -> f64 {
        match self {
            QuantizationConvention::HalfInteger => (n as f64 + 0.5) * std::f64::consts::PI * hbar,
            QuantizationConvention::Integer => n as f64 * std::f64::consts::PI * hbar,
        }
    }
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SpectrumLevel {
    pub n: usize,
    pub energy: f64,
    /// `I(E_n) - target`, the defect of the quantization condition.
    pub residual: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectrumResult {
    pub levels: Vec<SpectrumLevel>,
    pub convention: QuantizationConvention,
}

/// Quantization integral
/// `I(E) = ∫_{rL}^{rR} sqrt(2 mass (E - W^2(r))) dr`
/// between the turning points of `W^2 = E`, evaluated with the
/// endpoint-regularizing `sin^2` substitution.
pub fn quantization_integral(zm: &ZeroMode, energy: f64) -> Result<f64> {
    let well = WellGeometry::locate(zm)?;
    well.integral(zm, energy)?.ok_or_else(|| Error::Numeric {
        stage: "quantization integral",
        message: format!("no right turning point at E = {energy}: at or above the well rim"),
    })
}

struct WellGeometry {
    r_bottom: f64,
    gl: GaussLegendre,
}

impl WellGeometry {
    fn locate(zm: &ZeroMode) -> Result<Self> {
        let w = |r: f64| zm.superpotential(r).unwrap_or(f64::NAN);
        // Find the zeros of W on a wide log grid. Exactly one zero means a
        // single well with its bottom at W = 0; more than one means W^2
        // has multiple classically allowed regions.
        let (scan_lo, scan_hi) = (1e-8, 1e6);
        let n = 4000;
        let mut brackets: Vec<(f64, f64)> = Vec::new();
        let mut prev_r = scan_lo;
        let mut prev = w(prev_r);
        for i in 1..=n {
            let r = scan_lo * (scan_hi / scan_lo).powf(i as f64 / n as f64);
            let cur = w(r);
            if prev.is_finite() && cur.is_finite() && prev != 0.0 && prev.signum() != cur.signum() {
                brackets.push((prev_r, r));
            }
            prev_r = r;
            prev = cur;
        }
        match brackets.len() {
            0 => Err(Error::Numeric {
                stage: "superpotential well",
                message: "superpotential has no zero on the scanned range; no classically allowed well"
                    .into(),
            }),
            1 => {
                let (blo, bhi) = brackets[0];
                let r_bottom = bisect(w, blo, bhi, 0.0, 1e-15 * bhi).ok_or_else(|| Error::Numeric {
                    stage: "superpotential well",
                    message: "failed to refine the well bottom".into(),
                })?;
                Ok(WellGeometry { r_bottom, gl: GaussLegendre::new(16) })
            }
            count => Err(Error::MultiWell { count }),
        }
    }

    /// Turning points of `W^2 = E`. `None` when no right turning point is
    /// reachable (energy at/above the rim, or beyond numeric range).
    fn turning_points(&self, zm: &ZeroMode, energy: f64) -> Result<Option<(f64, f64)>> {
        if energy < 0.0 {
            return Err(Error::Config(format!("energy {energy} below the well minimum")));
        }
        let w2 = |r: f64| zm.superpotential(r).map(|w| w * w).unwrap_or(f64::NAN);
        // Left turning point: W^2 decreasing from +infinity to 0.
        let mut lo = self.r_bottom * 0.5;
        let mut shrinks = 0;
        while w2(lo) <= energy {
            lo *= 0.5;
            shrinks += 1;
            if shrinks > 400 {
                return Err(Error::Numeric {
                    stage: "quantization turning points",
                    message: format!("no left turning point above E = {energy}"),
                });
            }
        }
        let r_left = bisect(|r| w2(r) - energy, lo, self.r_bottom, 0.0, 1e-15)
            .ok_or_else(|| Error::Numeric {
                stage: "quantization turning points",
                message: "left turning point lost its bracket".into(),
            })?;
        // Right turning point: W^2 rising toward its (possibly finite)
        // supremum.
        let mut hi = self.r_bottom * 2.0;
        let mut expansions = 0;
        while w2(hi) <= energy {
            hi *= 2.0;
            expansions += 1;
            if expansions > 60 {
                return Ok(None);
            }
        }
        let r_right = bisect(|r| w2(r) - energy, self.r_bottom, hi, 0.0, 1e-13 * hi)
            .ok_or_else(|| Error::Numeric {
                stage: "quantization turning points",
                message: "right turning point lost its bracket".into(),
            })?;
        Ok(Some((r_left, r_right)))
    }

    /// `None` when the energy has no bounded allowed interval.
    fn integral(&self, zm: &ZeroMode, energy: f64) -> Result<Option<f64>> {
        if energy == 0.0 {
            return Ok(Some(0.0));
        }
        let Some((r_left, r_right)) = self.turning_points(zm, energy)? else {
            return Ok(None);
        };
        let span = r_right - r_left;
        let integrand = |theta: f64| -> f64 {
            let s = theta.sin();
            let r = r_left + span * s * s;
            let w = zm.superpotential(r).unwrap_or(f64::NAN);
            let inside = (energy - w * w).max(0.0);
            (2.0 * zm.mass * inside).sqrt() * 2.0 * span * s * theta.cos()
        };
        let half_pi = std::f64::consts::FRAC_PI_2;
        let panels = 48;
        let mut total = 0.0;
        for i in 0..panels {
            let a = half_pi * i as f64 / panels as f64;
            let b = half_pi * (i + 1) as f64 / panels as f64;
            total += self.gl.integrate(integrand, a, b);
        }
        if !total.is_finite() {
            return Err(Error::Numeric {
                stage: "quantization integral",
                message: format!("integral not finite at E = {energy}"),
            });
        }
        Ok(Some(total))
    }

    /// Largest feasible energy between a known-good `lo` and an infeasible
    /// `hi` (used when the well rim cuts off the search).
    fn feasible_below(&self, zm: &ZeroMode, mut lo: f64, mut hi: f64) -> Result<f64> {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.turning_points(zm, mid)?.is_some() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }
}

/// Solve the quantization condition `I(E_n) = target(n)` for
/// `n = 0 .. n_max` by bisection on the monotone integral.
pub fn swkb_levels(problem: &SusyProblem, n_max: usize) -> Result<SpectrumResult> {
    swkb_levels_with_convention(problem, n_max, QuantizationConvention::HalfInteger)
}

pub fn swkb_levels_with_convention(
    problem: &SusyProblem,
    n_max: usize,
    convention: QuantizationConvention,
) -> Result<SpectrumResult> {
    let zm = zero_mode(problem)?;
    let well = WellGeometry::locate(&zm)?;
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut e_known_lo: f64 = 0.0;
    for n in 0..=n_max {
        let target = convention.target(n, problem.hbar);
        if target == 0.0 {
            levels.push(SpectrumLevel { n, energy: 0.0, residual: 0.0 });
            continue;
        }
        // Expand the energy bracket upward until I crosses the target.
        let mut lo = e_known_lo;
        let mut hi = (e_known_lo.max(problem.b0.abs() * problem.hbar)).max(1e-9) * 2.0;
        loop {
            match well.integral(&zm, hi)? {
                Some(v) if v >= target => break,
                Some(v) => {
                    lo = hi;
                    hi *= 2.0;
                    if hi > 1e300 {
                        return Err(Error::NoLevel { n, max_integral: v, target });
                    }
                }
                None => {
                    // hi is past the reachable rim; bisect to the feasible
                    // top and check the target fits below it.
                    let e_top = well.feasible_below(&zm, lo, hi)?;
                    let i_top = well.integral(&zm, e_top)?.unwrap_or(f64::NAN);
                    if i_top.is_nan() || i_top < target {
                        return Err(Error::NoLevel { n, max_integral: i_top, target });
                    }
                    hi = e_top;
                    break;
                }
            }
        }
        // Bisection: I is monotone on a single well.
        let mut energy = 0.5 * (lo + hi);
        let mut residual = f64::MAX;
        for _ in 0..200 {
            energy = 0.5 * (lo + hi);
            let val = well.integral(&zm, energy)?.ok_or_else(|| Error::Numeric {
                stage: "quantization solve",
                message: format!("integral infeasible inside the bracket at E = {energy}"),
            })?;
            residual = val - target;
            if residual.abs() < 5e-9 || (hi - lo) < 1e-16 * hi.max(1.0) {
                break;
            }
            if val < target {
                lo = energy;
            } else {
                hi = energy;
            }
        }
        if residual.abs() > 1e-8 {
            return Err(Error::Numeric {
                stage: "quantization solve",
                message: format!("level n = {n} stalled with residual {residual:e}"),
            });
        }
        e_known_lo = energy;
        levels.push(SpectrumLevel { n, energy, residual });
    }
    Ok(SpectrumResult { levels, convention })
}
