//! Run configuration: a JSON file with strictly validated keys, plus a
//! few flag overrides from the command line.

use std::fs;
use std::path::{Path, PathBuf};

use fieldline_core::{
    derive_constants, turning_points, ExpClosedFormConstants, FieldProfile, GaugeAxis,
    MotionConstants, ParticleParams, ProfileKind,
};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub profile: ProfileConfig,
    #[serde(default)]
    pub particle: Option<ParticleConfig>,
    #[serde(default)]
    pub constants: Option<ConstantsConfig>,
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default)]
    pub time: TimeConfig,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub susy: SusyConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_method() -> String {
    "quadrature".to_string()
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub name: String,
    #[serde(default = "one")]
    pub b0: f64,
    #[serde(default)]
    pub axis: Option<String>,
    #[serde(default)]
    pub a: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    /// Constant-shape value for `name = "constant"`.
    #[serde(default)]
    pub value: Option<f64>,
    /// CSV table path for `name = "table"` (columns `u,f`) or
    /// `name = "field_table"` (columns `u,b`, inverted through the gauge
    /// relation).
    #[serde(default)]
    pub table: Option<PathBuf>,
    /// Integration constant for inverted profiles.
    #[serde(default)]
    pub c: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleConfig {
    #[serde(default = "one")]
    pub q: f64,
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default)]
    pub x0: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub vx0: f64,
    #[serde(default)]
    pub vy0: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
}

fn default_t_end() -> f64 {
    10.0
}

fn default_samples() -> usize {
    1000
}

impl Default for TimeConfig {
    fn default() -> Self {
        TimeConfig { t_end: default_t_end(), n_samples: default_samples() }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceConfig {
    #[serde(default = "default_quad_abs")]
    pub quadrature_abs: f64,
    #[serde(default = "default_ode_rel")]
    pub ode_rel: f64,
    #[serde(default = "default_ode_abs")]
    pub ode_abs: f64,
    /// Conserved-energy residual gate applied to every produced
    /// trajectory; a breach is an internal invariant violation. The
    /// default leaves headroom for the oracle's per-step tolerance to
    /// accumulate over long horizons.
    #[serde(default = "default_energy_tol")]
    pub energy: f64,
}

fn default_quad_abs() -> f64 {
    1e-10
}
fn default_ode_rel() -> f64 {
    1e-9
}
fn default_ode_abs() -> f64 {
    1e-12
}
fn default_energy_tol() -> f64 {
    1e-6
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            quadrature_abs: default_quad_abs(),
            ode_rel: default_ode_rel(),
            ode_abs: default_ode_abs(),
            energy: default_energy_tol(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SusyConfig {
    #[serde(default)]
    pub m_quantum: i64,
    #[serde(default = "default_spin")]
    pub spin: String,
    #[serde(default = "default_levels")]
    pub n_levels: usize,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "default_convention")]
    pub convention: String,
    #[serde(default = "default_r_min")]
    pub r_min: f64,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_table_rows")]
    pub n_table: usize,
}

fn default_spin() -> String {
    "lower".into()
}
fn default_levels() -> usize {
    6
}
fn default_convention() -> String {
    "half_integer".into()
}
fn default_r_min() -> f64 {
    0.01
}
fn default_r_max() -> f64 {
    10.0
}
fn default_table_rows() -> usize {
    500
}

impl Default for SusyConfig {
    fn default() -> Self {
        SusyConfig {
            m_quantum: 0,
            spin: default_spin(),
            n_levels: default_levels(),
            hbar: 1.0,
            mass: 1.0,
            convention: default_convention(),
            r_min: default_r_min(),
            r_max: default_r_max(),
            n_table: default_table_rows(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_basename")]
    pub basename: String,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}
fn default_basename() -> String {
    "run".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: default_dir(), basename: default_basename() }
    }
}

const METHODS: &[&str] = &["quadrature", "closed-form", "ode", "all"];

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !METHODS.contains(&self.method.as_str()) && !self.method.contains(',') {
            return Err(CliError::config(format!(
                "unknown method '{}'; expected one of {METHODS:?} or a comma list",
                self.method
            )));
        }
        for name in self.method.split(',') {
            let name = name.trim();
            if !METHODS.contains(&name) {
                return Err(CliError::config(format!("unknown method '{name}'")));
            }
        }
        let t = &self.time;
        if !(t.t_end.is_finite() && t.t_end > 0.0) {
            return Err(CliError::config(format!("time.t_end = {} must be positive", t.t_end)));
        }
        if t.n_samples < 2 {
            return Err(CliError::config("time.n_samples must be at least 2".into()));
        }
        let tol = &self.tolerances;
        for (name, v) in [
            ("quadrature_abs", tol.quadrature_abs),
            ("ode_rel", tol.ode_rel),
            ("ode_abs", tol.ode_abs),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::config(format!("tolerances.{name} = {v} must be positive")));
            }
        }
        if !(tol.energy.is_finite() && tol.energy >= 0.0) {
            return Err(CliError::config("tolerances.energy must be non-negative".into()));
        }
        if let Some(g) = &self.grid {
            if !(g.start.is_finite() && g.stop.is_finite() && g.stop > g.start) || g.n < 2 {
                return Err(CliError::config(format!(
                    "bad grid: start {} stop {} n {}",
                    g.start, g.stop, g.n
                )));
            }
        }
        if let Some(p) = &self.particle {
            let vals = [p.q, p.m, p.x0, p.y0, p.vx0, p.vy0];
            if !vals.iter().all(|v| v.is_finite()) {
                return Err(CliError::config("particle parameters must be finite".into()));
            }
        }
        if let Some(c) = &self.constants {
            if ![c.k1, c.k2, c.k3].iter().all(|v| v.is_finite()) || c.k3 < 0.0 {
                return Err(CliError::config("constants must be finite with k3 >= 0".into()));
            }
        }
        let s = &self.susy;
        if !["lower", "upper"].contains(&s.spin.as_str()) {
            return Err(CliError::config(format!("susy.spin '{}' must be lower or upper", s.spin)));
        }
        if !["half_integer", "integer"].contains(&s.convention.as_str()) {
            return Err(CliError::config(format!(
                "susy.convention '{}' must be half_integer or integer",
                s.convention
            )));
        }
        if !(s.r_min > 0.0 && s.r_max > s.r_min && s.n_table >= 2) {
            return Err(CliError::config("susy grid needs 0 < r_min < r_max and n_table >= 2".into()));
        }
        Ok(())
    }

    pub fn build_profile(&self) -> Result<FieldProfile, CliError> {
        let pc = &self.profile;
        let b0 = match &self.constants {
            // Constants mode pins q = m = 1, so b0 is k2.
            Some(c) => c.k2,
            None => pc.b0,
        };
        let axis = match pc.axis.as_deref() {
            None => None,
            Some("y") => Some(GaugeAxis::YGauge),
            Some("x") => Some(GaugeAxis::XGauge),
            Some("radial") => Some(GaugeAxis::Radial),
            Some(other) => {
                return Err(CliError::config(format!(
                    "unknown axis '{other}'; expected y, x, or radial"
                )))
            }
        };
        let profile = match pc.name.as_str() {
            "constant" => {
                let value = pc
                    .value
                    .ok_or_else(|| CliError::config("constant profile needs 'value'".into()))?;
                FieldProfile::constant_shape(value, b0, axis.unwrap_or(GaugeAxis::YGauge))
                    .map_err(CliError::from)?
            }
            "table" => {
                let path = pc
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::config("table profile needs 'table' path".into()))?;
                let points = read_table(path)?;
                FieldProfile::from_table(&points, b0, axis.unwrap_or(GaugeAxis::YGauge))
                    .map_err(CliError::from)?
            }
            "field_table" => {
                let path = pc
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::config("field_table profile needs 'table' path".into()))?;
                let points = read_table(path)?;
                if points.len() < 4 {
                    return Err(CliError::config("field table needs at least 4 rows".into()));
                }
                let interp = FieldProfile::from_table(&points, 1.0, GaugeAxis::YGauge)
                    .map_err(CliError::from)?;
                let c = pc.c.unwrap_or(0.0);
                FieldProfile::from_field_shape(
                    move |u: f64| interp.shape(u).unwrap_or(f64::NAN),
                    c,
                    b0,
                    axis.unwrap_or(GaugeAxis::YGauge),
                )
                .map_err(CliError::from)?
                .with_label("field_table")
            }
            name => {
                let kind = ProfileKind::from_name(name, pc.a, pc.b).map_err(CliError::from)?;
                let p = FieldProfile::make_builtin(kind, b0).map_err(CliError::from)?;
                match axis {
                    Some(ax) => p.with_axis(ax),
                    None => p,
                }
            }
        };
        Ok(profile)
    }

    /// Resolve the particle state: explicit `particle` wins; otherwise the
    /// `constants` block is anchored at the profile's canonical start
    /// (closed-form anchor where one exists, else a turning point).
    pub fn build_particle(&self, profile: &FieldProfile) -> Result<ParticleParams, CliError> {
        if let Some(p) = &self.particle {
            return ParticleParams::new(p.q, p.m, p.x0, p.y0, p.vx0, p.vy0).map_err(CliError::from);
        }
        let c = self.constants.as_ref().ok_or_else(|| {
            CliError::config("config needs either a 'particle' or a 'constants' block".into())
        })?;
        let constants = MotionConstants::new(c.k1, c.k2, c.k3).map_err(CliError::from)?;
        anchor_from_constants(&constants, profile)
    }
}

/// Canonical initial conditions for a constants-specified run (q = m = 1).
pub fn anchor_from_constants(
    constants: &MotionConstants,
    profile: &FieldProfile,
) -> Result<ParticleParams, CliError> {
    let k = constants;
    if k.k3 == 0.0 {
        return ParticleParams::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).map_err(CliError::from);
    }
    let params = match profile.builtin_kind() {
        Some(ProfileKind::Uniform) => {
            if k.k2 == 0.0 {
                return Err(CliError::config("uniform profile with k2 = 0 has no orbit".into()));
            }
            let y0 = (k.k3.sqrt() - k.k1) / k.k2;
            ParticleParams::new(1.0, 1.0, 0.0, y0, k.k3.sqrt(), 0.0)
        }
        Some(ProfileKind::ZeroField) => {
            let along = k.k1 + k.k2;
            let trans2 = k.k3 - along * along;
            if trans2 < 0.0 {
                return Err(CliError::config(format!(
                    "zero-field constants need k3 >= (k1+k2)^2, got k3 = {} vs {}",
                    k.k3,
                    along * along
                )));
            }
            ParticleParams::new(1.0, 1.0, 0.0, 1.0, along, trans2.sqrt())
        }
        Some(ProfileKind::ExpDecay) => {
            match ExpClosedFormConstants::from_constants(k) {
                Ok(cf) => {
                    // Closed-form anchor: y(0) = log(m), ascending.
                    let y0 = cf.m_aux.ln();
                    let vy0 = cf.l * cf.alpha() / cf.m_aux;
                    let vx0 = k.k1 + k.k2 * profile.shape_times_u(y0).map_err(CliError::from)?;
                    ParticleParams::new(1.0, 1.0, 0.0, y0, vx0, vy0)
                }
                Err(_) => {
                    // Unbounded regime: start at the single lower turning
                    // point, moving up.
                    let scan = turning_points(k, profile, (-50.0, 50.0)).map_err(CliError::from)?;
                    let tp = scan.points.first().ok_or_else(|| {
                        CliError::config("no turning point found for these constants".into())
                    })?;
                    let y0 = tp.coordinate;
                    let vx0 = k.k1 + k.k2 * profile.shape_times_u(y0).map_err(CliError::from)?;
                    ParticleParams::new(1.0, 1.0, 0.0, y0, vx0, 0.0)
                }
            }
        }
        _ => {
            return Err(CliError::config(format!(
                "constants-mode anchoring is defined for uniform, zero_field, and exp_decay \
                 profiles; give an explicit particle block for '{}'",
                profile.label()
            )))
        }
    };
    let params = params.map_err(CliError::from)?;
    // The anchor must reproduce the requested constants.
    let check = derive_constants(&params, profile).map_err(CliError::from)?;
    if (check.k1 - k.k1).abs() > 1e-9 * (1.0 + k.k1.abs())
        || (check.k3 - k.k3).abs() > 1e-9 * (1.0 + k.k3)
    {
        return Err(CliError::config(format!(
            "constants anchor is inconsistent: requested (k1, k3) = ({}, {}), got ({}, {})",
            k.k1, k.k3, check.k1, check.k3
        )));
    }
    Ok(params)
}

fn read_table(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read table {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',');
        let (Some(a), Some(b)) = (cols.next(), cols.next()) else {
            return Err(CliError::config(format!("table line {} needs two columns", idx + 1)));
        };
        match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
            (Ok(u), Ok(f)) => out.push((u, f)),
            _ if idx == 0 => continue, // header row
            _ => {
                return Err(CliError::config(format!(
                    "table line {}: cannot parse '{line}'",
                    idx + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::config(format!("table {} has no data rows", path.display())));
    }
    Ok(out)
}
