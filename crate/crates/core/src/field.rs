//! Gauge shape functions and the non-uniform magnetic fields they generate.
//!
//! A profile is a scale `b0` plus a dimensionless shape `f` attached to one
//! gauge axis. With the vector potential `A_x = -u B f(u)` (or the x-gauge
//! and radial analogues) the physical field along z is
//!
//! ```text
//! B(u) = b0 * (u f'(u) + f(u)) = b0 * d/du [u f(u)]
//! ```
//!
//! so the product `u f(u)` is the quantity that actually drives the
//! dynamics; profiles expose it directly to avoid needless 0/0 care.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::interp::MonotoneCubic;
use crate::numerics::quad::adaptive_simpson;

/// Which coordinate carries the gauge shape function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum GaugeAxis {
    /// `A_x = -y b0 f(y)`: x is cyclic, y is the quadrature coordinate.
    YGauge,
    /// `A_y = x b0 f(x)`: y is cyclic, x is the quadrature coordinate.
    XGauge,
    /// `A = b0 f(r) (-y, x)` with `r = sqrt(x^2+y^2)` (spin problems).
    Radial,
}

impl fmt::Display for GaugeAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaugeAxis::YGauge => write!(f, "y"),
            GaugeAxis::XGauge => write!(f, "x"),
            GaugeAxis::Radial => write!(f, "radial"),
        }
    }
}

/// Built-in shape families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// `f = 1`: uniform field `b0`.
    Uniform,
    /// `f = 1/u`: the gauge term is constant, so the field vanishes.
    ZeroField,
    /// `f = (1 - e^{-u})/u`: exponentially decaying field `b0 e^{-u}`.
    ExpDecay,
    /// Same shape as `ExpDecay` but on the radial axis.
    RadialExp,
    /// `f = (u - a)(u - b)/u^2`.
    RationalAb { a: f64, b: f64 },
}

impl ProfileKind {
    /// Parse a configuration name. `a`/`b` are consumed by `RationalAb`.
    pub fn from_name(name: &str, a: Option<f64>, b: Option<f64>) -> Result<Self> {
        match name {
            "uniform" => Ok(ProfileKind::Uniform),
            "zero_field" => Ok(ProfileKind::ZeroField),
            "exp_decay" => Ok(ProfileKind::ExpDecay),
            "radial_exp" => Ok(ProfileKind::RadialExp),
            "rational_ab" => {
                let (a, b) = (
                    a.ok_or_else(|| Error::Config("rational_ab needs parameter 'a'".into()))?,
                    b.ok_or_else(|| Error::Config("rational_ab needs parameter 'b'".into()))?,
                );
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::Config("rational_ab parameters must be finite".into()));
                }
                Ok(ProfileKind::RationalAb { a, b })
            }
            other => Err(Error::Config(format!("unknown profile kind '{other}'"))),
        }
    }
}

/// Shape function of an inverted profile: `b` is the dimensionless field
/// shape, so `u f(u) = ∫ b + c`.
type FieldShapeFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    Uniform,
    ZeroField,
    ExpDecay,
    RationalAb { a: f64, b: f64 },
    Constant(f64),
    /// Solved from a target field shape: `f = (∫_base^u b + c)/u`.
    Inverted { field_shape: FieldShapeFn, c: f64, base: f64 },
    /// Tabulated f interpolated shape-preservingly.
    Table(MonotoneCubic),
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Uniform => write!(f, "Uniform"),
            Shape::ZeroField => write!(f, "ZeroField"),
            Shape::ExpDecay => write!(f, "ExpDecay"),
            Shape::RationalAb { a, b } => write!(f, "RationalAb({a}, {b})"),
            Shape::Constant(c) => write!(f, "Constant({c})"),
            Shape::Inverted { c, base, .. } => write!(f, "Inverted(c={c}, base={base})"),
            Shape::Table(_) => write!(f, "Table"),
        }
    }
}

/// Threshold below which `(1 - e^{-u})/u` and its derivative switch to
/// their Taylor series; four terms keep the relative error below 1e-16
/// while dodging the 0/0.
const SERIES_EPS: f64 = 1e-4;

fn exp_decay_f(u: f64) -> f64 {
    if u.abs() < SERIES_EPS {
        1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0
    } else {
        -(-u).exp_m1() / u
    }
}

fn exp_decay_f_prime(u: f64) -> f64 {
    if u.abs() < SERIES_EPS {
        -0.5 + u / 3.0 - u * u / 8.0 + u * u * u / 30.0
    } else {
        ((-u).exp() * (1.0 + u) - 1.0) / (u * u)
    }
}

/// A magnetic-field profile: gauge axis, field scale, and shape function.
///
/// Values are immutable after construction and cheap to clone; they can be
/// shared and evaluated concurrently.
#[derive(Debug, Clone)]
pub struct FieldProfile {
    axis: GaugeAxis,
    b0: f64,
    label: String,
    shape: Shape,
}

impl FieldProfile {
    /// Construct a built-in profile. `Uniform`, `ZeroField` and `ExpDecay`
    /// default to the y gauge; `RadialExp` and `RationalAb` to the radial
    /// axis. Override with [`with_axis`](Self::with_axis).
    pub fn make_builtin(kind: ProfileKind, b0: f64) -> Result<Self> {
        if !b0.is_finite() {
            return Err(Error::Config(format!("field scale b0 = {b0} must be finite")));
        }
        let (shape, axis, label) = match kind {
            ProfileKind::Uniform => (Shape::Uniform, GaugeAxis::YGauge, "uniform".to_string()),
            ProfileKind::ZeroField => (Shape::ZeroField, GaugeAxis::YGauge, "zero_field".to_string()),
            ProfileKind::ExpDecay => (Shape::ExpDecay, GaugeAxis::YGauge, "exp_decay".to_string()),
            ProfileKind::RadialExp => (Shape::ExpDecay, GaugeAxis::Radial, "radial_exp".to_string()),
            ProfileKind::RationalAb { a, b } => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::Config("rational_ab parameters must be finite".into()));
                }
                (
                    Shape::RationalAb { a, b },
                    GaugeAxis::Radial,
                    format!("rational_ab(a={a},b={b})"),
                )
            }
        };
        Ok(FieldProfile { axis, b0, label, shape })
    }

    /// Constant shape `f = value` (e.g. `f = -1` flips a uniform field).
    pub fn constant_shape(value: f64, b0: f64, axis: GaugeAxis) -> Result<Self> {
        if !(value.is_finite() && b0.is_finite()) {
            return Err(Error::Config("constant shape and b0 must be finite".into()));
        }
        Ok(FieldProfile {
            axis,
            b0,
            label: format!("constant({value})"),
            shape: Shape::Constant(value),
        })
    }

    /// Invert a dimensionless field shape `b(u)` into the gauge shape that
    /// generates it: `f(u) = (∫_0^u b + c)/u`, with `f' = (b - f)/u`.
    ///
    /// `c = 0` is the choice that keeps `f` finite at the origin when `b`
    /// is continuous there.
    pub fn from_field_shape<F>(b: F, c: f64, b0: f64, axis: GaugeAxis) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::from_field_shape_at(b, 0.0, c, b0, axis)
    }

    /// As [`from_field_shape`](Self::from_field_shape) but integrating from
    /// `base` instead of the origin, for field shapes that are not
    /// integrable at zero.
    pub fn from_field_shape_at<F>(b: F, base: f64, c: f64, b0: f64, axis: GaugeAxis) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(c.is_finite() && b0.is_finite() && base.is_finite()) {
            return Err(Error::Config("inversion constants must be finite".into()));
        }
        Ok(FieldProfile {
            axis,
            b0,
            label: "inverted".to_string(),
            shape: Shape::Inverted { field_shape: Arc::new(b), c, base },
        })
    }

    /// Tabulated shape `(u, f)` interpolated by a monotone cubic. Points
    /// must be strictly increasing in `u` with at least four entries.
    pub fn from_table(points: &[(f64, f64)], b0: f64, axis: GaugeAxis) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::Config(format!(
                "shape table needs at least 4 points, got {}",
                points.len()
            )));
        }
        if !points.iter().all(|(u, f)| u.is_finite() && f.is_finite()) {
            return Err(Error::Config("shape table contains non-finite entries".into()));
        }
        if !points.windows(2).all(|w| w[1].0 > w[0].0) {
            return Err(Error::Config("shape table abscissas must be strictly increasing".into()));
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        Ok(FieldProfile {
            axis,
            b0,
            label: "table".to_string(),
            shape: Shape::Table(MonotoneCubic::new(xs, ys)),
        })
    }

    pub fn with_axis(mut self, axis: GaugeAxis) -> Self {
        self.axis = axis;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn axis(&self) -> GaugeAxis {
        self.axis
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Built-in kind, when this profile is one (used to pick closed forms).
    pub fn builtin_kind(&self) -> Option<ProfileKind> {
        match self.shape {
            Shape::Uniform => Some(ProfileKind::Uniform),
            Shape::ZeroField => Some(ProfileKind::ZeroField),
            Shape::ExpDecay if self.axis == GaugeAxis::Radial => Some(ProfileKind::RadialExp),
            Shape::ExpDecay => Some(ProfileKind::ExpDecay),
            Shape::RationalAb { a, b } => Some(ProfileKind::RationalAb { a, b }),
            _ => None,
        }
    }

    /// Constant shape value, when this profile has one.
    pub fn constant_value(&self) -> Option<f64> {
        match self.shape {
            Shape::Constant(c) => Some(c),
            Shape::Uniform => Some(1.0),
            _ => None,
        }
    }

    fn table_domain_err(&self, u: f64) -> Error {
        Error::Domain { what: "outside tabulated shape domain".into(), at: u }
    }

    /// Shape function `f(u)`.
    pub fn shape(&self, u: f64) -> Result<f64> {
        match &self.shape {
            Shape::Uniform => Ok(1.0),
            Shape::Constant(c) => Ok(*c),
            Shape::ZeroField => {
                if u == 0.0 {
                    Err(Error::Domain { what: "f = 1/u singular".into(), at: u })
                } else {
                    Ok(1.0 / u)
                }
            }
            Shape::ExpDecay => Ok(exp_decay_f(u)),
            Shape::RationalAb { a, b } => {
                if u == 0.0 {
                    Err(Error::Domain { what: "f = (u-a)(u-b)/u^2 singular".into(), at: u })
                } else {
                    Ok((u - a) * (u - b) / (u * u))
                }
            }
            Shape::Inverted { field_shape, c, base } => {
                if u == *base {
                    if *base == 0.0 && *c == 0.0 {
                        // Removable: f -> b(0) as u -> 0.
                        return Ok(field_shape(0.0));
                    }
                    if *base == 0.0 {
                        return Err(Error::Domain {
                            what: "inverted shape has a c/u singularity".into(),
                            at: u,
                        });
                    }
                }
                if u == 0.0 {
                    return Err(Error::Domain {
                        what: "inverted shape singular at origin".into(),
                        at: u,
                    });
                }
                let integral = adaptive_simpson(field_shape.as_ref(), *base, u, 1e-13)
                    .map_err(|m| Error::Numeric { stage: "profile inversion", message: m })?;
                Ok((integral + c) / u)
            }
            Shape::Table(t) => {
                let (lo, hi) = t.domain();
                if u < lo || u > hi {
                    Err(self.table_domain_err(u))
                } else {
                    Ok(t.eval(u))
                }
            }
        }
    }

    /// Derivative `f'(u)`.
    pub fn shape_prime(&self, u: f64) -> Result<f64> {
        match &self.shape {
            Shape::Uniform | Shape::Constant(_) => Ok(0.0),
            Shape::ZeroField => {
                if u == 0.0 {
                    Err(Error::Domain { what: "f = 1/u singular".into(), at: u })
                } else {
                    Ok(-1.0 / (u * u))
                }
            }
            Shape::ExpDecay => Ok(exp_decay_f_prime(u)),
            Shape::RationalAb { a, b } => {
                if u == 0.0 {
                    Err(Error::Domain { what: "f = (u-a)(u-b)/u^2 singular".into(), at: u })
                } else {
                    Ok((a + b) / (u * u) - 2.0 * a * b / (u * u * u))
                }
            }
            Shape::Inverted { field_shape, .. } => {
                // ODE relation f' = (b - f)/u away from the origin; central
                // difference of f right at the removable point.
                if u == 0.0 {
                    let h = 1e-6;
                    return Ok((self.shape(h)? - self.shape(-h)?) / (2.0 * h));
                }
                Ok((field_shape(u) - self.shape(u)?) / u)
            }
            Shape::Table(t) => {
                let (lo, hi) = t.domain();
                if u < lo || u > hi {
                    Err(self.table_domain_err(u))
                } else {
                    Ok(t.deriv(u))
                }
            }
        }
    }

    /// The gauge product `u f(u)`, with removable singularities handled
    /// per shape (for `ZeroField` it is identically 1).
    pub fn shape_times_u(&self, u: f64) -> Result<f64> {
        match &self.shape {
            Shape::Uniform => Ok(u),
            Shape::Constant(c) => Ok(c * u),
            Shape::ZeroField => Ok(1.0),
            Shape::ExpDecay => Ok(-(-u).exp_m1()),
            Shape::RationalAb { a, b } => {
                if u == 0.0 && *a * *b != 0.0 {
                    Err(Error::Domain { what: "u f(u) = u-(a+b)+ab/u singular".into(), at: u })
                } else if u == 0.0 {
                    Ok(-(a + b)) // limit when ab = 0
                } else {
                    Ok(u - (a + b) + a * b / u)
                }
            }
            Shape::Inverted { field_shape, c, base } => {
                let integral = adaptive_simpson(field_shape.as_ref(), *base, u, 1e-13)
                    .map_err(|m| Error::Numeric { stage: "profile inversion", message: m })?;
                Ok(integral + c)
            }
            Shape::Table(_) => Ok(u * self.shape(u)?),
        }
    }

    /// Physical field `B(u) = b0 (u f'(u) + f(u))`.
    ///
    /// Per-shape closed forms are used where the combination simplifies;
    /// `eval` at a non-removable singularity is a domain error.
    pub fn field(&self, u: f64) -> Result<f64> {
        match &self.shape {
            Shape::Uniform => Ok(self.b0),
            Shape::Constant(c) => Ok(self.b0 * c),
            Shape::ZeroField => Ok(0.0),
            Shape::ExpDecay => Ok(self.b0 * (-u).exp()),
            Shape::RationalAb { a, b } => {
                if u == 0.0 {
                    if *a * *b == 0.0 {
                        Ok(self.b0)
                    } else {
                        Err(Error::Domain { what: "field shape 1 - ab/u^2 singular".into(), at: u })
                    }
                } else {
                    Ok(self.b0 * (1.0 - a * b / (u * u)))
                }
            }
            // (u f)' = b by construction of the inversion.
            Shape::Inverted { field_shape, .. } => Ok(self.b0 * field_shape(u)),
            Shape::Table(_) => Ok(self.b0 * (self.shape(u)? + u * self.shape_prime(u)?)),
        }
    }

    /// Integral `∫ s f(s) ds` from the profile's natural anchor to `r`,
    /// used by the radial zero-mode construction. Returns `(anchor, value)`.
    ///
    /// The anchor is 0 whenever `s f(s)` is integrable there, otherwise 1
    /// (the offset is a normalization constant absorbed downstream).
    pub fn shape_action_integral(&self, r: f64) -> Result<(f64, f64)> {
        match &self.shape {
            Shape::Uniform => Ok((0.0, 0.5 * r * r)),
            Shape::Constant(c) => Ok((0.0, 0.5 * c * r * r)),
            Shape::ZeroField => Ok((0.0, r)),
            Shape::ExpDecay => Ok((0.0, r + (-r).exp() - 1.0)),
            Shape::RationalAb { a, b } => {
                if *a * *b == 0.0 {
                    // ∫ (s - (a+b)) ds from 0.
                    Ok((0.0, 0.5 * r * r - (a + b) * r))
                } else if r <= 0.0 {
                    Err(Error::Domain { what: "radial action needs r > 0".into(), at: r })
                } else {
                    let anchor = 1.0;
                    let val = 0.5 * (r * r - 1.0) - (a + b) * (r - 1.0) + a * b * r.ln();
                    Ok((anchor, val))
                }
            }
            Shape::Inverted { .. } | Shape::Table(_) => {
                let anchor = match &self.shape {
                    Shape::Table(t) => {
                        let (lo, _) = t.domain();
                        if lo > 0.0 {
                            lo
                        } else {
                            0.0
                        }
                    }
                    _ => 0.0,
                };
                let me = self.clone();
                let val = adaptive_simpson(
                    &move |s: f64| me.shape_times_u(s).unwrap_or(f64::NAN),
                    anchor,
                    r,
                    1e-12,
                )
                .map_err(|m| Error::Numeric { stage: "radial action integral", message: m })?;
                Ok((anchor, val))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(kind: ProfileKind) -> FieldProfile {
        FieldProfile::make_builtin(kind, 1.0).unwrap()
    }

    #[test]
    fn uniform_shape_is_one() {
        let p = builtin(ProfileKind::Uniform);
        assert_eq!(p.shape(3.7).unwrap(), 1.0);
        assert_eq!(p.shape_prime(-2.0).unwrap(), 0.0);
        assert_eq!(p.field(123.0).unwrap(), 1.0);
    }

    #[test]
    fn exp_decay_limit_at_origin() {
        let p = builtin(ProfileKind::ExpDecay);
        assert_eq!(p.shape(0.0).unwrap(), 1.0);
        assert!((p.shape(1e-9).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn exp_decay_matches_series_oracle_at_one() {
        // (1 - e^{-u})/u = sum_{n>=0} (-1)^n u^n/(n+1)!, summed to
        // convergence as an independent route.
        let mut term = 1.0;
        let mut sum = 0.0;
        let u: f64 = 1.0;
        for n in 0..30 {
            if n > 0 {
                term *= -u / (n as f64 + 1.0);
            }
            sum += term;
        }
        let p = builtin(ProfileKind::ExpDecay);
        let direct = p.shape(1.0).unwrap();
        assert!((direct - sum).abs() < 1e-15, "{direct} vs series {sum}");
        assert!((direct - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((direct - 0.63212).abs() < 1e-5);
    }

    #[test]
    fn series_branch_is_continuous_at_threshold() {
        // Series and direct branches agree to 1e-12 at |u| = eps, and f is
        // continuous across zero. The direct f' form loses ~u^2 digits to
        // cancellation right at the threshold (that is why the series
        // branch exists), so its cross-check is looser.
        for sign in [-1.0, 1.0] {
            let u = sign * SERIES_EPS;
            let series = 1.0 - u / 2.0 + u * u / 6.0 - u * u * u / 24.0;
            let direct = -(-u).exp_m1() / u;
            assert!((series - direct).abs() < 1e-12, "f mismatch at {u}");
            let ds = -0.5 + u / 3.0 - u * u / 8.0 + u * u * u / 30.0;
            let dd = ((-u).exp() * (1.0 + u) - 1.0) / (u * u);
            assert!((ds - dd).abs() < 1e-7, "f' mismatch at {u}");
        }
        let p = builtin(ProfileKind::ExpDecay);
        let below = p.shape(-1e-12).unwrap();
        let above = p.shape(1e-12).unwrap();
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn zero_field_vanishes_everywhere() {
        let p = FieldProfile::make_builtin(ProfileKind::ZeroField, 2.5).unwrap();
        for u in [2.0, -0.3, 17.0] {
            assert_eq!(p.field(u).unwrap(), 0.0);
        }
        assert!(p.shape(0.0).is_err());
        assert_eq!(p.shape_times_u(0.0).unwrap(), 1.0);
    }

    #[test]
    fn exp_decay_field_is_exponential() {
        let b0 = 0.1;
        let p = FieldProfile::make_builtin(ProfileKind::ExpDecay, b0).unwrap();
        for y in [-2.0, 0.0, 0.5, 3.0] {
            assert!((p.field(y).unwrap() - b0 * (-y).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn rational_ab_singular_at_origin() {
        let p = builtin(ProfileKind::RationalAb { a: 0.5, b: 0.25 });
        assert!(p.shape(0.0).is_err());
        assert!(p.field(0.0).is_err());
        let u = 2.0;
        assert!((p.shape(u).unwrap() - (u - 0.5) * (u - 0.25) / (u * u)).abs() < 1e-15);
    }

    #[test]
    fn unknown_kind_is_config_error() {
        match ProfileKind::from_name("quadrupole", None, None) {
            Err(Error::Config(msg)) => assert!(msg.contains("quadrupole")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn inversion_of_constant_field_is_unit_shape() {
        let p = FieldProfile::from_field_shape(|_| 1.0, 0.0, 1.0, GaugeAxis::YGauge).unwrap();
        for u in [-3.0, 0.5, 2.0, 10.0] {
            assert!((p.shape(u).unwrap() - 1.0).abs() < 1e-10, "u={u}");
        }
    }

    #[test]
    fn inversion_of_exponential_matches_exp_decay() {
        let p = FieldProfile::from_field_shape(|y: f64| (-y).exp(), 0.0, 1.0, GaugeAxis::YGauge)
            .unwrap();
        let reference = builtin(ProfileKind::ExpDecay);
        for u in [0.25, 1.0, 2.0, 5.0] {
            let got = p.shape(u).unwrap();
            let want = reference.shape(u).unwrap();
            assert!((got - want).abs() < 1e-9, "u={u}: {got} vs {want}");
        }
    }

    #[test]
    fn inversion_of_linear_field_by_derivative_oracle() {
        // b(y) = 2y should invert to f(y) = y; verify both the value and
        // the defining identity d/dy [y f(y)] = 2y by central differences.
        let p = FieldProfile::from_field_shape(|y: f64| 2.0 * y, 0.0, 1.0, GaugeAxis::YGauge)
            .unwrap();
        for u in [0.3, 1.0, 2.5] {
            assert!((p.shape(u).unwrap() - u).abs() < 1e-9, "f({u})");
            let h = 1e-5;
            let d = (p.shape_times_u(u + h).unwrap() - p.shape_times_u(u - h).unwrap()) / (2.0 * h);
            assert!((d - 2.0 * u).abs() < 1e-7, "(uf)'({u}) = {d}");
        }
    }

    #[test]
    fn table_profile_tracks_samples() {
        let reference = builtin(ProfileKind::ExpDecay);
        let pts: Vec<(f64, f64)> = (0..200)
            .map(|i| {
                let u = 0.05 + 5.0 * i as f64 / 199.0;
                (u, reference.shape(u).unwrap())
            })
            .collect();
        let p = FieldProfile::from_table(&pts, 1.0, GaugeAxis::YGauge).unwrap();
        for u in [0.3, 1.1, 2.7, 4.9] {
            assert!((p.shape(u).unwrap() - reference.shape(u).unwrap()).abs() < 1e-6);
        }
        assert!(p.shape(9.0).is_err());
    }

    #[test]
    fn roundtrip_field_to_shape_for_builtins() {
        // profile_from_field(eval_B/b0, suitable c) reproduces f to 1e-8.
        let cases: Vec<(FieldProfile, f64, f64)> = vec![
            (builtin(ProfileKind::Uniform), 0.0, 0.0),
            (builtin(ProfileKind::ZeroField), 1.0, 0.0),
            (builtin(ProfileKind::ExpDecay), 0.0, 0.0),
            (
                FieldProfile::make_builtin(ProfileKind::RadialExp, 1.0).unwrap(),
                0.0,
                0.0,
            ),
        ];
        for (orig, c, base) in cases {
            let for_closure = orig.clone();
            let inv = FieldProfile::from_field_shape_at(
                move |u: f64| for_closure.field(u).unwrap() / for_closure.b0(),
                base,
                c,
                orig.b0(),
                orig.axis(),
            )
            .unwrap();
            for i in 0..100 {
                let u = 0.05 + 4.0 * i as f64 / 99.0;
                let want = orig.shape(u).unwrap();
                let got = inv.shape(u).unwrap();
                assert!(
                    ((got - want) / want.abs().max(1e-12)).abs() < 1e-8,
                    "{}: f({u}) {got} vs {want}",
                    orig.label()
                );
            }
        }
        // RationalAb is not integrable through the origin; anchor at 1.
        let orig = builtin(ProfileKind::RationalAb { a: 0.5, b: 0.25 });
        let f1 = orig.shape(1.0).unwrap();
        let for_closure = orig.clone();
        let inv = FieldProfile::from_field_shape_at(
            move |u: f64| for_closure.field(u).unwrap() / for_closure.b0(),
            1.0,
            f1, // c = base * f(base)
            orig.b0(),
            orig.axis(),
        )
        .unwrap();
        for i in 0..100 {
            let u = 0.2 + 4.0 * i as f64 / 99.0;
            let want = orig.shape(u).unwrap();
            let got = inv.shape(u).unwrap();
            assert!(
                ((got - want) / want.abs().max(1e-12)).abs() < 1e-8,
                "rational: f({u}) {got} vs {want}"
            );
        }
    }

    #[test]
    fn product_rule_identity() {
        // eval_B / b0 == d/du [u f(u)] by central differences.
        let profiles = vec![
            builtin(ProfileKind::Uniform),
            builtin(ProfileKind::ExpDecay),
            builtin(ProfileKind::ZeroField),
            builtin(ProfileKind::RationalAb { a: 0.5, b: 0.25 }),
        ];
        let h = 1e-6;
        for p in profiles {
            for i in 0..50 {
                let u = 0.2 + 3.0 * i as f64 / 49.0;
                let fd = (p.shape_times_u(u + h).unwrap() - p.shape_times_u(u - h).unwrap())
                    / (2.0 * h);
                let direct = p.field(u).unwrap() / p.b0();
                assert!(
                    (fd - direct).abs() < 1e-6 * (1.0 + direct.abs()),
                    "{}: u={u}, fd={fd}, direct={direct}",
                    p.label()
                );
            }
        }
    }
}
