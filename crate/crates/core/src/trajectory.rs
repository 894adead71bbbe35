//! Time-ordered trajectory samples with conserved-quantity diagnostics,
//! plus the CSV/JSON wire formats.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryMethod {
    Quadrature,
    ClosedForm,
    OdeOracle,
}

impl std::fmt::Display for TrajectoryMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TrajectoryMethod::Quadrature => write!(f, "quadrature"),
            TrajectoryMethod::ClosedForm => write!(f, "closed_form"),
            TrajectoryMethod::OdeOracle => write!(f, "ode_oracle"),
        }
    }
}

/// One phase-space sample.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub vx: f64,
    pub vy: f64,
}

/// Tolerances the producing method ran with (recorded in metadata).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ToleranceInfo {
    pub quadrature_abs: f64,
    pub ode_rel: f64,
    pub ode_abs: f64,
}

impl Default for ToleranceInfo {
    fn default() -> Self {
        ToleranceInfo { quadrature_abs: 1e-10, ode_rel: 1e-9, ode_abs: 1e-12 }
    }
}

/// A computed trajectory: samples at strictly increasing times plus
/// per-sample energy and gauge-momentum residuals.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub method: TrajectoryMethod,
    pub profile_label: String,
    /// Conserved momentum per mass (angular for radial profiles).
    pub k1: f64,
    /// Cyclotron scale q*b0/m.
    pub k2: f64,
    /// Twice the energy per mass; equals the squared initial speed.
    pub k3: f64,
    pub samples: Vec<TrajectorySample>,
    pub energy_residual: Vec<f64>,
    pub momentum_residual: Vec<f64>,
    pub tolerances: ToleranceInfo,
}

impl Trajectory {
    /// Assemble and check structural invariants: non-empty, matching
    /// lengths, strictly increasing times, finite values.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        method: TrajectoryMethod,
        profile_label: impl Into<String>,
        k1: f64,
        k2: f64,
        k3: f64,
        samples: Vec<TrajectorySample>,
        energy_residual: Vec<f64>,
        momentum_residual: Vec<f64>,
        tolerances: ToleranceInfo,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Config("trajectory needs at least one sample".into()));
        }
        if samples.len() != energy_residual.len() || samples.len() != momentum_residual.len() {
            return Err(Error::Config("diagnostics length mismatch".into()));
        }
        for s in &samples {
            if ![s.t, s.x, s.y, s.vx, s.vy].iter().all(|v| v.is_finite()) {
                return Err(Error::Numeric {
                    stage: "trajectory assembly",
                    message: format!("non-finite sample at t = {}", s.t),
                });
            }
        }
        for w in samples.windows(2) {
            if w[1].t <= w[0].t {
                return Err(Error::Config(format!(
                    "sample times must be strictly increasing ({} then {})",
                    w[0].t, w[1].t
                )));
            }
        }
        Ok(Trajectory {
            method,
            profile_label: profile_label.into(),
            k1,
            k2,
            k3,
            samples,
            energy_residual,
            momentum_residual,
            tolerances,
        })
    }

    pub fn max_energy_residual(&self) -> f64 {
        self.energy_residual.iter().fold(0.0, |a, &b| a.max(b))
    }

    pub fn max_momentum_residual(&self) -> f64 {
        self.momentum_residual.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Enforce the conserved-quantity contract after the fact.
    pub fn validate_conservation(&self, energy_tol: f64) -> Result<()> {
        let worst = self.max_energy_residual();
        if worst > energy_tol {
            return Err(Error::InvariantBreach(format!(
                "energy residual {worst:e} exceeds tolerance {energy_tol:e} ({} method)",
                self.method
            )));
        }
        Ok(())
    }

    /// CSV with a fixed header and 17-significant-digit floats, so equal
    /// runs are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x,y,vx,vy,energy_residual,momentum_residual\n");
        for (i, s) in self.samples.iter().enumerate() {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                s.t, s.x, s.y, s.vx, s.vy, self.energy_residual[i], self.momentum_residual[i]
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = TrajectoryDocument {
            metadata: TrajectoryMetadata {
                profile: self.profile_label.clone(),
                k1: self.k1,
                k2: self.k2,
                k3: self.k3,
                method: self.method,
                tolerances: self.tolerances,
            },
            samples: self
                .samples
                .iter()
                .enumerate()
                .map(|(i, s)| JsonSample {
                    t: s.t,
                    x: s.x,
                    y: s.y,
                    vx: s.vx,
                    vy: s.vy,
                    energy_residual: self.energy_residual[i],
                    momentum_residual: self.momentum_residual[i],
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("trajectory serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TrajectoryDocument = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("bad trajectory JSON: {e}")))?;
        let samples: Vec<TrajectorySample> = doc
            .samples
            .iter()
            .map(|s| TrajectorySample { t: s.t, x: s.x, y: s.y, vx: s.vx, vy: s.vy })
            .collect();
        let er = doc.samples.iter().map(|s| s.energy_residual).collect();
        let mr = doc.samples.iter().map(|s| s.momentum_residual).collect();
        Trajectory::new(
            doc.metadata.method,
            doc.metadata.profile,
            doc.metadata.k1,
            doc.metadata.k2,
            doc.metadata.k3,
            samples,
            er,
            mr,
            doc.metadata.tolerances,
        )
    }
}

#[derive(Serialize, Deserialize)]
struct TrajectoryDocument {
    metadata: TrajectoryMetadata,
    samples: Vec<JsonSample>,
}

#[derive(Serialize, Deserialize)]
struct TrajectoryMetadata {
    profile: String,
    k1: f64,
    k2: f64,
    k3: f64,
    method: TrajectoryMethod,
    tolerances: ToleranceInfo,
}

#[derive(Serialize, Deserialize)]
struct JsonSample {
    t: f64,
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
    energy_residual: f64,
    momentum_residual: f64,
}
