//! Equilibrium-glide kinematics: glide angle, sawtooth range, and the
//! rigid-versus-morphing comparison.

use crate::structural::{pressure_for_inflation, PressureFit, StructuralError};
use crate::table::{fmt, write_csv};
use crate::vehicle::{actuation_energy, ml_to_m3, EfficiencyCurve};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GlideError {
    #[error("no steady glide for efficiency {0}")]
    NoSteadyGlide(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no efficiency curve for scheduled inflation {0} mL")]
    Schedule(f64),
    #[error("efficiency curves are on different incidence grids")]
    GridMismatch,
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Vehicle(#[from] crate::vehicle::VehicleError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GlideError>;

/// Path angle below the horizon, `atan(1 / eta)`, in degrees.
pub fn glide_angle(eta: f64) -> Result<f64> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(GlideError::NoSteadyGlide(eta));
    }
    Ok((1.0 / eta).atan().to_degrees())
}

/// Horizontal distance of one dive and climb between the surface and
/// `depth_amplitude_m`.
pub fn range_per_cycle(eta: f64, depth_amplitude_m: f64) -> Result<f64> {
    glide_angle(eta)?;
    if !(depth_amplitude_m > 0.0 && depth_amplitude_m.is_finite()) {
        return Err(GlideError::InvalidInput(format!("depth amplitude {depth_amplitude_m} m")));
    }
    Ok(2.0 * depth_amplitude_m * eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Descending,
    Ascending,
}

impl Phase {
    fn as_str(self) -> &'static str {
        match self {
            Phase::Descending => "descending",
            Phase::Ascending => "ascending",
        }
    }
}

/// A vertex of the sawtooth. `phase` and `glide_angle_deg` describe the leg
/// that ends here (the first vertex carries the first leg's values).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlideState {
    pub t_s: f64,
    pub depth_m: f64,
    pub horizontal_m: f64,
    pub u_mps: f64,
    pub glide_angle_deg: f64,
    pub phase: Phase,
    pub inflation_ml: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlidePath {
    pub states: Vec<GlideState>,
    pub cycles: usize,
    pub total_range_m: f64,
    pub morph_energy_j: f64,
}

impl GlidePath {
    /// Morphing energy as a fraction of the buoyancy-engine budget.
    pub fn energy_ratio(&self, buoyancy_energy_per_cycle_j: f64) -> Result<f64> {
        if !(buoyancy_energy_per_cycle_j > 0.0) {
            return Err(GlideError::InvalidInput("buoyancy energy must be positive".into()));
        }
        Ok(self.morph_energy_j / (buoyancy_energy_per_cycle_j * self.cycles as f64))
    }
}

/// Switch to `inflation_ml` at the start of cycle `cycle` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphEvent {
    pub cycle: usize,
    pub inflation_ml: f64,
}

/// Best positive efficiency of a curve and its incidence.
fn operating_point(curve: &EfficiencyCurve) -> Result<(f64, f64)> {
    let (alpha, eta) = curve
        .max()
        .ok_or_else(|| GlideError::InvalidInput("empty efficiency curve".into()))?;
    glide_angle(eta)?;
    Ok((alpha, eta))
}

/// Sawtooth between the surface and `depth_amplitude_m`, each leg flown at
/// the best efficiency of the configuration in force. Morph events charge
/// `dP dV` with `dP` the chamber pressure at the larger of the two volumes.
pub fn simulate_sawtooth(
    curves: &[EfficiencyCurve],
    depth_amplitude_m: f64,
    n_cycles: usize,
    initial_inflation_ml: f64,
    morph_schedule: &[MorphEvent],
    pressure_fit: &PressureFit,
) -> Result<GlidePath> {
    if n_cycles == 0 {
        return Err(GlideError::InvalidInput("at least one cycle is needed".into()));
    }
    let curve_for = |v: f64| {
        curves
            .iter()
            .find(|c| c.inflation_ml == v)
            .ok_or(GlideError::Schedule(v))
    };
    curve_for(initial_inflation_ml)?;
    for e in morph_schedule {
        curve_for(e.inflation_ml)?;
    }

    let mut inflation = initial_inflation_ml;
    let mut energy = 0.0;
    let mut total = 0.0;
    let mut t = 0.0;
    let mut x = 0.0;
    let mut states = Vec::with_capacity(2 * n_cycles + 1);
    for cycle in 0..n_cycles {
        for e in morph_schedule.iter().filter(|e| e.cycle == cycle) {
            let dv = (e.inflation_ml - inflation).abs();
            let dp = pressure_for_inflation(pressure_fit, e.inflation_ml.max(inflation))? * 1e3;
            energy += actuation_energy(dp, ml_to_m3(dv))?;
            inflation = e.inflation_ml;
        }
        let curve = curve_for(inflation)?;
        let (_, eta) = operating_point(curve)?;
        let theta = glide_angle(eta)?;
        let leg = depth_amplitude_m / theta.to_radians().sin();
        let dt = leg / curve.u_mps;
        let dx = depth_amplitude_m * eta;
        let state = |t_s, depth_m, horizontal_m, phase| GlideState {
            t_s,
            depth_m,
            horizontal_m,
            u_mps: curve.u_mps,
            glide_angle_deg: theta,
            phase,
            inflation_ml: inflation,
        };
        if states.is_empty() {
            states.push(state(0.0, 0.0, 0.0, Phase::Descending));
        }
        t += dt;
        x += dx;
        states.push(state(t, depth_amplitude_m, x, Phase::Descending));
        t += dt;
        x += dx;
        states.push(state(t, 0.0, x, Phase::Ascending));
        total += range_per_cycle(eta, depth_amplitude_m)?;
    }
    Ok(GlidePath {
        states,
        cycles: n_cycles,
        total_range_m: total,
        morph_energy_j: energy,
    })
}

pub const GLIDE_HEADER: [&str; 5] = ["t_s", "x_m", "depth_m", "phase", "inflation_mL"];

pub fn write_glide_csv<W: Write>(out: W, path: &GlidePath, comments: &[String]) -> Result<()> {
    let rows = path.states.iter().map(|s| {
        vec![
            fmt(s.t_s),
            fmt(s.horizontal_m),
            fmt(s.depth_m),
            s.phase.as_str().to_string(),
            fmt(s.inflation_ml),
        ]
    });
    write_csv(out, comments, &GLIDE_HEADER, rows)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigComparison {
    pub best_alpha_rigid_deg: f64,
    pub best_eta_rigid: f64,
    pub best_alpha_morph_deg: f64,
    pub best_eta_morph: f64,
    pub eta_gain_pct: f64,
    pub range_gain_pct: f64,
    pub glide_angle_rigid_deg: f64,
    pub glide_angle_morph_deg: f64,
}

impl fmt::Display for ConfigComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "rigid:    eta_max = {:.3} at {} deg, glide angle {:.3} deg",
            self.best_eta_rigid, self.best_alpha_rigid_deg, self.glide_angle_rigid_deg
        )?;
        writeln!(
            f,
            "morphing: eta_max = {:.3} at {} deg, glide angle {:.3} deg",
            self.best_eta_morph, self.best_alpha_morph_deg, self.glide_angle_morph_deg
        )?;
        write!(
            f,
            "efficiency gain {:+.2}%, range gain {:+.2}%",
            self.eta_gain_pct, self.range_gain_pct
        )
    }
}

/// Best efficiency of each curve over their common incidence grid and the
/// resulting gains. Range is linear in efficiency, so the two gains agree.
pub fn compare_configs(curve_rigid: &EfficiencyCurve, curve_morph: &EfficiencyCurve) -> Result<ConfigComparison> {
    if curve_rigid.alphas() != curve_morph.alphas() {
        return Err(GlideError::GridMismatch);
    }
    let (ar, er) = operating_point(curve_rigid)?;
    let (am, em) = operating_point(curve_morph)?;
    let (rr, rm) = (range_per_cycle(er, 1.0)?, range_per_cycle(em, 1.0)?);
    Ok(ConfigComparison {
        best_alpha_rigid_deg: ar,
        best_eta_rigid: er,
        best_alpha_morph_deg: am,
        best_eta_morph: em,
        eta_gain_pct: 100.0 * (em - er) / er,
        range_gain_pct: 100.0 * (rm - rr) / rr,
        glide_angle_rigid_deg: glide_angle(er)?,
        glide_angle_morph_deg: glide_angle(em)?,
    })
}
