//! Sectional hydrodynamics: inviscid panel solution plus an empirical drag
//! buildup, and polars built from them.

mod drag;
mod panel;
mod polar;

pub use drag::{drag_estimate, ideal_lift, DragModel, DRAG_RE_RANGE};
pub use panel::{panel_solve, PanelSolution, MAX_PANEL_ALPHA_DEG, MIN_PANEL_POINTS};
pub use polar::{
    polar_sweep, read_polar_csv, write_polar_csv, CellError, HydroPolar, PolarRow, PolarSettings, POLAR_HEADER, VALID_ALPHA_DEG,
};

use crate::geometry::GeometryError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Kinematic viscosity of water, m^2/s.
pub const WATER_NU_M2PS: f64 = 1.0e-6;
/// Density of water, kg/m^3.
pub const WATER_RHO_KGPM3: f64 = 1000.0;

#[derive(Debug, Error)]
pub enum HydroError {
    #[error("invalid flow conditions: {0}")]
    InvalidFlow(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("singular panel system: {0}")]
    Singular(String),
    #[error("Reynolds number {0:.4e} is outside the drag model range [1e4, 1e7]")]
    ReynoldsRange(f64),
    #[error("invalid polar: {0}")]
    InvalidPolar(String),
    #[error("{} polar cell(s) failed; first: {}", .0.len(), .0.first().map(|c| c.to_string()).unwrap_or_default())]
    Sweep(Vec<CellError>),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, HydroError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConditions {
    pub u_mps: f64,
    pub nu_m2ps: f64,
    pub rho_kgpm3: f64,
    pub length_m: f64,
}

impl FlowConditions {
    /// Water at the given speed over the given characteristic length.
    pub fn new(u_mps: f64, length_m: f64) -> Result<Self> {
        let f = Self {
            u_mps,
            nu_m2ps: WATER_NU_M2PS,
            rho_kgpm3: WATER_RHO_KGPM3,
            length_m,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("u_mps", self.u_mps),
            ("nu_m2ps", self.nu_m2ps),
            ("rho_kgpm3", self.rho_kgpm3),
            ("length_m", self.length_m),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(HydroError::InvalidFlow(format!("{name} = {v} must be positive")));
            }
        }
        Ok(())
    }

    pub fn dynamic_pressure_pa(&self) -> f64 {
        0.5 * self.rho_kgpm3 * self.u_mps * self.u_mps
    }
}

/// `Re = U L / nu`.
pub fn reynolds(flow: &FlowConditions) -> Result<f64> {
    flow.validate()?;
    Ok(flow.u_mps * flow.length_m / flow.nu_m2ps)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceBreakdown {
    pub lift_n: f64,
    pub drag_n: f64,
    pub reference_area_m2: f64,
    pub dynamic_pressure_pa: f64,
}

/// `(c_l, c_d)` from dimensional forces.
pub fn coefficients_from_forces(forces: &ForceBreakdown) -> Result<(f64, f64)> {
    if !(forces.reference_area_m2 > 0.0) || !(forces.dynamic_pressure_pa > 0.0) {
        return Err(HydroError::InvalidInput(
            "reference area and dynamic pressure must be positive".into(),
        ));
    }
    let qs = forces.dynamic_pressure_pa * forces.reference_area_m2;
    Ok((forces.lift_n / qs, forces.drag_n / qs))
}
