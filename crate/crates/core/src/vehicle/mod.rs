//! Whole-vehicle forces and moments: a finite-span wing built from sectional
//! polars on a slender prolate-spheroid hull.
//!
//! Sign conventions:
//!
//! * lift and drag are wind-axis forces, lift positive up;
//! * `pitch_moment_nm` is positive **nose-down**, so a restoring moment has a
//!   positive slope in incidence;
//! * `roll_moment_nm` is `(L_right - L_left)` times the spanwise arm.

mod hull;

pub use hull::{ittc_friction, prolate_added_mass, prolate_volume, prolate_wetted_area};

use crate::hydro::{FlowConditions, HydroError, HydroPolar, PolarRow};
use crate::table::{fmt, write_csv};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VehicleError {
    #[error("invalid vehicle configuration: {0}")]
    InvalidConfig(String),
    #[error("alpha {alpha_deg} deg is outside the polar range [{lo}, {hi}] deg")]
    Extrapolation { alpha_deg: f64, lo: f64, hi: f64 },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Hydro(#[from] HydroError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, VehicleError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityModel {
    /// Centre of gravity at the centroid of hull plus wing volume.
    Uniform,
    /// Centre of gravity at `cg_x_m`.
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleConfig {
    pub fuselage_length_m: f64,
    pub fuselage_diameter_m: f64,
    /// Diameter of the blunt tail base, which carries the slender-body lift.
    pub fuselage_base_diameter_m: f64,
    pub wing_span_m: f64,
    pub wing_chord_m: f64,
    pub wing_incidence_deg: f64,
    /// Wing quarter-chord position aft of the nose.
    pub wing_x_m: f64,
    pub reference_area_m2: f64,
    pub cg_x_m: f64,
    pub density_model: DensityModel,
    /// Span efficiency of the induced-drag term.
    pub oswald_efficiency: f64,
}

impl Default for VehicleConfig {
    fn default() -> Self {
        Self::soft_wing()
    }
}

/// Speed and Reynolds number at which the reference glider was scaled up.
pub const SCALE_SPEED_MPS: f64 = 0.26;
pub const SCALE_REYNOLDS: f64 = 1.065e5;

impl VehicleConfig {
    /// Reference glider at model scale, 0.213 m wing chord.
    pub fn reference_uuv() -> Self {
        let chord = 0.213;
        let span = 0.3713;
        let length = 1.0;
        Self {
            fuselage_length_m: length,
            fuselage_diameter_m: 0.10,
            fuselage_base_diameter_m: 0.03,
            wing_span_m: span,
            wing_chord_m: chord,
            wing_incidence_deg: 0.0,
            wing_x_m: 0.40 * length,
            reference_area_m2: span * chord,
            cg_x_m: 0.5 * length,
            density_model: DensityModel::Uniform,
            oswald_efficiency: 0.9,
        }
    }

    /// The reference glider scaled to `SCALE_REYNOLDS` at `SCALE_SPEED_MPS`,
    /// with the soft wing section (0.230 m chord) fitted at zero incidence.
    pub fn soft_wing() -> Self {
        let scaled = scale_to_reynolds(&Self::reference_uuv(), SCALE_REYNOLDS, SCALE_SPEED_MPS, 1.0e-6)
            .expect("reference configuration is valid");
        let chord = 0.230;
        Self {
            wing_chord_m: chord,
            reference_area_m2: scaled.wing_span_m * chord,
            ..scaled
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("fuselage_length_m", self.fuselage_length_m),
            ("fuselage_diameter_m", self.fuselage_diameter_m),
            ("wing_span_m", self.wing_span_m),
            ("wing_chord_m", self.wing_chord_m),
            ("wing_x_m", self.wing_x_m),
            ("reference_area_m2", self.reference_area_m2),
            ("cg_x_m", self.cg_x_m),
            ("oswald_efficiency", self.oswald_efficiency),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(VehicleError::InvalidConfig(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.fuselage_base_diameter_m >= 0.0 && self.fuselage_base_diameter_m <= self.fuselage_diameter_m) {
            return Err(VehicleError::InvalidConfig(
                "fuselage_base_diameter_m must lie in [0, fuselage_diameter_m]".into(),
            ));
        }
        if self.fuselage_diameter_m >= self.fuselage_length_m {
            return Err(VehicleError::InvalidConfig("the hull must be longer than it is wide".into()));
        }
        if self.wing_x_m >= self.fuselage_length_m {
            return Err(VehicleError::InvalidConfig("wing_x_m must lie ahead of the tail".into()));
        }
        if !self.wing_incidence_deg.is_finite() {
            return Err(VehicleError::InvalidConfig("wing_incidence_deg must be finite".into()));
        }
        Ok(())
    }

    pub fn wing_area_m2(&self) -> f64 {
        self.wing_span_m * self.wing_chord_m
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.wing_span_m * self.wing_span_m / self.wing_area_m2()
    }

    /// Finite-span lift-slope factor `AR / (AR + 2)`.
    pub fn lift_slope_factor(&self) -> f64 {
        let ar = self.aspect_ratio();
        ar / (ar + 2.0)
    }

    /// Centre of gravity under the configured density model.
    pub fn cg_x(&self) -> f64 {
        match self.density_model {
            DensityModel::Explicit => self.cg_x_m,
            DensityModel::Uniform => {
                let hull = prolate_volume(self.fuselage_length_m, self.fuselage_diameter_m);
                // NACA 4-digit sections enclose about 0.685 t c^2; the centroid
                // sits near 42% chord
                let wing = 0.685 * 0.16 * self.wing_chord_m.powi(2) * self.wing_span_m;
                let wing_centroid = self.wing_x_m + 0.17 * self.wing_chord_m;
                (hull * 0.5 * self.fuselage_length_m + wing * wing_centroid) / (hull + wing)
            }
        }
    }

    /// Chord Reynolds number of the wing at `flow`.
    pub fn wing_reynolds(&self, flow: &FlowConditions) -> f64 {
        flow.u_mps * self.wing_chord_m / flow.nu_m2ps
    }
}

/// Scales every length so the wing chord carries `re_target` at `u_mps`.
pub fn scale_to_reynolds(config: &VehicleConfig, re_target: f64, u_mps: f64, nu: f64) -> Result<VehicleConfig> {
    if !(re_target > 0.0 && u_mps > 0.0 && nu > 0.0) {
        return Err(VehicleError::Contract("re_target, speed and viscosity must be positive".into()));
    }
    config.validate()?;
    let s = re_target * nu / u_mps / config.wing_chord_m;
    Ok(VehicleConfig {
        fuselage_length_m: config.fuselage_length_m * s,
        fuselage_diameter_m: config.fuselage_diameter_m * s,
        fuselage_base_diameter_m: config.fuselage_base_diameter_m * s,
        wing_span_m: config.wing_span_m * s,
        wing_chord_m: config.wing_chord_m * s,
        wing_x_m: config.wing_x_m * s,
        reference_area_m2: config.reference_area_m2 * s * s,
        cg_x_m: config.cg_x_m * s,
        ..config.clone()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VehicleForces {
    pub alpha_deg: f64,
    pub lift_n: f64,
    pub drag_n: f64,
    /// About the centre of gravity, positive nose-down.
    pub pitch_moment_nm: f64,
    pub roll_moment_nm: f64,
    pub c_l: f64,
    pub c_d: f64,
}

/// Finite-span wing coefficients from one sectional polar row, referred to
/// the wing's own planform area.
fn wing_coefficients(config: &VehicleConfig, row: &PolarRow) -> (f64, f64) {
    let c_l = row.c_l * config.lift_slope_factor();
    let induced = c_l * c_l / (PI * config.aspect_ratio() * config.oswald_efficiency);
    (c_l, row.c_d + induced)
}

fn polar_row(polar: &HydroPolar, alpha_deg: f64) -> Result<PolarRow> {
    polar.at(alpha_deg).ok_or_else(|| {
        let rows = polar.rows();
        VehicleError::Extrapolation {
            alpha_deg,
            lo: rows[0].alpha_deg,
            hi: rows[rows.len() - 1].alpha_deg,
        }
    })
}

fn check_polar(config: &VehicleConfig, polar: &HydroPolar, flow: &FlowConditions) -> Result<()> {
    let re = config.wing_reynolds(flow);
    if ((polar.re - re) / re).abs() > 0.01 {
        return Err(VehicleError::Contract(format!(
            "polar Re {:.4e} does not match the wing Re {re:.4e}",
            polar.re
        )));
    }
    Ok(())
}

/// Forces and pitching moment of the whole vehicle at body incidence
/// `alpha_deg`. The wing sees `alpha_deg + wing_incidence_deg`.
pub fn vehicle_forces(
    config: &VehicleConfig,
    wing_polar: &HydroPolar,
    alpha_deg: f64,
    flow: &FlowConditions,
) -> Result<VehicleForces> {
    config.validate()?;
    flow.validate()?;
    check_polar(config, wing_polar, flow)?;
    let row = polar_row(wing_polar, alpha_deg + config.wing_incidence_deg)?;
    let q = flow.dynamic_pressure_pa();
    let alpha = alpha_deg.to_radians();
    let (l, d) = (config.fuselage_length_m, config.fuselage_diameter_m);
    let cg = config.cg_x();

    let s_w = config.wing_area_m2();
    let (cl_w, cd_w) = wing_coefficients(config, &row);
    let wing_lift = q * s_w * cl_w;
    let wing_drag = q * s_w * cd_w;
    let wing_moment = -q * s_w * config.wing_chord_m * row.c_m;

    let (k1, k2) = prolate_added_mass(l, d);
    let base_area = PI * 0.25 * config.fuselage_base_diameter_m.powi(2);
    let hull_lift = q * base_area * (2.0 * alpha).sin();
    let re_hull = flow.u_mps * l / flow.nu_m2ps;
    let hull_drag = q * prolate_wetted_area(l, d) * ittc_friction(re_hull) * hull::form_factor(d / l);
    // Munk moment, nose-up for positive incidence
    let munk = q * (k2 - k1) * prolate_volume(l, d) * (2.0 * alpha).sin();

    let normal = |lift: f64, drag: f64| lift * alpha.cos() + drag * alpha.sin();
    let pitch = normal(wing_lift, wing_drag) * (config.wing_x_m - cg) + wing_moment + normal(hull_lift, 0.0) * (l - cg)
        - munk;

    let lift_n = wing_lift + hull_lift;
    let drag_n = wing_drag + hull_drag;
    let qs = q * config.reference_area_m2;
    Ok(VehicleForces {
        alpha_deg,
        lift_n,
        drag_n,
        pitch_moment_nm: pitch,
        roll_moment_nm: 0.0,
        c_l: lift_n / qs,
        c_d: drag_n / qs,
    })
}

/// Signed hydrodynamic efficiency `L / D`.
///
/// Its magnitude is `|L|/|D|`; the sign keeps negative-lift incidences
/// distinguishable, so a symmetric vehicle gives an odd curve.
pub fn efficiency(forces: &VehicleForces) -> Result<f64> {
    if !(forces.drag_n > 0.0) {
        return Err(VehicleError::Contract(format!("drag {} N must be positive", forces.drag_n)));
    }
    Ok(forces.lift_n / forces.drag_n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyCurve {
    /// `(alpha_deg, eta)`, sorted by incidence.
    pub rows: Vec<(f64, f64)>,
    pub inflation_ml: f64,
    pub u_mps: f64,
}

impl EfficiencyCurve {
    /// Largest efficiency with incidence in `[lo, hi]`; ties go to the lower
    /// incidence.
    pub fn max_in(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        self.rows
            .iter()
            .filter(|(a, _)| (lo..=hi).contains(a))
            .fold(None, |best: Option<(f64, f64)>, &(a, e)| match best {
                Some((_, b)) if b >= e => best,
                _ => Some((a, e)),
            })
    }

    pub fn max(&self) -> Option<(f64, f64)> {
        self.max_in(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.0).collect()
    }
}

pub fn efficiency_curve(
    config: &VehicleConfig,
    polar: &HydroPolar,
    alphas: &[f64],
    flow: &FlowConditions,
) -> Result<EfficiencyCurve> {
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let rows = alphas
        .iter()
        .map(|&a| Ok((a, efficiency(&vehicle_forces(config, polar, a, flow)?)?)))
        .collect::<Result<_>>()?;
    Ok(EfficiencyCurve {
        rows,
        inflation_ml: polar.inflation_ml,
        u_mps: flow.u_mps,
    })
}

/// Body incidence at which vehicle lift vanishes, interpolated over the
/// polar's incidence grid, or extrapolated from the nearest two rows when
/// lift keeps one sign.
pub fn zero_lift_alpha(config: &VehicleConfig, polar: &HydroPolar, flow: &FlowConditions) -> Result<f64> {
    let pts = polar
        .rows()
        .iter()
        .map(|row| {
            let a = row.alpha_deg - config.wing_incidence_deg;
            Ok((a, vehicle_forces(config, polar, a, flow)?.lift_n))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    if pts.len() < 2 {
        return Err(VehicleError::Contract("zero-lift search needs two polar rows".into()));
    }
    let root = |(a0, l0): (f64, f64), (a1, l1): (f64, f64)| a0 - l0 * (a1 - a0) / (l1 - l0);
    if let Some(p) = pts.iter().find(|p| p.1 == 0.0) {
        return Ok(p.0);
    }
    if let Some(w) = pts.windows(2).find(|w| w[0].1 * w[1].1 < 0.0) {
        return Ok(root(w[0], w[1]));
    }
    let n = pts.len();
    Ok(if pts[0].1 > 0.0 {
        root(pts[0], pts[1])
    } else {
        root(pts[n - 2], pts[n - 1])
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub alphas: Vec<f64>,
    /// `dM/dalpha` per degree of the nose-down-positive moment.
    pub m_alpha: Vec<f64>,
    /// `d|M|/dalpha` per degree, the literal form of the criterion.
    pub abs_m_alpha: Vec<f64>,
    /// Closed incidence intervals where `m_alpha > 0`, i.e. the moment
    /// restores against a perturbation. This is the implemented criterion.
    pub stable_ranges: Vec<(f64, f64)>,
    /// Intervals where `abs_m_alpha > 0`. Reported for comparison only: for a
    /// moment curve through zero it flags one side of the origin whatever
    /// the physics.
    pub literal_ranges: Vec<(f64, f64)>,
}

fn slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            (y[b] - y[a]) / (x[b] - x[a])
        })
        .collect()
}

fn positive_runs(x: &[f64], s: &[f64]) -> Vec<(f64, f64)> {
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for i in 0..=s.len() {
        let on = i < s.len() && s[i] > 0.0;
        match (on, start) {
            (true, None) => start = Some(i),
            (false, Some(k)) => {
                runs.push((x[k], x[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    runs
}

/// Finite-difference moment slopes and the incidence ranges of static
/// stability. `moment_curve` holds `(alpha_deg, M)` with `M` positive
/// nose-down.
pub fn static_stability(moment_curve: &[(f64, f64)]) -> Result<StabilityReport> {
    if moment_curve.len() < 3 {
        return Err(VehicleError::Contract("static stability needs at least 3 points".into()));
    }
    if moment_curve.windows(2).any(|w| !(w[1].0 > w[0].0)) {
        return Err(VehicleError::Contract("moment curve must be strictly increasing in alpha".into()));
    }
    let alphas: Vec<f64> = moment_curve.iter().map(|p| p.0).collect();
    let m: Vec<f64> = moment_curve.iter().map(|p| p.1).collect();
    let abs: Vec<f64> = m.iter().map(|v| v.abs()).collect();
    let m_alpha = slopes(&alphas, &m);
    let abs_m_alpha = slopes(&alphas, &abs);
    Ok(StabilityReport {
        stable_ranges: positive_runs(&alphas, &m_alpha),
        literal_ranges: positive_runs(&alphas, &abs_m_alpha),
        alphas,
        m_alpha,
        abs_m_alpha,
    })
}

/// Rolling moment at body incidence `alpha_deg` with each half-wing on its
/// own polar. The arm is the mid semi-span.
pub fn roll_moment_at(
    config: &VehicleConfig,
    polar_left: &HydroPolar,
    polar_right: &HydroPolar,
    alpha_deg: f64,
    flow: &FlowConditions,
) -> Result<f64> {
    config.validate()?;
    flow.validate()?;
    if polar_left.re != polar_right.re {
        return Err(VehicleError::Contract(format!(
            "left and right polars differ in Re ({} vs {})",
            polar_left.re, polar_right.re
        )));
    }
    check_polar(config, polar_left, flow)?;
    let a = alpha_deg + config.wing_incidence_deg;
    let half = 0.5 * flow.dynamic_pressure_pa() * config.wing_area_m2();
    let lift = |p: &HydroPolar| -> Result<f64> { Ok(half * wing_coefficients(config, &polar_row(p, a)?).0) };
    Ok((lift(polar_right)? - lift(polar_left)?) * 0.25 * config.wing_span_m)
}

/// Rolling moment at zero body incidence.
pub fn roll_moment(
    config: &VehicleConfig,
    polar_left: &HydroPolar,
    polar_right: &HydroPolar,
    flow: &FlowConditions,
) -> Result<f64> {
    roll_moment_at(config, polar_left, polar_right, 0.0, flow)
}

/// Hydraulic work `dP dV` of one actuation, in joules.
pub fn actuation_energy(delta_p_pa: f64, delta_v_m3: f64) -> Result<f64> {
    if !(delta_p_pa >= 0.0 && delta_v_m3 >= 0.0) {
        return Err(VehicleError::Contract("pressure and volume must be non-negative".into()));
    }
    Ok(delta_p_pa * delta_v_m3)
}

/// Millilitres to cubic metres.
pub fn ml_to_m3(ml: f64) -> f64 {
    ml / 1.0e6
}

pub const FORCE_HEADER: [&str; 7] = [
    "alpha_deg",
    "lift_N",
    "drag_N",
    "C_L",
    "C_D",
    "eta",
    "pitch_moment_Nm",
];

pub fn write_force_table<W: Write>(out: W, forces: &[VehicleForces], comments: &[String]) -> Result<()> {
    let rows = forces.iter().map(|f| {
        let eta = if f.drag_n > 0.0 { f.lift_n / f.drag_n } else { f64::NAN };
        vec![
            fmt(f.alpha_deg),
            fmt(f.lift_n),
            fmt(f.drag_n),
            fmt(f.c_l),
            fmt(f.c_d),
            fmt(eta),
            fmt(f.pitch_moment_nm),
        ]
    });
    write_csv(out, comments, &FORCE_HEADER, rows)?;
    Ok(())
}
