//! Empirical sectional drag buildup, see `docs/dragmodel.md`.

use super::{reynolds, FlowConditions, HydroError, Result};
use crate::geometry::{extract_camber, AirfoilProfile};
use serde::{Deserialize, Serialize};

/// Reynolds range over which the skin-friction laws are used.
pub const DRAG_RE_RANGE: (f64, f64) = (1.0e4, 1.0e7);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DragModel {
    /// Laminar (Blasius) flat-plate coefficient: `c_f = a / sqrt(Re)`.
    pub laminar_coefficient: f64,
    /// Turbulent flat-plate law `c_f = b Re^-0.2 - k / Re`.
    pub turbulent_coefficient: f64,
    pub transition_correction: f64,
    /// Form factor `1 + p (t/c) + q (t/c)^4`.
    pub form_linear: f64,
    pub form_quartic: f64,
    /// Lift-dependent profile drag factor `k1`, applied to the departure
    /// from the section's ideal lift coefficient.
    pub lift_factor: f64,
}

impl Default for DragModel {
    fn default() -> Self {
        Self {
            laminar_coefficient: 1.328,
            turbulent_coefficient: 0.074,
            transition_correction: 1742.0,
            form_linear: 2.0,
            form_quartic: 60.0,
            lift_factor: 0.75,
        }
    }
}

impl DragModel {
    /// Mixed laminar/turbulent flat-plate skin friction, one side.
    pub fn skin_friction(&self, re: f64) -> f64 {
        let laminar = self.laminar_coefficient / re.sqrt();
        let mixed = self.turbulent_coefficient * re.powf(-0.2) - self.transition_correction / re;
        laminar.max(mixed)
    }

    pub fn form_factor(&self, thickness_ratio: f64) -> f64 {
        1.0 + self.form_linear * thickness_ratio + self.form_quartic * thickness_ratio.powi(4)
    }

    /// `c_d = 2 c_f FF (1 + k1 (c_l - c_li)^2)`.
    pub fn section_drag(&self, re: f64, thickness_ratio: f64, c_l: f64, c_l_ideal: f64) -> Result<f64> {
        if !(DRAG_RE_RANGE.0..=DRAG_RE_RANGE.1).contains(&re) {
            return Err(HydroError::ReynoldsRange(re));
        }
        let excess = c_l - c_l_ideal;
        Ok(2.0 * self.skin_friction(re) * self.form_factor(thickness_ratio) * (1.0 + self.lift_factor * excess * excess))
    }
}

/// Sectional drag coefficient of `profile` carrying `c_l`. The drag buildup
/// does not depend on incidence other than through `c_l`.
pub fn drag_estimate(
    profile: &AirfoilProfile,
    alpha_deg: f64,
    flow: &FlowConditions,
    c_l: f64,
    model: &DragModel,
) -> Result<f64> {
    let _ = alpha_deg;
    model.section_drag(reynolds(flow)?, profile.thickness_ratio(), c_l, ideal_lift(profile)?)
}

/// Ideal lift coefficient of the profile's mean line.
pub fn ideal_lift(profile: &AirfoilProfile) -> Result<f64> {
    Ok(extract_camber(profile, IDEAL_LIFT_STATIONS.min(profile.points().len()))?.ideal_lift_coefficient())
}

const IDEAL_LIFT_STATIONS: usize = 61;
