//! Hess–Smith panel method: constant-strength sources on every panel plus a
//! single uniform vortex strength, closed by the Kutta condition.

use super::{FlowConditions, HydroError, Result};
use crate::geometry::AirfoilProfile;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Largest incidence accepted by the panel solver, degrees.
pub const MAX_PANEL_ALPHA_DEG: f64 = 15.0;
/// Fewest profile points accepted by the panel solver.
pub const MIN_PANEL_POINTS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelSolution {
    pub alpha_deg: f64,
    /// Circulation-based lift coefficient.
    pub c_l: f64,
    /// Lift coefficient from integrating the surface pressure.
    pub c_l_pressure: f64,
    /// Pitching moment about the quarter chord, positive nose-up.
    pub c_m: f64,
    /// Panel midpoints, in profile order.
    pub control_points: Vec<[f64; 2]>,
    pub cp: Vec<f64>,
}

struct Panel {
    a: [f64; 2],
    mid: [f64; 2],
    t: [f64; 2],
    len: f64,
}

impl Panel {
    /// Outward normal for a counter-clockwise contour.
    fn normal(&self) -> [f64; 2] {
        [self.t[1], -self.t[0]]
    }

    /// Global velocity at `p` induced by a unit source and by a unit
    /// clockwise vortex spread uniformly over this panel.
    fn influence(&self, p: [f64; 2], own: bool) -> ([f64; 2], [f64; 2]) {
        let (us, vs, uv, vv) = if own {
            // limit from the outside of the body (right-hand side)
            (0.0, -0.5, -0.5, 0.0)
        } else {
            let d = [p[0] - self.a[0], p[1] - self.a[1]];
            let x = d[0] * self.t[0] + d[1] * self.t[1];
            let y = -d[0] * self.t[1] + d[1] * self.t[0];
            let r1 = x.hypot(y);
            let r2 = (x - self.len).hypot(y);
            let dtheta = y.atan2(x - self.len) - y.atan2(x);
            // the branch cut lies behind the panel; keep the jump inside (-pi, pi]
            let dtheta = if dtheta > PI {
                dtheta - 2.0 * PI
            } else if dtheta <= -PI {
                dtheta + 2.0 * PI
            } else {
                dtheta
            };
            let ln = (r1 / r2).ln();
            (ln / (2.0 * PI), dtheta / (2.0 * PI), dtheta / (2.0 * PI), -ln / (2.0 * PI))
        };
        let m = [-self.t[1], self.t[0]];
        let to_global = |u: f64, v: f64| [u * self.t[0] + v * m[0], u * self.t[1] + v * m[1]];
        (to_global(us, vs), to_global(uv, vv))
    }
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Solves the potential flow around `profile` at `alpha_deg`, measured from
/// the x axis. Coefficients use the profile's reference chord; the moment
/// reference is a quarter chord aft of the leading-edge point.
pub fn panel_solve(profile: &AirfoilProfile, alpha_deg: f64, flow: &FlowConditions) -> Result<PanelSolution> {
    flow.validate()?;
    if profile.points().len() < MIN_PANEL_POINTS {
        return Err(HydroError::InvalidInput(format!(
            "{} profile points, the panel method needs at least {MIN_PANEL_POINTS}",
            profile.points().len()
        )));
    }
    if !(alpha_deg.abs() <= MAX_PANEL_ALPHA_DEG) {
        return Err(HydroError::InvalidInput(format!(
            "alpha {alpha_deg} deg is outside +-{MAX_PANEL_ALPHA_DEG} deg"
        )));
    }
    let panels: Vec<Panel> = profile
        .points()
        .windows(2)
        .map(|w| {
            let d = [w[1][0] - w[0][0], w[1][1] - w[0][1]];
            let len = d[0].hypot(d[1]);
            Panel {
                a: w[0],
                mid: [0.5 * (w[0][0] + w[1][0]), 0.5 * (w[0][1] + w[1][1])],
                t: [d[0] / len, d[1] / len],
                len,
            }
        })
        .collect();
    if panels.iter().any(|p| !(p.len > 0.0)) {
        return Err(HydroError::Singular("zero-length panel".into()));
    }
    let n = panels.len();
    let alpha = alpha_deg.to_radians();
    let v_inf = [alpha.cos(), alpha.sin()];

    // tangential influence rows are needed for the Kutta row and the surface speed
    let mut an = DMatrix::zeros(n + 1, n + 1);
    let mut at = DMatrix::zeros(n, n + 1);
    for (i, pi) in panels.iter().enumerate() {
        let nrm = pi.normal();
        for (j, pj) in panels.iter().enumerate() {
            let (vs, vv) = pj.influence(pi.mid, i == j);
            an[(i, j)] = dot(vs, nrm);
            an[(i, n)] += dot(vv, nrm);
            at[(i, j)] = dot(vs, pi.t);
            at[(i, n)] += dot(vv, pi.t);
        }
    }
    let mut rhs = DVector::zeros(n + 1);
    for (i, p) in panels.iter().enumerate() {
        rhs[i] = -dot(v_inf, p.normal());
    }
    for j in 0..=n {
        an[(n, j)] = at[(0, j)] + at[(n - 1, j)];
    }
    rhs[n] = -dot(v_inf, panels[0].t) - dot(v_inf, panels[n - 1].t);

    let sol = an
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .ok_or_else(|| HydroError::Singular("influence matrix is singular".into()))?;
    let vt = &at * &sol;

    let chord = profile.chord_m();
    let perimeter: f64 = panels.iter().map(|p| p.len).sum();
    let gamma = sol[n];
    let c_l = 2.0 * gamma * perimeter / chord;

    let le = profile.leading_edge();
    let reference = [le[0] + 0.25 * chord, le[1]];
    let mut cp = Vec::with_capacity(n);
    let mut force = [0.0; 2];
    let mut moment = 0.0;
    for (i, p) in panels.iter().enumerate() {
        let v = vt[i] + dot(v_inf, p.t);
        let c = 1.0 - v * v;
        cp.push(c);
        let nrm = p.normal();
        let f = [-c * nrm[0] * p.len, -c * nrm[1] * p.len];
        force[0] += f[0];
        force[1] += f[1];
        moment += (p.mid[0] - reference[0]) * f[1] - (p.mid[1] - reference[1]) * f[0];
    }
    let c_l_pressure = (-force[0] * alpha.sin() + force[1] * alpha.cos()) / chord;
    let c_m = -moment / (chord * chord);
    Ok(PanelSolution {
        alpha_deg,
        c_l,
        c_l_pressure,
        c_m,
        control_points: panels.iter().map(|p| p.mid).collect(),
        cp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{apply_camber, naca4_profile, CamberLine};

    fn flow() -> FlowConditions {
        FlowConditions::new(0.4, 0.230).unwrap()
    }

    fn section(code: &str) -> AirfoilProfile {
        naca4_profile(code, 200, 0.230).unwrap().repaneled(160).unwrap()
    }

    #[test]
    fn symmetric_section_at_zero_incidence_has_no_lift() {
        let s = panel_solve(&section("0016"), 0.0, &flow()).unwrap();
        assert!(s.c_l.abs() < 1e-6, "{}", s.c_l);
        assert!(s.c_m.abs() < 1e-6);
    }

    #[test]
    fn thin_section_lift_slope_near_two_pi() {
        let s = panel_solve(&section("0006"), 5.0, &flow()).unwrap();
        let thin = 2.0 * PI * 5f64.to_radians();
        assert!((s.c_l - thin).abs() / thin < 0.10, "{}", s.c_l);
        // pressure integration agrees with the circulation
        assert!((s.c_l_pressure - s.c_l).abs() / s.c_l < 0.02);
        // quarter-chord moment of a symmetric section is small
        assert!(s.c_m.abs() < 0.02);
    }

    #[test]
    fn stagnation_point_and_kutta_condition() {
        let s = panel_solve(&section("0012"), 4.0, &flow()).unwrap();
        let max = s.cp.iter().cloned().fold(f64::MIN, f64::max);
        assert!(max <= 1.0 + 1e-9 && max > 0.9);
        // equal surface speed on both trailing-edge panels
        let n = s.cp.len();
        assert!((s.cp[0] - s.cp[n - 1]).abs() < 1e-9);
    }

    #[test]
    fn parabolic_camber_lifts_at_zero_incidence() {
        let base = naca4_profile("0006", 300, 0.230).unwrap();
        let camber = CamberLine::parabolic(0.02 * 0.230, 61, 0.230);
        let p = apply_camber(&base, &camber).unwrap().repaneled(160).unwrap();
        let s = panel_solve(&p, 0.0, &flow()).unwrap();
        let thin = 4.0 * PI * 0.02;
        assert!((s.c_l - thin).abs() / thin < 0.15, "{}", s.c_l);
        assert!(s.c_m < 0.0);
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        let p = section("0016");
        assert!(panel_solve(&p, 20.0, &flow()).is_err());
        let coarse = naca4_profile("0016", 40, 0.230).unwrap();
        let few = AirfoilProfile::new(coarse.points()[..].iter().step_by(2).copied().collect(), 0.230, "x");
        if let Ok(few) = few {
            assert!(panel_solve(&few, 0.0, &flow()).is_err());
        }
    }
}
