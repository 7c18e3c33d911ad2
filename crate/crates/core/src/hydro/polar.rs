use super::drag::{ideal_lift, DragModel};
use super::panel::panel_solve;
use super::{reynolds, FlowConditions, HydroError, Result};
use crate::geometry::AirfoilProfile;
use crate::table::{comment_value, fmt, read_numeric_csv, write_csv};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::{Read, Write};

/// Incidence range over which polars are considered valid (no stall model).
pub const VALID_ALPHA_DEG: f64 = 8.0;

pub const POLAR_HEADER: [&str; 4] = ["alpha_deg", "c_l", "c_d", "c_m"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarRow {
    pub alpha_deg: f64,
    pub c_l: f64,
    pub c_d: f64,
    pub c_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HydroPolar {
    pub re: f64,
    pub inflation_ml: f64,
    rows: Vec<PolarRow>,
}

impl HydroPolar {
    /// Rows must be sorted by incidence without repeats and carry positive drag.
    pub fn new(re: f64, inflation_ml: f64, rows: Vec<PolarRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(HydroError::InvalidPolar("no rows".into()));
        }
        if rows.windows(2).any(|w| !(w[1].alpha_deg > w[0].alpha_deg)) {
            return Err(HydroError::InvalidPolar("rows must be strictly increasing in alpha".into()));
        }
        if let Some(r) = rows.iter().find(|r| !(r.c_d > 0.0)) {
            return Err(HydroError::InvalidPolar(format!("c_d = {} at alpha {}", r.c_d, r.alpha_deg)));
        }
        Ok(Self { re, inflation_ml, rows })
    }

    pub fn rows(&self) -> &[PolarRow] {
        &self.rows
    }

    /// Linear interpolation in incidence; `None` outside the tabulated range.
    pub fn at(&self, alpha_deg: f64) -> Option<PolarRow> {
        let first = self.rows.first()?;
        let last = self.rows.last()?;
        if alpha_deg < first.alpha_deg || alpha_deg > last.alpha_deg {
            return None;
        }
        let k = self.rows.partition_point(|r| r.alpha_deg < alpha_deg);
        if k < self.rows.len() && self.rows[k].alpha_deg == alpha_deg {
            return Some(self.rows[k]);
        }
        let (a, b) = (self.rows[k - 1], self.rows[k]);
        let t = (alpha_deg - a.alpha_deg) / (b.alpha_deg - a.alpha_deg);
        let lerp = |x: f64, y: f64| x + t * (y - x);
        Some(PolarRow {
            alpha_deg,
            c_l: lerp(a.c_l, b.c_l),
            c_d: lerp(a.c_d, b.c_d),
            c_m: lerp(a.c_m, b.c_m),
        })
    }

    /// Incidence of zero lift, interpolated between rows, or extrapolated
    /// from the nearest two rows when lift does not change sign.
    pub fn zero_lift_alpha(&self) -> Option<f64> {
        if self.rows.len() < 2 {
            return None;
        }
        let root = |a: &PolarRow, b: &PolarRow| {
            let slope = (b.c_l - a.c_l) / (b.alpha_deg - a.alpha_deg);
            (slope != 0.0).then(|| a.alpha_deg - a.c_l / slope)
        };
        for w in self.rows.windows(2) {
            if w[0].c_l == 0.0 {
                return Some(w[0].alpha_deg);
            }
            if w[0].c_l * w[1].c_l < 0.0 || w[1].c_l == 0.0 {
                return root(&w[0], &w[1]);
            }
        }
        let n = self.rows.len();
        if self.rows[0].c_l > 0.0 {
            root(&self.rows[0], &self.rows[1])
        } else {
            root(&self.rows[n - 2], &self.rows[n - 1])
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolarSettings {
    /// Panels after cosine repaneling.
    pub n_panels: usize,
    pub drag: DragModel,
}

impl Default for PolarSettings {
    fn default() -> Self {
        Self {
            n_panels: 160,
            drag: DragModel::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellError {
    pub inflation_ml: f64,
    pub alpha_deg: f64,
    pub message: String,
}

impl fmt::Display for CellError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mL at {} deg: {}", self.inflation_ml, self.alpha_deg, self.message)
    }
}

/// One polar per `(inflation_mL, profile)` over `alphas`. Cells run in
/// parallel; any failing cell is reported and no polars are returned.
pub fn polar_sweep(
    profiles: &[(f64, AirfoilProfile)],
    alphas: &[f64],
    flow: &FlowConditions,
    settings: &PolarSettings,
) -> Result<Vec<HydroPolar>> {
    if profiles.is_empty() || alphas.is_empty() {
        return Err(HydroError::InvalidInput("polar sweep needs profiles and incidences".into()));
    }
    let re = reynolds(flow)?;
    let mut alphas = alphas.to_vec();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    if let Some(a) = alphas.iter().find(|a| a.abs() > VALID_ALPHA_DEG) {
        log::warn!("alpha {a} deg is beyond the {VALID_ALPHA_DEG} deg validity range of the polars (no stall model)");
    }
    let panelled: Vec<std::result::Result<(AirfoilProfile, f64), String>> = profiles
        .iter()
        .map(|(_, p)| {
            let p = p.repaneled(settings.n_panels).map_err(|e| e.to_string())?;
            let ideal = ideal_lift(&p).map_err(|e| e.to_string())?;
            Ok((p, ideal))
        })
        .collect();
    let cells: Vec<(usize, f64)> = (0..profiles.len())
        .flat_map(|k| alphas.iter().map(move |&a| (k, a)))
        .collect();
    let results: Vec<std::result::Result<PolarRow, CellError>> = cells
        .par_iter()
        .map(|&(k, alpha)| {
            let fail = |message: String| CellError {
                inflation_ml: profiles[k].0,
                alpha_deg: alpha,
                message,
            };
            let (profile, ideal) = panelled[k].as_ref().map_err(|m| fail(m.clone()))?;
            let s = panel_solve(profile, alpha, flow).map_err(|e| fail(e.to_string()))?;
            let c_d = settings
                .drag
                .section_drag(re, profile.thickness_ratio(), s.c_l, *ideal)
                .map_err(|e| fail(e.to_string()))?;
            Ok(PolarRow {
                alpha_deg: alpha,
                c_l: s.c_l,
                c_d,
                c_m: s.c_m,
            })
        })
        .collect();
    let failures: Vec<CellError> = results.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
    if !failures.is_empty() {
        return Err(HydroError::Sweep(failures));
    }
    let rows: Vec<PolarRow> = results.into_iter().map(|r| r.expect("no failures")).collect();
    rows.chunks(alphas.len())
        .zip(profiles)
        .map(|(chunk, (inflation, _))| HydroPolar::new(re, *inflation, chunk.to_vec()))
        .collect()
}

pub fn write_polar_csv<W: Write>(out: W, polar: &HydroPolar, comments: &[String]) -> Result<()> {
    let mut all = vec![format!(
        "polar re={} inflation_mL={}",
        fmt(polar.re),
        fmt(polar.inflation_ml)
    )];
    all.extend_from_slice(comments);
    let rows = polar
        .rows
        .iter()
        .map(|r| vec![fmt(r.alpha_deg), fmt(r.c_l), fmt(r.c_d), fmt(r.c_m)]);
    write_csv(out, &all, &POLAR_HEADER, rows)?;
    Ok(())
}

pub fn read_polar_csv<R: Read>(mut input: R) -> Result<HydroPolar> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let (header, rows) = read_numeric_csv(text.as_bytes())?;
    if header != POLAR_HEADER {
        return Err(HydroError::InvalidPolar(format!("unexpected header {}", header.join(","))));
    }
    let re = comment_value(&text, "re=").ok_or_else(|| HydroError::InvalidPolar("missing re= comment".into()))?;
    let inflation = comment_value(&text, "inflation_mL=").unwrap_or(0.0);
    let rows = rows
        .iter()
        .map(|r| PolarRow {
            alpha_deg: r[0],
            c_l: r[1],
            c_d: r[2],
            c_m: r[3],
        })
        .collect();
    HydroPolar::new(re, inflation, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::naca4_profile;

    fn row(alpha_deg: f64, c_l: f64) -> PolarRow {
        PolarRow {
            alpha_deg,
            c_l,
            c_d: 0.01,
            c_m: 0.0,
        }
    }

    #[test]
    fn symmetric_polar_is_odd_and_even() {
        let p = naca4_profile("0016", 200, 0.230).unwrap();
        let flow = FlowConditions::new(0.4, 0.230).unwrap();
        let alphas: Vec<f64> = (-8..=8).map(f64::from).collect();
        let polars = polar_sweep(&[(0.0, p)], &alphas, &flow, &PolarSettings::default()).unwrap();
        let rows = polars[0].rows();
        assert_eq!(rows.len(), 17);
        for k in 0..17 {
            let (a, b) = (rows[k], rows[16 - k]);
            assert!((a.c_l + b.c_l).abs() < 1e-6);
            assert!((a.c_m + b.c_m).abs() < 1e-6);
            assert!((a.c_d - b.c_d).abs() < 1e-6);
        }
        assert!(polars[0].zero_lift_alpha().unwrap().abs() < 1e-6);
    }

    #[test]
    fn polar_invariants_and_interpolation() {
        assert!(HydroPolar::new(1e5, 0.0, vec![row(1.0, 0.1), row(1.0, 0.2)]).is_err());
        let mut bad = row(0.0, 0.0);
        bad.c_d = 0.0;
        assert!(HydroPolar::new(1e5, 0.0, vec![bad]).is_err());
        let p = HydroPolar::new(1e5, 0.0, vec![row(-2.0, -0.1), row(0.0, 0.1), row(2.0, 0.3)]).unwrap();
        assert!((p.at(1.0).unwrap().c_l - 0.2).abs() < 1e-15);
        assert!(p.at(3.0).is_none());
        assert!((p.zero_lift_alpha().unwrap() - -1.0).abs() < 1e-12);
        // all-positive lift: extrapolated from the lowest two rows
        let q = HydroPolar::new(1e5, 0.0, vec![row(0.0, 0.2), row(2.0, 0.4)]).unwrap();
        assert!((q.zero_lift_alpha().unwrap() - -2.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let p = HydroPolar::new(9.2e4, 30.0, vec![row(-1.0, -0.1), row(0.5, 0.05)]).unwrap();
        let mut buf = Vec::new();
        write_polar_csv(&mut buf, &p, &["extra".into()]).unwrap();
        assert_eq!(read_polar_csv(buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn failing_cells_are_reported() {
        let p = naca4_profile("0016", 200, 0.230).unwrap();
        let flow = FlowConditions::new(0.4, 0.230).unwrap();
        match polar_sweep(&[(0.0, p)], &[0.0, 30.0], &flow, &PolarSettings::default()) {
            Err(HydroError::Sweep(cells)) => {
                assert_eq!(cells.len(), 1);
                assert_eq!(cells[0].alpha_deg, 30.0);
            }
            other => panic!("{other:?}"),
        }
    }
}
