//! Chamber pressure as a function of pumped volume.

use super::{Result, StructuralError};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Measured chamber pressure (kPa) against pumped volume (mL). The
/// uninflated row, 0 mL at 0 kPa, is not part of the fit.
pub const TABLE_II: [(f64, f64); 4] = [(30.0, 18.8), (60.0, 35.5), (90.0, 44.3), (120.0, 51.2)];

/// Largest inflation the quadratic may be evaluated at, mL.
pub const MAX_INFLATION_ML: f64 = 150.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitSource {
    RefitFromTable,
    PaperPrinted,
}

/// `P(I) = a I^2 + b I + c`, with `P` in kPa and `I` in mL.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub source: FitSource,
}

impl PressureFit {
    /// Least-squares refit of [`TABLE_II`].
    pub fn from_table() -> Self {
        fit_pressure_curve(&TABLE_II).expect("four distinct points")
    }

    /// The coefficients as originally published with the measurements. They
    /// do not reproduce the table (negative pressure at 30 mL) and are kept
    /// for reference only.
    pub fn paper_printed() -> Self {
        Self {
            a: -0.025,
            b: 0.7273,
            c: -0.1543,
            source: FitSource::PaperPrinted,
        }
    }

    /// Unclamped polynomial value, kPa.
    pub fn eval(&self, inflation_ml: f64) -> f64 {
        (self.a * inflation_ml + self.b) * inflation_ml + self.c
    }

    pub fn residual_rms(&self, points: &[(f64, f64)]) -> f64 {
        let ss: f64 = points.iter().map(|&(i, p)| (self.eval(i) - p).powi(2)).sum();
        (ss / points.len() as f64).sqrt()
    }
}

/// Least-squares quadratic through `(inflation_mL, pressure_kPa)` points.
pub fn fit_pressure_curve(table: &[(f64, f64)]) -> Result<PressureFit> {
    let mut xs: Vec<f64> = table.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 || table.iter().any(|&(i, p)| !i.is_finite() || !p.is_finite()) {
        return Err(StructuralError::Underdetermined(xs.len()));
    }
    // centred and scaled abscissa keeps the normal matrix well conditioned
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let scale = xs.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
    let n = table.len();
    let v = DMatrix::from_fn(n, 3, |r, c| ((table[r].0 - mean) / scale).powi(2 - c as i32));
    let y = DVector::from_iterator(n, table.iter().map(|p| p.1));
    let q = v
        .svd(true, true)
        .solve(&y, 1e-14)
        .map_err(|_| StructuralError::Underdetermined(xs.len()))?;
    // expand q0 t^2 + q1 t + q2 with t = (I - mean) / scale
    let (s2, m) = (scale * scale, mean);
    Ok(PressureFit {
        a: q[0] / s2,
        b: -2.0 * q[0] * m / s2 + q[1] / scale,
        c: q[0] * m * m / s2 - q[1] * m / scale + q[2],
        source: FitSource::RefitFromTable,
    })
}

/// Chamber pressure for a pumped volume, kPa, clamped at zero.
pub fn pressure_for_inflation(fit: &PressureFit, inflation_ml: f64) -> Result<f64> {
    if !(0.0..=MAX_INFLATION_ML).contains(&inflation_ml) {
        return Err(StructuralError::ExtrapolationRange(inflation_ml));
    }
    Ok(fit.eval(inflation_ml).max(0.0))
}
