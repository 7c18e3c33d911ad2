use super::{AirfoilProfile, GeometryError, Result};
use crate::interp::{cosine_spacing, CubicSpline};
use serde::{Deserialize, Serialize};

/// Mean-line offsets of a section, metres, against chordwise fraction.
///
/// The leading edge is the rigid aluminium nose, so the offset there is zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CamberLine {
    stations: Vec<(f64, f64)>,
    chord_m: f64,
    inflation_ml: f64,
}

impl CamberLine {
    pub fn new(stations: Vec<(f64, f64)>, chord_m: f64, inflation_ml: f64) -> Result<Self> {
        if stations.len() < 2 {
            return Err(GeometryError::InvalidCamber("need at least two stations".into()));
        }
        if stations.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(GeometryError::InvalidCamber("x/c must be strictly increasing".into()));
        }
        if stations.iter().any(|s| !s.0.is_finite() || !s.1.is_finite()) {
            return Err(GeometryError::InvalidCamber("non-finite station".into()));
        }
        if stations[0].0 == 0.0 && stations[0].1.abs() > 1e-12 {
            return Err(GeometryError::InvalidCamber(format!(
                "leading-edge offset {} must be zero",
                stations[0].1
            )));
        }
        if !(chord_m > 0.0) {
            return Err(GeometryError::InvalidCamber(format!("chord {chord_m} must be positive")));
        }
        Ok(Self {
            stations,
            chord_m,
            inflation_ml,
        })
    }

    /// Flat mean line on `n + 1` stations.
    pub fn zero(n: usize, chord_m: f64) -> Self {
        let stations = (0..=n).map(|i| (i as f64 / n as f64, 0.0)).collect();
        Self {
            stations,
            chord_m,
            inflation_ml: 0.0,
        }
    }

    /// Parabolic mean line `4 h xi (1 - xi)` with peak `h` metres at mid-chord.
    pub fn parabolic(peak_m: f64, n: usize, chord_m: f64) -> Self {
        let stations = (0..=n)
            .map(|i| {
                let xi = i as f64 / n as f64;
                (xi, 4.0 * peak_m * xi * (1.0 - xi))
            })
            .collect();
        Self {
            stations,
            chord_m,
            inflation_ml: 0.0,
        }
    }

    pub fn with_inflation(mut self, inflation_ml: f64) -> Self {
        self.inflation_ml = inflation_ml;
        self
    }

    pub fn stations(&self) -> &[(f64, f64)] {
        &self.stations
    }

    pub fn chord_m(&self) -> f64 {
        self.chord_m
    }

    pub fn inflation_ml(&self) -> f64 {
        self.inflation_ml
    }

    fn spline(&self) -> CubicSpline {
        let xs: Vec<f64> = self.stations.iter().map(|s| s.0).collect();
        let ys: Vec<f64> = self.stations.iter().map(|s| s.1).collect();
        CubicSpline::new(&xs, &ys).expect("validated stations")
    }

    /// Offset at a chordwise fraction (natural cubic spline through the stations).
    pub fn offset_at(&self, xi: f64) -> f64 {
        self.spline().eval(xi)
    }

    pub fn max_abs_offset(&self) -> f64 {
        self.stations.iter().map(|s| s.1.abs()).fold(0.0, f64::max)
    }

    pub fn trailing_edge_offset(&self) -> f64 {
        self.offset_at(1.0)
    }

    /// Thin-airfoil ideal lift coefficient, `2 ∫ z'(x) cos θ dθ` over
    /// `x = (1 - cos θ) / 2`: the lift at which the flow meets the leading
    /// edge without a suction peak.
    pub fn ideal_lift_coefficient(&self) -> f64 {
        let spline = self.spline();
        let n = 400;
        let h = std::f64::consts::PI / n as f64;
        (0..n)
            .map(|k| {
                let theta = (k as f64 + 0.5) * h;
                let x = 0.5 * (1.0 - theta.cos());
                spline.derivative(x) / self.chord_m * theta.cos()
            })
            .sum::<f64>()
            * 2.0
            * h
    }
}

/// Shears both surfaces vertically by the interpolated camber offset.
pub fn apply_camber(profile: &AirfoilProfile, camber: &CamberLine) -> Result<AirfoilProfile> {
    let (first, last) = (camber.stations[0].0, camber.stations[camber.stations.len() - 1].0);
    if first.abs() > 1e-12 || (last - 1.0).abs() > 1e-12 {
        return Err(GeometryError::InvalidCamber(format!(
            "stations must span [0, 1], got [{first}, {last}]"
        )));
    }
    let chord = profile.chord_m();
    if camber.max_abs_offset() > 0.5 * chord {
        return Err(GeometryError::ImplausibleMorph {
            offset_m: camber.max_abs_offset(),
            chord_m: chord,
        });
    }
    let spline = camber.spline();
    let points = profile
        .points()
        .iter()
        .map(|p| [p[0], p[1] + spline.eval(profile.chord_fraction(p[0]))])
        .collect();
    AirfoilProfile::new(points, chord, profile.name().to_string())
}

/// Midpoints between the upper and lower surfaces at `n_stations`
/// cosine-spaced fractions, relative to the leading-edge height.
pub fn extract_camber(profile: &AirfoilProfile, n_stations: usize) -> Result<CamberLine> {
    if profile.points().len() < n_stations {
        return Err(GeometryError::Resolution {
            points: profile.points().len(),
            stations: n_stations,
        });
    }
    if n_stations < 2 {
        return Err(GeometryError::InvalidCamber("need at least two stations".into()));
    }
    let (upper, lower) = profile.surface_splines()?;
    let y_le = profile.leading_edge()[1];
    let stations = cosine_spacing(n_stations - 1)
        .into_iter()
        .enumerate()
        .map(|(i, xi)| {
            let offset = if i == 0 {
                0.0
            } else {
                0.5 * (upper.eval(xi) + lower.eval(xi)) - y_le
            };
            (xi, offset)
        })
        .collect();
    CamberLine::new(stations, profile.chord_m(), 0.0)
}

/// Mounting angle of attack and the classical chord-line angle after morphing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveAoA {
    pub alpha_deg: f64,
    pub alpha_wing_deg: f64,
}

/// Chord-line angle of attack of a morphed section.
///
/// Sign convention: a trailing edge displaced downward (negative offset)
/// rotates the chord line nose-up, which adds incidence. With `dy` the
/// trailing-edge offset relative to the leading edge,
/// `alpha_wing = alpha - atan(dy / c)`.
pub fn effective_aoa(camber: &CamberLine, alpha_deg: f64) -> Result<EffectiveAoA> {
    let st = camber.stations();
    let (first, last) = (st[0], st[st.len() - 1]);
    if first.0.abs() > 1e-12 || (last.0 - 1.0).abs() > 1e-12 {
        return Err(GeometryError::InvalidCamber(
            "stations must include x/c = 0 and x/c = 1".into(),
        ));
    }
    let rise = last.1 - first.1;
    Ok(EffectiveAoA {
        alpha_deg,
        alpha_wing_deg: alpha_deg + (-rise / camber.chord_m()).atan().to_degrees(),
    })
}
