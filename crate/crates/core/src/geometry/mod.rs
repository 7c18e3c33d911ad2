//! Wing-section geometry: NACA 4-digit outlines, camber morphs and
//! profile-to-profile deviation.
//!
//! Profiles are stored as a closed polyline that starts at the trailing edge,
//! runs forward over the upper surface to the leading edge and back along the
//! lower surface, ending on the starting point again (counter-clockwise).
//!
//! Chordwise stations are expressed as a fraction `xi` of the projected length
//! between the leading edge (minimum `x`) and the trailing edge (first point).
//! For an undeformed section that projected length is the chord.

mod camber;
pub mod io;

pub use camber::{apply_camber, effective_aoa, extract_camber, CamberLine, EffectiveAoA};

use crate::interp::{cosine_spacing, CubicSpline};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Closure tolerance on the trailing edge, metres.
pub const CLOSURE_TOL_M: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid NACA 4-digit code {0:?}")]
    InvalidCode(String),
    #[error("invalid discretization: {0} points (need an even count of at least 40)")]
    InvalidDiscretization(usize),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid camber line: {0}")]
    InvalidCamber(String),
    #[error("implausible morph: camber offset {offset_m} m exceeds half the chord {chord_m} m")]
    ImplausibleMorph { offset_m: f64, chord_m: f64 },
    #[error("profile has {points} points, fewer than the {stations} requested stations")]
    Resolution { points: usize, stations: usize },
    #[error("incomparable profiles: chords {a_m} m and {b_m} m differ by more than 1%")]
    IncomparableProfiles { a_m: f64, b_m: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AirfoilProfile {
    points: Vec<[f64; 2]>,
    chord_m: f64,
    name: String,
}

impl AirfoilProfile {
    /// Validates closure, positivity of the chord and absence of self-intersections.
    pub fn new(points: Vec<[f64; 2]>, chord_m: f64, name: impl Into<String>) -> Result<Self> {
        if !(chord_m > 0.0) || !chord_m.is_finite() {
            return Err(GeometryError::InvalidProfile(format!("chord {chord_m} must be positive")));
        }
        if points.len() < 4 {
            return Err(GeometryError::InvalidProfile(format!(
                "{} points cannot form a closed section",
                points.len()
            )));
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GeometryError::InvalidProfile("non-finite coordinate".into()));
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if dist(first, last) > CLOSURE_TOL_M {
            return Err(GeometryError::InvalidProfile(format!(
                "trailing edge not closed: gap {} m",
                dist(first, last)
            )));
        }
        if let Some((i, j)) = self_intersection(&points) {
            return Err(GeometryError::InvalidProfile(format!(
                "segments {i} and {j} intersect"
            )));
        }
        Ok(Self {
            points,
            chord_m,
            name: name.into(),
        })
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn chord_m(&self) -> f64 {
        self.chord_m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Number of polyline segments (panels).
    pub fn n_segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Index of the leading-edge point (smallest `x`, first one on ties).
    pub fn leading_edge_index(&self) -> usize {
        let mut best = 0;
        for (i, p) in self.points.iter().enumerate() {
            if p[0] < self.points[best][0] {
                best = i;
            }
        }
        best
    }

    pub fn leading_edge(&self) -> [f64; 2] {
        self.points[self.leading_edge_index()]
    }

    pub fn trailing_edge(&self) -> [f64; 2] {
        self.points[0]
    }

    /// Upper surface ordered leading edge to trailing edge.
    pub fn upper_surface(&self) -> Vec<[f64; 2]> {
        let le = self.leading_edge_index();
        self.points[..=le].iter().rev().copied().collect()
    }

    /// Lower surface ordered leading edge to trailing edge.
    pub fn lower_surface(&self) -> Vec<[f64; 2]> {
        let le = self.leading_edge_index();
        self.points[le..].to_vec()
    }

    /// Chordwise fraction of an `x` coordinate along the projected length.
    pub fn chord_fraction(&self, x: f64) -> f64 {
        let x_le = self.leading_edge()[0];
        (x - x_le) / (self.trailing_edge()[0] - x_le)
    }

    /// Splines `y(xi)` of the upper and lower surfaces.
    pub(crate) fn surface_splines(&self) -> Result<(SurfaceSpline, SurfaceSpline)> {
        let fit = |surface: Vec<[f64; 2]>, which: &str| {
            let xs: Vec<f64> = surface.iter().map(|p| self.chord_fraction(p[0])).collect();
            let ys: Vec<f64> = surface.iter().map(|p| p[1]).collect();
            SurfaceSpline::new(&xs, &ys).ok_or_else(|| {
                GeometryError::InvalidProfile(format!("{which} surface is not single-valued in x"))
            })
        };
        Ok((fit(self.upper_surface(), "upper")?, fit(self.lower_surface(), "lower")?))
    }

    /// Largest vertical gap between the surfaces, metres.
    pub fn max_thickness_m(&self) -> f64 {
        let Ok((upper, lower)) = self.surface_splines() else {
            return 0.0;
        };
        // sample on the union of both surfaces' stations for an exact hit on
        // the polyline vertices
        let mut best: f64 = 0.0;
        for xi in upper.knots().chain(lower.knots()) {
            best = best.max(upper.eval(xi) - lower.eval(xi));
        }
        best
    }

    pub fn thickness_ratio(&self) -> f64 {
        self.max_thickness_m() / self.chord_m
    }

    /// Mirror image about `y = 0`, kept counter-clockwise.
    pub fn mirrored(&self) -> Self {
        let mut pts: Vec<[f64; 2]> = self.points.iter().map(|p| [p[0], -p[1]]).collect();
        pts.reverse();
        Self {
            points: pts,
            chord_m: self.chord_m,
            name: format!("{}-mirrored", self.name),
        }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| [p[0] + dx, p[1] + dy]).collect(),
            chord_m: self.chord_m,
            name: self.name.clone(),
        }
    }

    /// Re-discretizes to `n_panels` segments, cosine-clustered on each surface
    /// by arc length so panels bunch at both edges.
    pub fn repaneled(&self, n_panels: usize) -> Result<Self> {
        if n_panels < 40 || n_panels % 2 != 0 {
            return Err(GeometryError::InvalidDiscretization(n_panels));
        }
        let half = n_panels / 2;
        let resample = |surface: &[[f64; 2]]| -> Result<Vec<[f64; 2]>> {
            let mut s = Vec::with_capacity(surface.len());
            let mut acc = 0.0;
            s.push(0.0);
            for w in surface.windows(2) {
                acc += dist(w[0], w[1]);
                s.push(acc);
            }
            let bad = || GeometryError::InvalidProfile("repeated surface points".into());
            let xs = CubicSpline::new(&s, &surface.iter().map(|p| p[0]).collect::<Vec<_>>())
                .ok_or_else(bad)?;
            let ys = CubicSpline::new(&s, &surface.iter().map(|p| p[1]).collect::<Vec<_>>())
                .ok_or_else(bad)?;
            Ok(cosine_spacing(half)
                .into_iter()
                .map(|t| {
                    let si = t * acc;
                    [xs.eval(si), ys.eval(si)]
                })
                .collect())
        };
        let upper = resample(&self.upper_surface())?;
        let lower = resample(&self.lower_surface())?;
        let mut pts: Vec<[f64; 2]> = upper.into_iter().rev().collect();
        pts.extend_from_slice(&lower[1..]);
        // keep the closure exact
        let n = pts.len();
        pts[n - 1] = pts[0];
        Self::new(pts, self.chord_m, self.name.clone())
    }
}

/// Surface ordinate as a spline in `sqrt(xi)`, which keeps the round
/// leading edge smooth.
pub(crate) struct SurfaceSpline(CubicSpline);

impl SurfaceSpline {
    fn new(xi: &[f64], y: &[f64]) -> Option<Self> {
        let u: Vec<f64> = xi.iter().map(|x| x.max(0.0).sqrt()).collect();
        CubicSpline::new(&u, y).map(Self)
    }

    pub(crate) fn eval(&self, xi: f64) -> f64 {
        self.0.eval(xi.max(0.0).sqrt())
    }

    fn knots(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.knots().iter().map(|u| u * u)
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// First pair of non-adjacent segments that properly cross, if any.
pub(crate) fn self_intersection(points: &[[f64; 2]]) -> Option<(usize, usize)> {
    let n = points.len() - 1;
    let bbox = |i: usize| {
        let (a, b) = (points[i], points[i + 1]);
        [a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1])]
    };
    let boxes: Vec<[f64; 4]> = (0..n).map(bbox).collect();
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = (boxes[i], boxes[j]);
            if a[1] < b[0] || b[1] < a[0] || a[3] < b[2] || b[3] < a[2] {
                continue;
            }
            if segments_cross(points[i], points[i + 1], points[j], points[j + 1]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Generates a closed NACA 4-digit section with `n_points` cosine-spaced
/// panels (`n_points + 1` vertices, the first repeated at the end).
///
/// The closed-trailing-edge thickness coefficient (-0.1036) is used so the
/// section closes exactly.
pub fn naca4_profile(code: &str, n_points: usize, chord_m: f64) -> Result<AirfoilProfile> {
    let digits: Vec<u32> = code.chars().filter_map(|c| c.to_digit(10)).collect();
    if code.len() != 4 || digits.len() != 4 {
        return Err(GeometryError::InvalidCode(code.to_string()));
    }
    if n_points < 40 || n_points % 2 != 0 {
        return Err(GeometryError::InvalidDiscretization(n_points));
    }
    let m = digits[0] as f64 / 100.0;
    let p = digits[1] as f64 / 10.0;
    let t = (digits[2] * 10 + digits[3]) as f64 / 100.0;
    if m > 0.0 && p == 0.0 {
        return Err(GeometryError::InvalidCode(code.to_string()));
    }

    let half_thickness = |x: f64| {
        5.0 * t
            * (0.2969 * x.sqrt() - 0.1260 * x - 0.3516 * x * x + 0.2843 * x.powi(3)
                - 0.1036 * x.powi(4))
    };
    let camber = |x: f64| -> (f64, f64) {
        if m == 0.0 {
            (0.0, 0.0)
        } else if x < p {
            (m / (p * p) * (2.0 * p * x - x * x), 2.0 * m / (p * p) * (p - x))
        } else {
            let q = (1.0 - p) * (1.0 - p);
            (m / q * (1.0 - 2.0 * p + 2.0 * p * x - x * x), 2.0 * m / q * (p - x))
        }
    };

    let stations = cosine_spacing(n_points / 2);
    let surface = |sign: f64| -> Vec<[f64; 2]> {
        stations
            .iter()
            .map(|&x| {
                let yt = half_thickness(x);
                let (yc, slope) = camber(x);
                let theta = slope.atan();
                [
                    chord_m * (x - sign * yt * theta.sin()),
                    chord_m * (yc + sign * yt * theta.cos()),
                ]
            })
            .collect()
    };
    let upper = surface(1.0);
    let lower = surface(-1.0);
    let mut pts: Vec<[f64; 2]> = upper.into_iter().rev().collect();
    pts.extend_from_slice(&lower[1..]);
    let n = pts.len();
    pts[n - 1] = pts[0];
    AirfoilProfile::new(pts, chord_m, format!("NACA{code}"))
}

/// Something whose vertical position can be sampled at chordwise fractions.
pub trait VerticalSamples {
    fn reference_chord_m(&self) -> f64;
    /// Vertical coordinates, metres, at each requested fraction.
    fn vertical_samples(&self, stations: &[f64]) -> Result<Vec<f64>>;
}

impl VerticalSamples for AirfoilProfile {
    fn reference_chord_m(&self) -> f64 {
        self.chord_m
    }

    /// Upper-surface samples followed by lower-surface samples.
    fn vertical_samples(&self, stations: &[f64]) -> Result<Vec<f64>> {
        let (upper, lower) = self.surface_splines()?;
        let mut out: Vec<f64> = stations.iter().map(|&s| upper.eval(s)).collect();
        out.extend(stations.iter().map(|&s| lower.eval(s)));
        Ok(out)
    }
}

impl VerticalSamples for CamberLine {
    fn reference_chord_m(&self) -> f64 {
        self.chord_m()
    }

    fn vertical_samples(&self, stations: &[f64]) -> Result<Vec<f64>> {
        Ok(stations.iter().map(|&s| self.offset_at(s)).collect())
    }
}

/// Root-mean-square and maximum vertical deviation, metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileError {
    pub rms_m: f64,
    pub max_m: f64,
}

/// Number of common stations used by [`profile_rms_error`].
pub const RMS_STATIONS: usize = 100;

/// Vertical deviation between two sections (or two camber lines) resampled
/// on common cosine-spaced chordwise stations.
pub fn profile_rms_error<T: VerticalSamples>(a: &T, b: &T) -> Result<ProfileError> {
    let (ca, cb) = (a.reference_chord_m(), b.reference_chord_m());
    if (ca - cb).abs() > 0.01 * ca.max(cb) {
        return Err(GeometryError::IncomparableProfiles { a_m: ca, b_m: cb });
    }
    let stations = cosine_spacing(RMS_STATIONS);
    let ya = a.vertical_samples(&stations)?;
    let yb = b.vertical_samples(&stations)?;
    let mut sum = 0.0;
    let mut max: f64 = 0.0;
    for (p, q) in ya.iter().zip(&yb) {
        let d = (p - q).abs();
        sum += d * d;
        max = max.max(d);
    }
    Ok(ProfileError {
        rms_m: (sum / ya.len() as f64).sqrt(),
        max_m: max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn naca0016_thickness_matches_code() {
        let p = naca4_profile("0016", 200, 0.230).unwrap();
        let t = p.max_thickness_m();
        assert!((t - 0.0368).abs() / 0.0368 < 0.005, "thickness {t}");
        assert_eq!(p.points().len(), 201);
        assert_eq!(p.points()[0], p.points()[200]);
    }

    #[test]
    fn naca0009_thickness_matches_code() {
        let p = naca4_profile("0009", 200, 0.213).unwrap();
        assert!((p.max_thickness_m() - 0.01917).abs() / 0.01917 < 0.005);
    }

    #[test]
    fn symmetric_section_mirrors_onto_itself() {
        let p = naca4_profile("0016", 200, 1.0).unwrap();
        let m = p.mirrored();
        for (a, b) in p.points().iter().zip(m.points()) {
            assert_abs_diff_eq!(a[0], b[0], epsilon = 1e-9);
            assert_abs_diff_eq!(a[1], b[1], epsilon = 1e-9);
        }
    }

    #[test]
    fn cambered_code_has_positive_camber() {
        let p = naca4_profile("2412", 120, 1.0).unwrap();
        let c = extract_camber(&p, 41).unwrap();
        let peak = c.stations().iter().map(|s| s.1).fold(f64::MIN, f64::max);
        assert!((peak - 0.02).abs() < 1e-3, "peak camber {peak}");
    }

    #[test]
    fn bad_codes_and_counts_are_rejected() {
        assert!(matches!(naca4_profile("00a6", 100, 1.0), Err(GeometryError::InvalidCode(_))));
        assert!(matches!(naca4_profile("016", 100, 1.0), Err(GeometryError::InvalidCode(_))));
        assert!(matches!(
            naca4_profile("0016", 38, 1.0),
            Err(GeometryError::InvalidDiscretization(38))
        ));
        assert!(matches!(
            naca4_profile("0016", 41, 1.0),
            Err(GeometryError::InvalidDiscretization(41))
        ));
    }

    #[test]
    fn open_or_crossing_polylines_are_rejected() {
        let open = vec![[1.0, 0.0], [0.0, 0.1], [0.0, -0.1], [1.0, 1e-6]];
        assert!(AirfoilProfile::new(open, 1.0, "open").is_err());
        let bowtie = vec![[1.0, 0.0], [0.0, 0.1], [1.0, 0.1], [0.0, 0.0], [1.0, 0.0]];
        assert!(AirfoilProfile::new(bowtie, 1.0, "bowtie").is_err());
    }

    #[test]
    fn rms_of_identical_and_offset_profiles() {
        let p = naca4_profile("0016", 200, 0.230).unwrap();
        let e = profile_rms_error(&p, &p).unwrap();
        assert_eq!(e.rms_m, 0.0);
        assert_eq!(e.max_m, 0.0);
        let q = p.translated(0.0, 1.0e-3);
        let e = profile_rms_error(&p, &q).unwrap();
        assert_abs_diff_eq!(e.rms_m, 1.0e-3, epsilon = 1e-12);
        assert_abs_diff_eq!(e.max_m, 1.0e-3, epsilon = 1e-12);
    }

    #[test]
    fn rms_rejects_mismatched_chords() {
        let a = naca4_profile("0016", 100, 0.230).unwrap();
        let b = naca4_profile("0016", 100, 0.240).unwrap();
        assert!(matches!(
            profile_rms_error(&a, &b),
            Err(GeometryError::IncomparableProfiles { .. })
        ));
    }

    #[test]
    fn repaneling_preserves_shape() {
        let p = naca4_profile("0012", 400, 1.0).unwrap();
        let q = p.repaneled(120).unwrap();
        assert_eq!(q.n_segments(), 120);
        let e = profile_rms_error(&p, &q).unwrap();
        assert!(e.max_m < 2e-4, "{e:?}");
    }
}
