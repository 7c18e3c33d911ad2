//! CSV import/export: sections as `x_m,y_m`, mean lines as `x_over_c,y_m`.

use super::{AirfoilProfile, CamberLine, GeometryError, Result};
use crate::table::{comment_value, fmt, read_numeric_csv, write_csv};
use std::io::{Read, Write};
use std::path::Path;

pub const PROFILE_HEADER: [&str; 2] = ["x_m", "y_m"];
pub const CAMBER_HEADER: [&str; 2] = ["x_over_c", "y_m"];

pub fn write_profile<W: Write>(out: W, profile: &AirfoilProfile, comments: &[String]) -> Result<()> {
    let mut all = vec![format!("profile {} chord_m={}", profile.name(), fmt(profile.chord_m()))];
    all.extend_from_slice(comments);
    let rows = profile.points().iter().map(|p| vec![fmt(p[0]), fmt(p[1])]);
    write_csv(out, &all, &PROFILE_HEADER, rows)?;
    Ok(())
}

/// Reads a section; the chord is taken from a `chord_m=` comment when
/// present, otherwise from the `x` extent.
pub fn read_profile<R: Read>(mut input: R, name: &str) -> Result<AirfoilProfile> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let (header, rows) = read_numeric_csv(text.as_bytes())?;
    check_header(&header, &PROFILE_HEADER)?;
    let points: Vec<[f64; 2]> = rows.iter().map(|r| [r[0], r[1]]).collect();
    let chord = comment_value(&text, "chord_m=").unwrap_or_else(|| {
        let (lo, hi) = points
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
        hi - lo
    });
    AirfoilProfile::new(points, chord, name)
}

pub fn write_camber<W: Write>(out: W, camber: &CamberLine, comments: &[String]) -> Result<()> {
    let mut all = vec![format!(
        "camber inflation_mL={} chord_m={}",
        fmt(camber.inflation_ml()),
        fmt(camber.chord_m())
    )];
    all.extend_from_slice(comments);
    let rows = camber.stations().iter().map(|s| vec![fmt(s.0), fmt(s.1)]);
    write_csv(out, &all, &CAMBER_HEADER, rows)?;
    Ok(())
}

/// Reads a mean line. `chord_m=` and `inflation_mL=` comments are honoured;
/// otherwise `default_chord_m` and zero inflation are assumed.
pub fn read_camber<R: Read>(mut input: R, default_chord_m: f64) -> Result<CamberLine> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let (header, rows) = read_numeric_csv(text.as_bytes())?;
    check_header(&header, &CAMBER_HEADER)?;
    let chord = comment_value(&text, "chord_m=").unwrap_or(default_chord_m);
    let inflation = comment_value(&text, "inflation_mL=").unwrap_or(0.0);
    CamberLine::new(rows.iter().map(|r| (r[0], r[1])).collect(), chord, inflation)
}

pub fn load_camber(path: &Path, default_chord_m: f64) -> Result<CamberLine> {
    read_camber(std::fs::File::open(path)?, default_chord_m)
}

fn check_header(found: &[String], expected: &[&str]) -> Result<()> {
    if found.len() != expected.len() || found.iter().zip(expected).any(|(a, b)| a != b) {
        return Err(GeometryError::InvalidProfile(format!(
            "expected header {}, found {}",
            expected.join(","),
            found.join(",")
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::naca4_profile;

    #[test]
    fn profile_csv_round_trips() {
        let p = naca4_profile("0016", 60, 0.230).unwrap();
        let mut buf = Vec::new();
        write_profile(&mut buf, &p, &[]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap() == "x_m,y_m");
        let q = read_profile(buf.as_slice(), p.name()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn camber_csv_round_trips() {
        let c = CamberLine::parabolic(0.003, 12, 0.230).with_inflation(30.0);
        let mut buf = Vec::new();
        write_camber(&mut buf, &c, &["digitized".into()]).unwrap();
        assert_eq!(read_camber(buf.as_slice(), 1.0).unwrap(), c);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let text = "a,b\n0,0\n1,1\n";
        assert!(read_camber(text.as_bytes(), 1.0).is_err());
    }
}
