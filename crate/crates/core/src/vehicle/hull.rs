//! Closed forms for a prolate-spheroid hull of length `l` and diameter `d`.

use std::f64::consts::PI;

fn eccentricity(l: f64, d: f64) -> f64 {
    (1.0 - (d / l).powi(2)).sqrt()
}

pub fn prolate_volume(l: f64, d: f64) -> f64 {
    PI / 6.0 * d * d * l
}

pub fn prolate_wetted_area(l: f64, d: f64) -> f64 {
    let (a, b) = (0.5 * l, 0.5 * d);
    let e = eccentricity(l, d);
    2.0 * PI * b * b * (1.0 + a / (b * e) * e.asin())
}

/// Lamb's axial and transverse added-mass coefficients `(k1, k2)`.
pub fn prolate_added_mass(l: f64, d: f64) -> (f64, f64) {
    let e = eccentricity(l, d);
    let log = ((1.0 + e) / (1.0 - e)).ln();
    let alpha0 = 2.0 * (1.0 - e * e) / e.powi(3) * (0.5 * log - e);
    let beta0 = 1.0 / (e * e) - (1.0 - e * e) / (2.0 * e.powi(3)) * log;
    (alpha0 / (2.0 - alpha0), beta0 / (2.0 - beta0))
}

/// ITTC-1957 friction line. The hull boundary layer is taken as tripped at
/// the nose.
pub fn ittc_friction(re: f64) -> f64 {
    0.075 / (re.log10() - 2.0).powi(2)
}

/// Hoerner's form factor for streamlined bodies of revolution.
pub fn form_factor(d_over_l: f64) -> f64 {
    1.0 + 1.5 * d_over_l.powf(1.5) + 7.0 * d_over_l.powi(3)
}
