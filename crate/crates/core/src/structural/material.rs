//! Constitutive laws for the plane-strain model.
//!
//! Deformation gradients are the in-plane 2x2 block; the out-of-plane stretch
//! is fixed at one. Tangents are returned as 4x4 matrices over the flattened
//! components `(F11, F12, F21, F22)`.

use super::{Result, StructuralError};
use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

/// Two-parameter Mooney–Rivlin solid with a volumetric penalty.
///
/// `W = C1 (I1b - 3) + C2 (I2b - 3) + K/2 (J - 1)^2` where `I1b = J^(-2/3) I1`
/// and `I2b = J^(-4/3) I2` are the isochoric invariants of the left
/// Cauchy–Green tensor. For `J = 1` they coincide with `I1` and `I2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperelasticMaterial {
    pub c1_pa: f64,
    pub c2_pa: f64,
    pub bulk_penalty_pa: f64,
}

/// Default ratio of the volumetric penalty to `C1 + C2`.
pub const DEFAULT_PENALTY_FACTOR: f64 = 1000.0;

impl HyperelasticMaterial {
    pub fn new(c1_pa: f64, c2_pa: f64, bulk_penalty_pa: f64) -> Result<Self> {
        if !(c1_pa > 0.0) || !(c1_pa + c2_pa > 0.0) {
            return Err(StructuralError::InvalidMaterial(format!(
                "Mooney-Rivlin constants C1={c1_pa}, C2={c2_pa} violate C1 > 0, C1 + C2 > 0"
            )));
        }
        if !(bulk_penalty_pa >= 100.0 * (c1_pa + c2_pa)) {
            return Err(StructuralError::InvalidMaterial(format!(
                "bulk penalty {bulk_penalty_pa} Pa is below 100 (C1 + C2)"
            )));
        }
        Ok(Self {
            c1_pa,
            c2_pa,
            bulk_penalty_pa,
        })
    }

    pub fn with_penalty_factor(c1_pa: f64, c2_pa: f64, factor: f64) -> Result<Self> {
        Self::new(c1_pa, c2_pa, factor * (c1_pa + c2_pa))
    }

    /// Ecoflex 00-50: C10 = 4.76e-2 MPa, C01 = 1.19e-2 MPa.
    pub fn ecoflex_00_50() -> Self {
        Self::with_penalty_factor(4.76e4, 1.19e4, DEFAULT_PENALTY_FACTOR).expect("valid constants")
    }

    /// Small-strain shear modulus `2 (C1 + C2)`.
    pub fn shear_modulus_pa(&self) -> f64 {
        2.0 * (self.c1_pa + self.c2_pa)
    }

    // W and its partial derivatives as a function of a = F:F and J = det F.
    fn potential(&self, a: f64, j: f64) -> Potential {
        let (c1, c2, k) = (self.c1_pa, self.c2_pa, self.bulk_penalty_pa);
        let j23 = j.powf(-2.0 / 3.0);
        let j43 = j23 * j23;
        let w = c1 * (j23 * (a + 1.0) - 3.0) + c2 * (j43 * (a + j * j) - 3.0) + 0.5 * k * (j - 1.0).powi(2);
        let w_a = c1 * j23 + c2 * j43;
        let w_j = -2.0 / 3.0 * c1 * j23 / j * (a + 1.0) - 4.0 / 3.0 * c2 * j43 / j * a
            + 2.0 / 3.0 * c2 * j.powf(-1.0 / 3.0)
            + k * (j - 1.0);
        let w_aj = -2.0 / 3.0 * c1 * j23 / j - 4.0 / 3.0 * c2 * j43 / j;
        let w_jj = 10.0 / 9.0 * c1 * j23 / (j * j) * (a + 1.0) + 28.0 / 9.0 * c2 * j43 / (j * j) * a
            - 2.0 / 9.0 * c2 * j43
            + k;
        Potential {
            w,
            w_a,
            w_j,
            w_aj,
            w_jj,
        }
    }
}

struct Potential {
    w: f64,
    w_a: f64,
    w_j: f64,
    w_aj: f64,
    w_jj: f64,
}

/// Isotropic linear-elastic solid, applied to Green–Lagrange strain
/// (Saint Venant–Kirchhoff) so large rotations stay stress-free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearElasticMaterial {
    pub young_pa: f64,
    pub poisson: f64,
}

impl LinearElasticMaterial {
    pub fn new(young_pa: f64, poisson: f64) -> Result<Self> {
        if !(young_pa > 0.0) || !(poisson > -1.0 && poisson < 0.5) {
            return Err(StructuralError::InvalidMaterial(format!(
                "E={young_pa} Pa, nu={poisson} outside E > 0, -1 < nu < 0.5"
            )));
        }
        Ok(Self { young_pa, poisson })
    }

    pub fn aluminium() -> Self {
        Self::new(6.90e10, 0.33).expect("valid constants")
    }

    pub fn pla() -> Self {
        Self::new(3.50e9, 0.20).expect("valid constants")
    }

    fn lame(&self) -> (f64, f64) {
        let (e, nu) = (self.young_pa, self.poisson);
        (e * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)), e / (2.0 * (1.0 + nu)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Material {
    MooneyRivlin(HyperelasticMaterial),
    LinearElastic(LinearElasticMaterial),
}

/// Stored energy, first Piola–Kirchhoff stress and its derivative.
#[derive(Debug, Clone, Copy)]
pub struct StressState {
    pub energy: f64,
    pub piola: Matrix2<f64>,
    pub tangent: Matrix4<f64>,
}

#[inline]
pub(crate) fn flat(i: usize, j: usize) -> usize {
    2 * i + j
}

fn cofactor(f: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(f[(1, 1)], -f[(1, 0)], -f[(0, 1)], f[(0, 0)])
}

fn check_jacobian(f: &Matrix2<f64>) -> Result<f64> {
    let j = f.determinant();
    if !(j > 0.0) {
        return Err(StructuralError::InvertedElement { element: None, det: j });
    }
    Ok(j)
}

/// Mooney–Rivlin energy density, J/m^3.
pub fn strain_energy_density(f: &Matrix2<f64>, mat: &HyperelasticMaterial) -> Result<f64> {
    let j = check_jacobian(f)?;
    Ok(mat.potential(f.norm_squared(), j).w)
}

impl Material {
    pub fn energy(&self, f: &Matrix2<f64>) -> Result<f64> {
        match self {
            Material::MooneyRivlin(m) => strain_energy_density(f, m),
            Material::LinearElastic(m) => {
                check_jacobian(f)?;
                let (lambda, mu) = m.lame();
                let e = 0.5 * (f.transpose() * f - Matrix2::identity());
                Ok(0.5 * lambda * e.trace().powi(2) + mu * e.norm_squared())
            }
        }
    }

    pub fn stress(&self, f: &Matrix2<f64>, with_tangent: bool) -> Result<StressState> {
        let j = check_jacobian(f)?;
        match self {
            Material::MooneyRivlin(m) => {
                let p = m.potential(f.norm_squared(), j);
                let cof = cofactor(f);
                let piola = 2.0 * p.w_a * f + p.w_j * cof;
                let mut tangent = Matrix4::zeros();
                if with_tangent {
                    for i in 0..2 {
                        for jj in 0..2 {
                            let r = flat(i, jj);
                            for k in 0..2 {
                                for l in 0..2 {
                                    let c = flat(k, l);
                                    let mut v = 2.0 * p.w_aj * (f[(i, jj)] * cof[(k, l)] + cof[(i, jj)] * f[(k, l)])
                                        + p.w_jj * cof[(i, jj)] * cof[(k, l)];
                                    if i == k && jj == l {
                                        v += 2.0 * p.w_a;
                                    }
                                    tangent[(r, c)] = v;
                                }
                            }
                        }
                    }
                    // second derivative of det F
                    tangent[(0, 3)] += p.w_j;
                    tangent[(3, 0)] += p.w_j;
                    tangent[(1, 2)] -= p.w_j;
                    tangent[(2, 1)] -= p.w_j;
                }
                Ok(StressState {
                    energy: p.w,
                    piola,
                    tangent,
                })
            }
            Material::LinearElastic(m) => {
                let (lambda, mu) = m.lame();
                let e = 0.5 * (f.transpose() * f - Matrix2::identity());
                let s = lambda * e.trace() * Matrix2::identity() + 2.0 * mu * e;
                let energy = 0.5 * lambda * e.trace().powi(2) + mu * e.norm_squared();
                let piola = f * s;
                let mut tangent = Matrix4::zeros();
                if with_tangent {
                    let d = |a: usize, b: usize, c: usize, dd: usize| {
                        let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
                        lambda * delta(a, b) * delta(c, dd) + mu * (delta(a, c) * delta(b, dd) + delta(a, dd) * delta(b, c))
                    };
                    for i in 0..2 {
                        for jj in 0..2 {
                            for k in 0..2 {
                                for l in 0..2 {
                                    let mut v = if i == k { s[(l, jj)] } else { 0.0 };
                                    for mm in 0..2 {
                                        for q in 0..2 {
                                            v += f[(i, mm)] * d(mm, jj, l, q) * f[(k, q)];
                                        }
                                    }
                                    tangent[(flat(i, jj), flat(k, l))] = v;
                                }
                            }
                        }
                    }
                }
                Ok(StressState {
                    energy,
                    piola,
                    tangent,
                })
            }
        }
    }
}
