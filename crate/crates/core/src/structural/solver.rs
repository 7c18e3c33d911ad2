//! Quasi-static load ramp with damped Newton iterations.

use super::assembly::{assemble, DofMap};
use super::material::{HyperelasticMaterial, Material};
use super::mesh::{Mesh2D, CHAMBER_LOWER, CHAMBER_UPPER};
use super::mesher::{build_wing_mesh, WingSectionParams};
use super::{wing_materials, Result, StructuralError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub n_load_steps: usize,
    pub max_newton_iterations: usize,
    /// Residual tolerance as a multiple of `C1 * chord`.
    pub tolerance_factor: f64,
    pub max_bisections: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            n_load_steps: 10,
            max_newton_iterations: 30,
            tolerance_factor: 1e-8,
            max_bisections: 5,
        }
    }
}

/// Which chamber carries the pressure. Upper-chamber pressure bends the
/// trailing edge down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chamber {
    Upper,
    Lower,
}

impl Chamber {
    pub fn boundary_set(self) -> &'static str {
        match self {
            Chamber::Upper => CHAMBER_UPPER,
            Chamber::Lower => CHAMBER_LOWER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationState {
    /// Per-node `(u, v)`, metres.
    pub displacements: Vec<[f64; 2]>,
    pub applied_pressure_pa: f64,
    pub chamber: Chamber,
    pub converged: bool,
    /// Newton iterations summed over all load increments.
    pub newton_iterations: usize,
    pub residual_norm: f64,
}

impl DeformationState {
    pub fn undeformed(n_nodes: usize) -> Self {
        Self {
            displacements: vec![[0.0; 2]; n_nodes],
            applied_pressure_pa: 0.0,
            chamber: Chamber::Upper,
            converged: true,
            newton_iterations: 0,
            residual_norm: 0.0,
        }
    }
}

/// A mesh with its material table and equation numbering, ready to solve.
#[derive(Debug, Clone)]
pub struct WingModel {
    mesh: Mesh2D,
    materials: Vec<Material>,
    dofs: DofMap,
    force_scale: f64,
}

impl WingModel {
    /// `materials` is indexed by element material id. The residual scale uses
    /// the first Mooney–Rivlin `C1` found, or the largest Young's modulus.
    pub fn new(mesh: Mesh2D, materials: Vec<Material>) -> Result<Self> {
        if let Some(el) = mesh.elements().iter().find(|e| e.material >= materials.len()) {
            return Err(StructuralError::InvalidMesh(format!(
                "material id {} has no material (table has {})",
                el.material,
                materials.len()
            )));
        }
        let c1 = materials
            .iter()
            .find_map(|m| match m {
                Material::MooneyRivlin(h) => Some(h.c1_pa),
                _ => None,
            })
            .or_else(|| {
                materials
                    .iter()
                    .filter_map(|m| match m {
                        Material::LinearElastic(l) => Some(l.young_pa),
                        _ => None,
                    })
                    .reduce(f64::max)
            })
            .ok_or_else(|| StructuralError::InvalidMaterial("empty material table".into()))?;
        let dofs = DofMap::new(&mesh);
        let force_scale = c1 * mesh.chord_m();
        Ok(Self {
            mesh,
            materials,
            dofs,
            force_scale,
        })
    }

    /// Wing section with the given silicone and the built-in PLA and aluminium.
    pub fn wing(params: &WingSectionParams, silicone: HyperelasticMaterial) -> Result<Self> {
        Self::new(build_wing_mesh(params)?, wing_materials(silicone))
    }

    pub fn mesh(&self) -> &Mesh2D {
        &self.mesh
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn tolerance(&self, settings: &SolverSettings) -> f64 {
        settings.tolerance_factor * self.force_scale
    }

    /// Ramps the pressure in `chamber` from zero to `pressure_pa`.
    pub fn solve(&self, chamber: Chamber, pressure_pa: f64, settings: &SolverSettings) -> Result<DeformationState> {
        self.solve_from(&DeformationState::undeformed(self.mesh.nodes().len()), chamber, pressure_pa, settings)
    }

    /// Ramps from a converged state of the same chamber to a new pressure.
    pub fn solve_from(
        &self,
        start: &DeformationState,
        chamber: Chamber,
        pressure_pa: f64,
        settings: &SolverSettings,
    ) -> Result<DeformationState> {
        if !(pressure_pa >= 0.0) || !pressure_pa.is_finite() {
            return Err(StructuralError::InvalidLoad(format!("pressure {pressure_pa} Pa must be >= 0")));
        }
        if settings.n_load_steps == 0 {
            return Err(StructuralError::InvalidLoad("n_load_steps must be at least 1".into()));
        }
        let mut p0 = start.applied_pressure_pa;
        if start.displacements.len() != self.mesh.nodes().len() || (p0 > 0.0 && start.chamber != chamber) {
            return Err(StructuralError::InvalidLoad("start state does not belong to this load case".into()));
        }
        let mut u = self.dofs.restrict(&start.displacements);
        let mut iterations = 0;
        let mut residual = start.residual_norm;
        if pressure_pa != p0 {
            let n = settings.n_load_steps as f64;
            let step = (pressure_pa - p0) / n;
            for k in 1..=settings.n_load_steps {
                let p1 = if k == settings.n_load_steps { pressure_pa } else { start.applied_pressure_pa + step * k as f64 };
                residual = self.advance(&mut u, chamber, p0, p1, 0, settings, &mut iterations)?;
                p0 = p1;
            }
        } else if pressure_pa == 0.0 {
            residual = 0.0;
        }
        log::debug!("pressure {pressure_pa} Pa on {chamber:?}: {iterations} Newton iterations");
        Ok(DeformationState {
            displacements: self.dofs.expand(&u),
            applied_pressure_pa: pressure_pa,
            chamber,
            converged: true,
            newton_iterations: start.newton_iterations + iterations,
            residual_norm: residual,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn advance(
        &self,
        u: &mut Vec<f64>,
        chamber: Chamber,
        p0: f64,
        p1: f64,
        depth: usize,
        settings: &SolverSettings,
        iterations: &mut usize,
    ) -> Result<f64> {
        let saved = u.clone();
        match self.newton(u, chamber, p1, settings, iterations) {
            Ok(r) => Ok(r),
            Err(
                e @ (StructuralError::InvertedElement { .. }
                | StructuralError::NonConvergence { .. }
                | StructuralError::Singular(_)),
            ) => {
                if depth >= settings.max_bisections {
                    return Err(e);
                }
                log::debug!("bisecting load step {p0}..{p1} Pa after: {e}");
                *u = saved;
                let mid = 0.5 * (p0 + p1);
                self.advance(u, chamber, p0, mid, depth + 1, settings, iterations)?;
                self.advance(u, chamber, mid, p1, depth + 1, settings, iterations)
            }
            Err(e) => Err(e),
        }
    }

    fn residual(&self, u: &[f64], chamber: Chamber, p: f64) -> Result<f64> {
        let a = assemble(&self.mesh, &self.materials, &self.dofs, &self.dofs.expand(u), &[(chamber.boundary_set(), p)], false)?;
        Ok(norm(&a.residual))
    }

    fn newton(
        &self,
        u: &mut [f64],
        chamber: Chamber,
        p: f64,
        settings: &SolverSettings,
        iterations: &mut usize,
    ) -> Result<f64> {
        let tol = self.tolerance(settings);
        let load = [(chamber.boundary_set(), p)];
        let mut last = f64::INFINITY;
        for _ in 0..settings.max_newton_iterations {
            let asm = assemble(&self.mesh, &self.materials, &self.dofs, &self.dofs.expand(u), &load, true)?;
            let r = norm(&asm.residual);
            if !r.is_finite() {
                break;
            }
            last = r;
            if r <= tol {
                return Ok(r);
            }
            *iterations += 1;
            let rhs: Vec<f64> = asm.residual.iter().map(|v| -v).collect();
            let du = asm.tangent.expect("tangent requested").solve(&rhs)?;
            // The residual norm is dominated by the stiff PLA and is a poor
            // merit function, so full steps are taken unless one inverts an
            // element or blows up.
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..12 {
                let trial: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + alpha * b).collect();
                match self.residual(&trial, chamber, p) {
                    Ok(rt) if rt.is_finite() && rt < 1e6 * r.max(tol) => {
                        u.copy_from_slice(&trial);
                        accepted = true;
                        break;
                    }
                    Ok(_) | Err(StructuralError::InvertedElement { .. }) => alpha *= 0.5,
                    Err(e) => return Err(e),
                }
            }
            if !accepted {
                break;
            }
        }
        let last = match self.residual(u, chamber, p) {
            Ok(r) if r <= tol => return Ok(r),
            Ok(r) => r,
            Err(_) => last,
        };
        Err(StructuralError::NonConvergence {
            residual: last,
            pressure_pa: p,
        })
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Inflates the upper chamber of `mesh` (built-in wing material table) to
/// `target_pressure_pa` in `n_load_steps` equal increments.
pub fn solve_inflation(mesh: &Mesh2D, target_pressure_pa: f64, n_load_steps: usize) -> Result<DeformationState> {
    let model = WingModel::new(mesh.clone(), wing_materials(HyperelasticMaterial::ecoflex_00_50()))?;
    let settings = SolverSettings {
        n_load_steps,
        ..Default::default()
    };
    model.solve(Chamber::Upper, target_pressure_pa, &settings)
}
