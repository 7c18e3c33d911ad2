//! Plane-strain finite element model of the pressurized soft wing section.
//!
//! Silicone is Mooney–Rivlin with a volumetric penalty; the PLA strain
//! limiter and aluminium nose are Saint Venant–Kirchhoff with their linear
//! elastic constants. Chamber pressure is a follower load on the chamber walls.

mod assembly;
mod banded;
mod deformed;
pub mod element;
mod material;
pub mod mesh;
pub mod meshio;
mod mesher;
mod pressure_fit;
mod solver;

pub use assembly::{assemble, Assembly, DofMap};
pub use banded::BandedMatrix;
pub use deformed::{deformed_profile, inflation_series, trailing_edge_node, MorphedSection};
pub use element::ElementKind;
pub use material::{
    strain_energy_density, HyperelasticMaterial, LinearElasticMaterial, Material, StressState,
    DEFAULT_PENALTY_FACTOR,
};
pub use mesh::{material_id, Edge, Mesh2D, MeshElement};
pub use mesher::{build_wing_mesh, WingSectionParams};
pub use pressure_fit::{
    fit_pressure_curve, pressure_for_inflation, FitSource, PressureFit, MAX_INFLATION_ML, TABLE_II,
};
pub use solver::{solve_inflation, Chamber, DeformationState, SolverSettings, WingModel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum StructuralError {
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("inverted element{}: det F = {det}", element.map(|e| format!(" {e}")).unwrap_or_default())]
    InvertedElement { element: Option<usize>, det: f64 },
    #[error("Newton iteration did not converge at {pressure_pa} Pa (last residual {residual})")]
    NonConvergence { residual: f64, pressure_pa: f64 },
    #[error("invalid load: {0}")]
    InvalidLoad(String),
    #[error("singular stiffness at equation {0}")]
    Singular(usize),
    #[error("underdetermined fit: {0} distinct points, need at least 3")]
    Underdetermined(usize),
    #[error("inflation {0} mL is outside [0, 150] mL")]
    ExtrapolationRange(f64),
    #[error("degenerate deformed geometry: {0}")]
    DegenerateGeometry(String),
    #[error("mesh file line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, StructuralError>;

/// Material table for meshes produced by [`build_wing_mesh`], indexed by
/// [`material_id`].
pub fn wing_materials(silicone: HyperelasticMaterial) -> Vec<Material> {
    vec![
        Material::MooneyRivlin(silicone),
        Material::LinearElastic(LinearElasticMaterial::pla()),
        Material::LinearElastic(LinearElasticMaterial::aluminium()),
    ]
}
