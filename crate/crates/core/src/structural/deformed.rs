use super::mesh::{Mesh2D, OUTER_SURFACE};
use super::pressure_fit::{pressure_for_inflation, PressureFit};
use super::solver::{Chamber, DeformationState, SolverSettings, WingModel};
use super::{Result, StructuralError};
use crate::geometry::AirfoilProfile;
use std::collections::HashMap;

/// Outer-surface node furthest aft in the reference configuration.
pub fn trailing_edge_node(mesh: &Mesh2D) -> Option<usize> {
    mesh.boundary_set(OUTER_SURFACE)?
        .iter()
        .flat_map(|e| e[..2].iter().copied())
        .max_by(|&a, &b| mesh.nodes()[a][0].total_cmp(&mesh.nodes()[b][0]))
}

/// The displaced `outer_surface` as a closed profile starting at the trailing
/// edge and running over the upper surface first.
pub fn deformed_profile(mesh: &Mesh2D, state: &DeformationState) -> Result<AirfoilProfile> {
    let degenerate = |m: String| StructuralError::DegenerateGeometry(m);
    if !state.converged {
        return Err(degenerate("state is not converged".into()));
    }
    if state.displacements.len() != mesh.nodes().len() {
        return Err(degenerate("state does not belong to this mesh".into()));
    }
    let edges = mesh
        .boundary_set(OUTER_SURFACE)
        .filter(|e| !e.is_empty())
        .ok_or_else(|| degenerate("mesh has no outer_surface".into()))?;
    let mut next: HashMap<usize, &Vec<usize>> = HashMap::new();
    for e in edges {
        if next.insert(e[0], e).is_some() {
            return Err(degenerate(format!("outer_surface branches at node {}", e[0])));
        }
    }
    let start = trailing_edge_node(mesh).expect("non-empty boundary");
    let x = |n: usize| {
        let p = mesh.nodes()[n];
        let d = state.displacements[n];
        [p[0] + d[0], p[1] + d[1]]
    };
    let mut points = vec![x(start)];
    let mut node = start;
    for _ in 0..edges.len() {
        let e = next
            .get(&node)
            .ok_or_else(|| degenerate(format!("outer_surface is open at node {node}")))?;
        if let Some(&mid) = e.get(2) {
            points.push(x(mid));
        }
        points.push(x(e[1]));
        node = e[1];
        if node == start {
            break;
        }
    }
    if node != start || points.len() != edges.len() * (edges[0].len() - 1) + 1 {
        return Err(degenerate("outer_surface is not a single closed loop".into()));
    }
    let name = format!("deformed_{:.0}Pa", state.applied_pressure_pa);
    AirfoilProfile::new(points, mesh.chord_m(), name).map_err(|e| degenerate(e.to_string()))
}

#[derive(Debug, Clone)]
pub struct MorphedSection {
    pub inflation_ml: f64,
    pub pressure_pa: f64,
    pub state: DeformationState,
    pub profile: AirfoilProfile,
}

/// Morphed outlines for the pumped volumes in `inflations_ml`, returned in
/// the given order. Volumes are solved in increasing order, each starting
/// from the previous equilibrium.
pub fn inflation_series(
    model: &WingModel,
    fit: &PressureFit,
    inflations_ml: &[f64],
    settings: &SolverSettings,
) -> Result<Vec<MorphedSection>> {
    let mut order: Vec<usize> = (0..inflations_ml.len()).collect();
    order.sort_by(|&a, &b| inflations_ml[a].total_cmp(&inflations_ml[b]));
    let mut out: Vec<Option<MorphedSection>> = vec![None; inflations_ml.len()];
    let mut state = DeformationState::undeformed(model.mesh().nodes().len());
    for k in order {
        let v = inflations_ml[k];
        let p = pressure_for_inflation(fit, v)? * 1e3;
        state = model.solve_from(&state, Chamber::Upper, p, settings)?;
        log::info!("{v} mL: {p:.0} Pa, {} Newton iterations", state.newton_iterations);
        out[k] = Some(MorphedSection {
            inflation_ml: v,
            pressure_pa: p,
            profile: deformed_profile(model.mesh(), &state)?,
            state: state.clone(),
        });
    }
    Ok(out.into_iter().map(|m| m.expect("every volume solved")).collect())
}
