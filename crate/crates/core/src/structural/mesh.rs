use super::element::ElementKind;
use super::{Result, StructuralError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

pub const LEADING_EDGE_FIXED: &str = "leading_edge_fixed";
pub const CHAMBER_UPPER: &str = "chamber_upper";
pub const CHAMBER_LOWER: &str = "chamber_lower";
pub const OUTER_SURFACE: &str = "outer_surface";

/// Material ids used by the built-in wing mesher.
pub mod material_id {
    pub const SILICONE: usize = 0;
    pub const PLA: usize = 1;
    pub const ALUMINIUM: usize = 2;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshElement {
    pub kind: ElementKind,
    pub nodes: Vec<usize>,
    pub material: usize,
}

/// A boundary edge: `[start, end]` or `[start, end, mid]`, oriented so the
/// owning element lies on its left.
pub type Edge = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh2D {
    nodes: Vec<[f64; 2]>,
    elements: Vec<MeshElement>,
    boundary_sets: BTreeMap<String, Vec<Edge>>,
    bonded_pairs: Vec<(usize, usize)>,
}

/// Coincidence tolerance for bonded node pairs, metres.
pub const BOND_TOL_M: f64 = 1e-9;

impl Mesh2D {
    pub fn new(
        nodes: Vec<[f64; 2]>,
        elements: Vec<MeshElement>,
        boundary_sets: BTreeMap<String, Vec<Edge>>,
        bonded_pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let invalid = |msg: String| StructuralError::InvalidMesh(msg);
        if nodes.iter().flatten().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite node coordinate".into()));
        }
        for (e, el) in elements.iter().enumerate() {
            if el.nodes.len() != el.kind.n_nodes() {
                return Err(invalid(format!(
                    "element {e} has {} nodes, {:?} needs {}",
                    el.nodes.len(),
                    el.kind,
                    el.kind.n_nodes()
                )));
            }
            if let Some(&n) = el.nodes.iter().find(|&&n| n >= nodes.len()) {
                return Err(invalid(format!("element {e} references missing node {n}")));
            }
            let min_det = reference_jacobians(el, &nodes).into_iter().fold(f64::MAX, f64::min);
            if !(min_det > 0.0) {
                return Err(invalid(format!("element {e} has non-positive area")));
            }
        }

        // every boundary edge must be an element edge; orient it like the element
        let mut owner: HashMap<(usize, usize), Edge> = HashMap::new();
        for el in &elements {
            for local in el.kind.edges() {
                let edge: Edge = local.iter().map(|&i| el.nodes[i]).collect();
                let key = (edge[0].min(edge[1]), edge[0].max(edge[1]));
                owner.insert(key, edge);
            }
        }
        let mut sets = BTreeMap::new();
        for (name, edges) in boundary_sets {
            let mut oriented = Vec::with_capacity(edges.len());
            for edge in edges {
                if edge.len() < 2 {
                    return Err(invalid(format!("boundary set {name:?} has a short edge")));
                }
                let key = (edge[0].min(edge[1]), edge[0].max(edge[1]));
                let found = owner.get(&key).ok_or_else(|| {
                    invalid(format!("boundary set {name:?} edge {edge:?} is not an element edge"))
                })?;
                if found.len() != edge.len() || (edge.len() == 3 && edge[2] != found[2]) {
                    return Err(invalid(format!(
                        "boundary set {name:?} edge {edge:?} does not match element edge {found:?}"
                    )));
                }
                oriented.push(found.clone());
            }
            sets.insert(name, oriented);
        }

        for &(a, b) in &bonded_pairs {
            if a >= nodes.len() || b >= nodes.len() {
                return Err(invalid(format!("bonded pair ({a}, {b}) references a missing node")));
            }
            let d = (nodes[a][0] - nodes[b][0]).hypot(nodes[a][1] - nodes[b][1]);
            if d > BOND_TOL_M {
                return Err(invalid(format!("bonded pair ({a}, {b}) is {d} m apart")));
            }
        }

        Ok(Self {
            nodes,
            elements,
            boundary_sets: sets,
            bonded_pairs,
        })
    }

    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn elements(&self) -> &[MeshElement] {
        &self.elements
    }

    pub fn boundary_sets(&self) -> &BTreeMap<String, Vec<Edge>> {
        &self.boundary_sets
    }

    pub fn boundary_set(&self, name: &str) -> Option<&[Edge]> {
        self.boundary_sets.get(name).map(Vec::as_slice)
    }

    pub fn bonded_pairs(&self) -> &[(usize, usize)] {
        &self.bonded_pairs
    }

    /// Nodes held fixed: everything on a `leading_edge_fixed` edge.
    pub fn fixed_nodes(&self) -> Vec<usize> {
        let mut fixed: Vec<usize> = self
            .boundary_set(LEADING_EDGE_FIXED)
            .unwrap_or(&[])
            .iter()
            .flatten()
            .copied()
            .collect();
        fixed.sort_unstable();
        fixed.dedup();
        fixed
    }

    /// Same mesh rigidly rotated about the origin.
    pub fn rotated(&self, angle_rad: f64) -> Self {
        let (s, c) = angle_rad.sin_cos();
        let mut out = self.clone();
        for p in &mut out.nodes {
            *p = [c * p[0] - s * p[1], s * p[0] + c * p[1]];
        }
        out
    }

    /// Chordwise extent of the mesh.
    pub fn chord_m(&self) -> f64 {
        let (lo, hi) = self
            .nodes
            .iter()
            .fold((f64::MAX, f64::MIN), |(lo, hi), p| (lo.min(p[0]), hi.max(p[0])));
        hi - lo
    }

    /// Area of every element in the reference configuration.
    pub fn element_areas(&self) -> Vec<f64> {
        self.elements
            .iter()
            .map(|el| {
                el.kind
                    .quadrature()
                    .iter()
                    .map(|&(xi, eta, w)| w * jacobian_det(el, &self.nodes, xi, eta))
                    .sum()
            })
            .collect()
    }
}

pub(crate) fn jacobian_det(el: &MeshElement, nodes: &[[f64; 2]], xi: f64, eta: f64) -> f64 {
    let g = el.kind.shape_gradients(xi, eta);
    let mut j = [[0.0; 2]; 2];
    for (a, &n) in el.nodes.iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                j[r][c] += nodes[n][r] * g[a][c];
            }
        }
    }
    j[0][0] * j[1][1] - j[0][1] * j[1][0]
}

fn reference_jacobians(el: &MeshElement, nodes: &[[f64; 2]]) -> Vec<f64> {
    el.kind
        .quadrature()
        .iter()
        .map(|&(x, y, _)| (x, y))
        .chain(el.kind.node_coordinates().iter().copied())
        .map(|(x, y)| jacobian_det(el, nodes, x, y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> (Vec<[f64; 2]>, Vec<MeshElement>) {
        let nodes = vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let el = |n: [usize; 3]| MeshElement {
            kind: ElementKind::Tri3,
            nodes: n.to_vec(),
            material: 0,
        };
        (nodes, vec![el([0, 1, 2]), el([0, 2, 3])])
    }

    #[test]
    fn boundary_edges_take_element_orientation() {
        let (nodes, elements) = square();
        let mut sets = BTreeMap::new();
        sets.insert(OUTER_SURFACE.to_string(), vec![vec![1, 0], vec![2, 1]]);
        let mesh = Mesh2D::new(nodes, elements, sets, vec![]).unwrap();
        assert_eq!(mesh.boundary_set(OUTER_SURFACE).unwrap(), &[vec![0, 1], vec![1, 2]]);
        let area: f64 = mesh.element_areas().iter().sum();
        assert!((area - 1.0).abs() < 1e-15);
    }

    #[test]
    fn clockwise_element_is_rejected() {
        let (nodes, mut elements) = square();
        elements[0].nodes = vec![0, 2, 1];
        let err = Mesh2D::new(nodes, elements, BTreeMap::new(), vec![]).unwrap_err();
        assert!(err.to_string().contains("element 0"), "{err}");
    }

    #[test]
    fn unknown_edge_and_far_bond_are_rejected() {
        let (nodes, elements) = square();
        let mut sets = BTreeMap::new();
        sets.insert(LEADING_EDGE_FIXED.to_string(), vec![vec![1, 3]]);
        assert!(Mesh2D::new(nodes.clone(), elements.clone(), sets, vec![]).is_err());
        assert!(Mesh2D::new(nodes, elements, BTreeMap::new(), vec![(0, 2)]).is_err());
    }
}
