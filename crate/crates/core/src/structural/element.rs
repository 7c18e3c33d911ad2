//! Triangle shape functions and quadrature.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    /// Three-node linear triangle.
    Tri3,
    /// Six-node quadratic triangle: corners, then mid-edge nodes of edges
    /// 0-1, 1-2 and 2-0.
    Tri6,
}

impl ElementKind {
    pub fn n_nodes(self) -> usize {
        match self {
            ElementKind::Tri3 => 3,
            ElementKind::Tri6 => 6,
        }
    }

    /// Node indices (local) of each edge: `[start, end]` or `[start, end, mid]`.
    pub fn edges(self) -> [Vec<usize>; 3] {
        match self {
            ElementKind::Tri3 => [vec![0, 1], vec![1, 2], vec![2, 0]],
            ElementKind::Tri6 => [vec![0, 1, 3], vec![1, 2, 4], vec![2, 0, 5]],
        }
    }

    /// Quadrature points `(xi, eta, weight)` on the reference triangle.
    pub fn quadrature(self) -> &'static [(f64, f64, f64)] {
        match self {
            ElementKind::Tri3 => &[(1.0 / 3.0, 1.0 / 3.0, 0.5)],
            ElementKind::Tri6 => &[
                (1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0),
                (2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0),
                (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0),
            ],
        }
    }

    /// Reference-coordinate gradients `[dN/dxi, dN/deta]` of every node.
    pub fn shape_gradients(self, xi: f64, eta: f64) -> Vec<[f64; 2]> {
        match self {
            ElementKind::Tri3 => vec![[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]],
            ElementKind::Tri6 => {
                let l1 = 1.0 - xi - eta;
                let (l2, l3) = (xi, eta);
                let d1 = [-1.0, -1.0];
                let d2 = [1.0, 0.0];
                let d3 = [0.0, 1.0];
                let corner = |l: f64, d: [f64; 2]| [(4.0 * l - 1.0) * d[0], (4.0 * l - 1.0) * d[1]];
                let mid = |la: f64, da: [f64; 2], lb: f64, db: [f64; 2]| {
                    [4.0 * (la * db[0] + lb * da[0]), 4.0 * (la * db[1] + lb * da[1])]
                };
                vec![
                    corner(l1, d1),
                    corner(l2, d2),
                    corner(l3, d3),
                    mid(l1, d1, l2, d2),
                    mid(l2, d2, l3, d3),
                    mid(l3, d3, l1, d1),
                ]
            }
        }
    }

    /// Reference coordinates of each node.
    pub fn node_coordinates(self) -> &'static [(f64, f64)] {
        match self {
            ElementKind::Tri3 => &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
            ElementKind::Tri6 => &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (0.5, 0.0), (0.5, 0.5), (0.0, 0.5)],
        }
    }
}

/// Two-point Gauss rule on `[-1, 1]`; exact for the cubic integrands of
/// quadratic-edge pressure loads.
pub const EDGE_GAUSS: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];

/// Edge shape functions and their `s`-derivatives for 2- or 3-node edges
/// ordered `[start, end, mid]`.
pub fn edge_shape(n: usize, s: f64) -> (Vec<f64>, Vec<f64>) {
    match n {
        2 => (vec![0.5 * (1.0 - s), 0.5 * (1.0 + s)], vec![-0.5, 0.5]),
        3 => (
            vec![0.5 * s * (s - 1.0), 0.5 * s * (s + 1.0), 1.0 - s * s],
            vec![s - 0.5, s + 0.5, -2.0 * s],
        ),
        _ => panic!("edges have 2 or 3 nodes"),
    }
}
