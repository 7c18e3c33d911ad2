//! Total-Lagrangian assembly of internal forces, follower pressure loads and
//! the consistent tangent.

use super::banded::BandedMatrix;
use super::element::{edge_shape, EDGE_GAUSS};
use super::material::{flat, Material};
use super::mesh::{Mesh2D, MeshElement};
use super::{Result, StructuralError};
use nalgebra::{DMatrix, Matrix2};
use rayon::prelude::*;
use std::collections::VecDeque;

/// Equation numbering: bonded nodes share equations, fixed nodes get none,
/// free nodes are ordered by reverse Cuthill–McKee to keep the band narrow.
#[derive(Debug, Clone)]
pub struct DofMap {
    eq: Vec<Option<usize>>,
    n_eq: usize,
    half_bandwidth: usize,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

impl DofMap {
    pub fn new(mesh: &Mesh2D) -> Self {
        let n = mesh.nodes().len();
        let mut parent: Vec<usize> = (0..n).collect();
        for &(a, b) in mesh.bonded_pairs() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let class: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let mut fixed = vec![false; n];
        for f in mesh.fixed_nodes() {
            fixed[class[f]] = true;
        }

        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for el in mesh.elements() {
            for &a in &el.nodes {
                for &b in &el.nodes {
                    let (ca, cb) = (class[a], class[b]);
                    if ca != cb && !fixed[ca] && !fixed[cb] {
                        adj[ca].push(cb);
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let free: Vec<usize> = (0..n).filter(|&i| class[i] == i && !fixed[i]).collect();
        let order = reverse_cuthill_mckee(&free, &adj);

        let mut class_eq = vec![None; n];
        for (k, &c) in order.iter().enumerate() {
            class_eq[c] = Some(2 * k);
        }
        let eq: Vec<Option<usize>> = (0..n).map(|i| class_eq[class[i]]).collect();
        let mut half_bandwidth = 1;
        for el in mesh.elements() {
            let e: Vec<usize> = el.nodes.iter().filter_map(|&a| eq[a]).collect();
            if let (Some(lo), Some(hi)) = (e.iter().min(), e.iter().max()) {
                half_bandwidth = half_bandwidth.max(hi - lo + 1);
            }
        }
        Self {
            eq,
            n_eq: 2 * order.len(),
            half_bandwidth,
        }
    }

    pub fn n_equations(&self) -> usize {
        self.n_eq
    }

    pub fn half_bandwidth(&self) -> usize {
        self.half_bandwidth
    }

    /// Equation of a node's `dir` (0 = x, 1 = y) displacement, if free.
    pub fn equation(&self, node: usize, dir: usize) -> Option<usize> {
        self.eq[node].map(|e| e + dir)
    }

    /// Per-node displacements from a solution vector.
    pub fn expand(&self, free: &[f64]) -> Vec<[f64; 2]> {
        self.eq
            .iter()
            .map(|e| match e {
                Some(e) => [free[*e], free[e + 1]],
                None => [0.0, 0.0],
            })
            .collect()
    }

    /// Solution vector from per-node displacements (fixed nodes dropped).
    pub fn restrict(&self, u: &[[f64; 2]]) -> Vec<f64> {
        let mut out = vec![0.0; self.n_eq];
        for (node, e) in self.eq.iter().enumerate() {
            if let Some(e) = e {
                out[*e] = u[node][0];
                out[e + 1] = u[node][1];
            }
        }
        out
    }
}

fn reverse_cuthill_mckee(nodes: &[usize], adj: &[Vec<usize>]) -> Vec<usize> {
    let mut visited = vec![false; adj.len()];
    let mut order = Vec::with_capacity(nodes.len());
    let bfs = |start: usize, visited: &mut Vec<bool>, out: &mut Vec<usize>| -> usize {
        // returns the last node reached, a pseudo-peripheral candidate
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        let mut last = start;
        while let Some(v) = queue.pop_front() {
            out.push(v);
            last = v;
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
        last
    };
    let mut by_degree: Vec<usize> = nodes.to_vec();
    by_degree.sort_by_key(|&v| (adj[v].len(), v));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let mut probe_visited = visited.clone();
        let mut scratch = Vec::new();
        let start = bfs(seed, &mut probe_visited, &mut scratch);
        let mut component = Vec::new();
        bfs(start, &mut visited, &mut component);
        order.extend(component);
    }
    order.reverse();
    order
}

/// Result of one assembly pass over free equations.
#[derive(Debug, Clone)]
pub struct Assembly {
    /// Internal minus external forces.
    pub residual: Vec<f64>,
    pub internal: Vec<f64>,
    pub external: Vec<f64>,
    /// Stored strain energy per unit depth, J/m.
    pub energy: f64,
    pub tangent: Option<BandedMatrix>,
}

struct Local {
    dofs: Vec<Option<usize>>,
    force: Vec<f64>,
    stiffness: Option<DMatrix<f64>>,
    energy: f64,
}

fn element_local(
    id: usize,
    el: &MeshElement,
    nodes: &[[f64; 2]],
    u: &[[f64; 2]],
    material: &Material,
    with_tangent: bool,
) -> Result<(Vec<f64>, Option<DMatrix<f64>>, f64)> {
    let nn = el.nodes.len();
    let mut force = vec![0.0; 2 * nn];
    let mut k = with_tangent.then(|| DMatrix::zeros(2 * nn, 2 * nn));
    let mut energy = 0.0;
    for &(xi, eta, w) in el.kind.quadrature() {
        let g = el.kind.shape_gradients(xi, eta);
        let mut j0 = Matrix2::zeros();
        for (a, &n) in el.nodes.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    j0[(r, c)] += nodes[n][r] * g[a][c];
                }
            }
        }
        let det0 = j0.determinant();
        let inv = j0
            .try_inverse()
            .ok_or(StructuralError::InvertedElement { element: Some(id), det: det0 })?;
        // dN/dX = dN/dxi * dxi/dX
        let dn: Vec<[f64; 2]> = g
            .iter()
            .map(|d| [d[0] * inv[(0, 0)] + d[1] * inv[(1, 0)], d[0] * inv[(0, 1)] + d[1] * inv[(1, 1)]])
            .collect();
        let mut f = Matrix2::identity();
        for (a, &n) in el.nodes.iter().enumerate() {
            for i in 0..2 {
                for jj in 0..2 {
                    f[(i, jj)] += u[n][i] * dn[a][jj];
                }
            }
        }
        let s = material.stress(&f, with_tangent).map_err(|e| match e {
            StructuralError::InvertedElement { det, .. } => StructuralError::InvertedElement { element: Some(id), det },
            other => other,
        })?;
        let dv = w * det0;
        energy += dv * s.energy;
        for a in 0..nn {
            for i in 0..2 {
                force[2 * a + i] += dv * (s.piola[(i, 0)] * dn[a][0] + s.piola[(i, 1)] * dn[a][1]);
            }
        }
        if let Some(k) = k.as_mut() {
            for a in 0..nn {
                for i in 0..2 {
                    for b in 0..nn {
                        for kk in 0..2 {
                            let mut v = 0.0;
                            for jj in 0..2 {
                                for l in 0..2 {
                                    v += s.tangent[(flat(i, jj), flat(kk, l))] * dn[a][jj] * dn[b][l];
                                }
                            }
                            k[(2 * a + i, 2 * b + kk)] += dv * v;
                        }
                    }
                }
            }
        }
    }
    Ok((force, k, energy))
}

/// Nodal forces of a pressure acting on an edge from its right-hand side
/// (the element lies on the left), in the current configuration, and their
/// derivative with respect to the edge's current nodal positions.
pub(crate) fn pressure_edge(edge: &[usize], x: &[[f64; 2]], pressure: f64) -> (Vec<f64>, DMatrix<f64>) {
    let n = edge.len();
    let mut f = vec![0.0; 2 * n];
    let mut k = DMatrix::zeros(2 * n, 2 * n);
    for &(s, w) in &EDGE_GAUSS {
        let (sh, ds) = edge_shape(n, s);
        let mut t = [0.0; 2];
        for c in 0..n {
            t[0] += ds[c] * x[edge[c]][0];
            t[1] += ds[c] * x[edge[c]][1];
        }
        for a in 0..n {
            f[2 * a] += pressure * w * sh[a] * -t[1];
            f[2 * a + 1] += pressure * w * sh[a] * t[0];
            for b in 0..n {
                let c = pressure * w * sh[a] * ds[b];
                // d(-t_y)/dy_b and d(t_x)/dx_b
                k[(2 * a, 2 * b + 1)] -= c;
                k[(2 * a + 1, 2 * b)] += c;
            }
        }
    }
    (f, k)
}

/// Assembles residual, energy and (optionally) tangent at displacement `u`.
///
/// `pressures` lists boundary-set names with the pressure acting on them;
/// the pressure pushes into the solid.
pub fn assemble(
    mesh: &Mesh2D,
    materials: &[Material],
    dofs: &DofMap,
    u: &[[f64; 2]],
    pressures: &[(&str, f64)],
    with_tangent: bool,
) -> Result<Assembly> {
    let nodes = mesh.nodes();
    if u.len() != nodes.len() {
        return Err(StructuralError::InvalidMesh(format!(
            "{} displacements for {} nodes",
            u.len(),
            nodes.len()
        )));
    }
    let locals: Vec<Local> = mesh
        .elements()
        .par_iter()
        .enumerate()
        .map(|(id, el)| {
            let material = materials.get(el.material).ok_or_else(|| {
                StructuralError::InvalidMesh(format!("element {id} uses unknown material {}", el.material))
            })?;
            let (force, stiffness, energy) = element_local(id, el, nodes, u, material, with_tangent)?;
            let dofs = el
                .nodes
                .iter()
                .flat_map(|&n| [dofs.equation(n, 0), dofs.equation(n, 1)])
                .collect();
            Ok(Local {
                dofs,
                force,
                stiffness,
                energy,
            })
        })
        .collect::<Result<_>>()?;

    let n = dofs.n_equations();
    let mut internal = vec![0.0; n];
    let mut external = vec![0.0; n];
    let mut tangent = with_tangent.then(|| BandedMatrix::zeros(n, dofs.half_bandwidth()));
    let mut energy = 0.0;
    // serial scatter keeps the summation order, and so the result, deterministic
    for local in &locals {
        energy += local.energy;
        for (p, dp) in local.dofs.iter().enumerate() {
            let Some(r) = dp else { continue };
            internal[*r] += local.force[p];
            if let (Some(t), Some(k)) = (tangent.as_mut(), local.stiffness.as_ref()) {
                for (q, dq) in local.dofs.iter().enumerate() {
                    if let Some(c) = dq {
                        t.add(*r, *c, k[(p, q)]);
                    }
                }
            }
        }
    }

    let current: Vec<[f64; 2]> = nodes.iter().zip(u).map(|(x, d)| [x[0] + d[0], x[1] + d[1]]).collect();
    for &(name, pressure) in pressures {
        if pressure == 0.0 {
            continue;
        }
        let edges = mesh
            .boundary_set(name)
            .ok_or_else(|| StructuralError::InvalidMesh(format!("no boundary set named {name:?}")))?;
        for edge in edges {
            let (f, k) = pressure_edge(edge, &current, pressure);
            let eqs: Vec<Option<usize>> = edge
                .iter()
                .flat_map(|&n| [dofs.equation(n, 0), dofs.equation(n, 1)])
                .collect();
            for (p, dp) in eqs.iter().enumerate() {
                let Some(r) = dp else { continue };
                external[*r] += f[p];
                if let Some(t) = tangent.as_mut() {
                    for (q, dq) in eqs.iter().enumerate() {
                        if let Some(c) = dq {
                            t.add(*r, *c, -k[(p, q)]);
                        }
                    }
                }
            }
        }
    }
    let residual = internal.iter().zip(&external).map(|(a, b)| a - b).collect();
    Ok(Assembly {
        residual,
        internal,
        external,
        energy,
        tangent,
    })
}
