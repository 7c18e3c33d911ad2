//! Randomized element blocks shared by the structural tests.
#![allow(dead_code)]

use morphglide::structural::mesh::{CHAMBER_UPPER, LEADING_EDGE_FIXED};
use morphglide::structural::{assemble, DofMap, ElementKind, HyperelasticMaterial, LinearElasticMaterial, Material, Mesh2D, MeshElement};
use proptest::prelude::*;
use std::collections::BTreeMap;

pub const SIDE: f64 = 0.02;

/// 5 x 5 squares split into 50 triangles, nodes jittered by `jitter` of the
/// lattice spacing. Every fifth element is linear elastic. The top edge is
/// a pressure set and, when `clamped`, the left edge is fixed.
pub fn jittered_block(kind: ElementKind, jitter: &[f64], clamped: bool) -> Option<Mesh2D> {
    let quadratic = kind == ElementKind::Tri6;
    let m = if quadratic { 11 } else { 6 };
    let h = SIDE / (m - 1) as f64;
    let id = |i: usize, j: usize| j * m + i;
    let mut nodes = Vec::with_capacity(m * m);
    for j in 0..m {
        for i in 0..m {
            let k = 2 * id(i, j);
            let edge_x = i == 0 || i == m - 1;
            let edge_y = j == 0 || j == m - 1;
            let dx = if edge_x { 0.0 } else { jitter[k % jitter.len()] * h };
            let dy = if edge_y { 0.0 } else { jitter[(k + 1) % jitter.len()] * h };
            nodes.push([i as f64 * h + dx, j as f64 * h + dy]);
        }
    }
    let s = if quadratic { 2 } else { 1 };
    let mut elements = Vec::new();
    let mut top = Vec::new();
    let mut left = Vec::new();
    for cj in 0..5 {
        for ci in 0..5 {
            let (i, j) = (ci * s, cj * s);
            let (a, b, c, d) = (id(i, j), id(i + s, j), id(i + s, j + s), id(i, j + s));
            let tris = if quadratic {
                [
                    vec![a, b, c, id(i + 1, j), id(i + 2, j + 1), id(i + 1, j + 1)],
                    vec![a, c, d, id(i + 1, j + 1), id(i + 1, j + 2), id(i, j + 1)],
                ]
            } else {
                [vec![a, b, c], vec![a, c, d]]
            };
            for t in tris {
                let material = usize::from(elements.len() % 5 == 4);
                elements.push(MeshElement { kind, nodes: t, material });
            }
            if cj == 4 {
                let mut e = vec![c, d];
                if quadratic {
                    e.push(id(i + 1, j + 2));
                }
                top.push(e);
            }
            if ci == 0 {
                let mut e = vec![d, a];
                if quadratic {
                    e.push(id(i, j + 1));
                }
                left.push(e);
            }
        }
    }
    let mut sets = BTreeMap::new();
    sets.insert(CHAMBER_UPPER.to_string(), top);
    if clamped {
        sets.insert(LEADING_EDGE_FIXED.to_string(), left);
    }
    Mesh2D::new(nodes, elements, sets, vec![]).ok()
}

pub fn materials() -> [Material; 2] {
    [
        Material::MooneyRivlin(HyperelasticMaterial::ecoflex_00_50()),
        Material::LinearElastic(LinearElasticMaterial::new(2.0e5, 0.3).unwrap()),
    ]
}

pub fn displacement(mesh: &Mesh2D, coeffs: &[f64]) -> Vec<[f64; 2]> {
    // smooth field so no element inverts, plus a per-node ripple
    mesh.nodes()
        .iter()
        .enumerate()
        .map(|(n, x)| {
            let (u, v) = (x[0] / SIDE, x[1] / SIDE);
            let r = coeffs[n % coeffs.len()];
            [
                SIDE * (coeffs[0] * u * v + coeffs[1] * v * v + 0.01 * r),
                SIDE * (coeffs[2] * u * u + coeffs[3] * u * v - 0.01 * r),
            ]
        })
        .collect()
}

pub fn arb_case() -> impl Strategy<Value = (bool, Vec<f64>, Vec<f64>)> {
    (
        any::<bool>(),
        prop::collection::vec(-0.2f64..0.2, 16),
        prop::collection::vec(-0.15f64..0.15, 9),
    )
}

/// Largest deviation of the assembled internal forces from a central
/// difference of the total energy, relative to the largest force. `None`
/// when the case builds an invalid mesh or inverts an element.
pub fn gradient_error(quadratic: bool, jitter: &[f64], coeffs: &[f64]) -> Option<f64> {
    let kind = if quadratic { ElementKind::Tri6 } else { ElementKind::Tri3 };
    let mesh = jittered_block(kind, jitter, false)?;
    let mats = materials();
    let dofs = DofMap::new(&mesh);
    let u = displacement(&mesh, coeffs);
    let asm = assemble(&mesh, &mats, &dofs, &u, &[], false).ok()?;
    let scale = asm.internal.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let free = dofs.restrict(&u);
    let h = 1e-8 * SIDE;
    let mut worst = 0.0f64;
    for k in 0..free.len() {
        let mut p = free.clone();
        let mut q = free.clone();
        p[k] += h;
        q[k] -= h;
        let ep = assemble(&mesh, &mats, &dofs, &dofs.expand(&p), &[], false).ok()?.energy;
        let em = assemble(&mesh, &mats, &dofs, &dofs.expand(&q), &[], false).ok()?.energy;
        worst = worst.max(((ep - em) / (2.0 * h) - asm.internal[k]).abs() / scale);
    }
    Some(worst)
}
