//! Structured mesher for the two-chamber soft wing section.
//!
//! The section is swept chordwise in columns. Each column is split through
//! the thickness into, from the chord line outward on either side: half of the
//! PLA strain-limiting layer, the chamber band, and the outer silicone wall.
//! Inside `[chamber_start, chamber_end]` the chamber band is left empty except
//! for thin silicone ribs that split each chamber into short cells; all cells
//! of a chamber share its pressure. The walls of the empty cells form the
//! `chamber_upper` / `chamber_lower` boundary sets.
//! Ahead of `nose_fraction` everything is aluminium and held fixed. The nose
//! and tail columns collapse onto the leading- and trailing-edge points.
//!
//! Quads are split along mirrored diagonals above and below the chord line, so
//! the mesh is exactly symmetric about `y = 0`.

use super::element::ElementKind;
use super::mesh::{material_id, Edge, Mesh2D, MeshElement};
use super::mesh::{CHAMBER_LOWER, CHAMBER_UPPER, LEADING_EDGE_FIXED, OUTER_SURFACE};
use super::{Result, StructuralError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Geometry of the wing cross-section and its discretization.
///
/// Chamber and nose dimensions are not published for the reference wing;
/// the defaults are modelling choices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WingSectionParams {
    pub naca_code: String,
    pub chord_m: f64,
    /// Aft end of the aluminium nose, fraction of chord.
    pub nose_fraction: f64,
    pub chamber_start_fraction: f64,
    pub chamber_end_fraction: f64,
    /// Aft end of the PLA layer, fraction of chord.
    pub pla_end_fraction: f64,
    pub pla_thickness_m: f64,
    /// Nominal chamber height above (below) the PLA layer.
    pub chamber_height_m: f64,
    /// Cap on the chamber height as a fraction of the local silicone depth.
    pub chamber_height_fraction: f64,
    pub element: ElementKind,
    pub cells_nose: usize,
    pub cells_front: usize,
    /// Cells per chamber, separated by one-column ribs.
    pub chamber_cells: usize,
    /// Element columns per chamber cell.
    pub cell_columns: usize,
    pub cells_aft: usize,
    pub cells_tail: usize,
    pub chamber_layers: usize,
    pub wall_layers: usize,
}

impl Default for WingSectionParams {
    fn default() -> Self {
        Self {
            naca_code: "0016".into(),
            chord_m: 0.230,
            nose_fraction: 0.15,
            chamber_start_fraction: 0.20,
            chamber_end_fraction: 0.80,
            pla_end_fraction: 0.90,
            pla_thickness_m: 0.002,
            chamber_height_m: 0.014,
            chamber_height_fraction: 0.8,
            element: ElementKind::Tri6,
            cells_nose: 6,
            cells_front: 2,
            chamber_cells: 10,
            cell_columns: 2,
            cells_aft: 4,
            cells_tail: 6,
            chamber_layers: 2,
            wall_layers: 3,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Cell {
    Void { upper: bool },
    Solid(usize),
}

impl WingSectionParams {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(StructuralError::InvalidMesh(format!("wing section: {m}")));
        let f = [
            0.0,
            self.nose_fraction,
            self.chamber_start_fraction,
            self.chamber_end_fraction,
            self.pla_end_fraction,
            1.0,
        ];
        if f.windows(2).any(|w| !(w[1] > w[0])) {
            return bad("need 0 < nose < chamber start < chamber end < PLA end < 1");
        }
        if !(self.chord_m > 0.0 && self.pla_thickness_m > 0.0 && self.chamber_height_m > 0.0) {
            return bad("lengths must be positive");
        }
        if !(self.chamber_height_fraction > 0.0 && self.chamber_height_fraction < 0.95) {
            return bad("chamber_height_fraction must lie in (0, 0.95)");
        }
        let counts = [
            self.cells_nose,
            self.cells_front,
            self.chamber_cells,
            self.cell_columns,
            self.cells_aft,
            self.cells_tail,
            self.chamber_layers,
            self.wall_layers,
        ];
        if counts.contains(&0) {
            return bad("cell counts must be at least one");
        }
        let code: Vec<u32> = self.naca_code.chars().filter_map(|c| c.to_digit(10)).collect();
        if self.naca_code.len() != 4 || code.len() != 4 || code[0] != 0 || code[1] != 0 {
            return bad("the chamber layout needs a symmetric 00XX section");
        }
        Ok(())
    }

    fn thickness_ratio(&self) -> f64 {
        self.naca_code[2..].parse::<f64>().unwrap_or(0.0) / 100.0
    }

    fn half_thickness(&self, xi: f64) -> f64 {
        let t = self.thickness_ratio();
        let y = 5.0
            * t
            * (0.2969 * xi.sqrt() - 0.1260 * xi - 0.3516 * xi * xi + 0.2843 * xi.powi(3) - 0.1036 * xi.powi(4));
        (y * self.chord_m).max(0.0)
    }

    /// Coarse chordwise stations as chord fractions.
    fn stations(&self) -> Vec<f64> {
        let mut xs = vec![0.0];
        let seg = |xs: &mut Vec<f64>, a: f64, b: f64, n: usize, shape: fn(f64) -> f64| {
            for k in 1..=n {
                xs.push(if k == n { b } else { a + (b - a) * shape(k as f64 / n as f64) });
            }
        };
        seg(&mut xs, 0.0, self.nose_fraction, self.cells_nose, |t| 1.0 - (std::f64::consts::FRAC_PI_2 * t).cos());
        seg(&mut xs, self.nose_fraction, self.chamber_start_fraction, self.cells_front, |t| t);
        seg(&mut xs, self.chamber_start_fraction, self.chamber_end_fraction, self.chamber_columns(), |t| t);
        seg(&mut xs, self.chamber_end_fraction, self.pla_end_fraction, self.cells_aft, |t| t);
        seg(&mut xs, self.pla_end_fraction, 1.0, self.cells_tail, |t| (std::f64::consts::FRAC_PI_2 * t).sin());
        xs
    }

    fn chamber_columns(&self) -> usize {
        self.chamber_cells * (self.cell_columns + 1) - 1
    }

    fn half_layers(&self) -> usize {
        1 + self.chamber_layers + self.wall_layers
    }

    /// Coarse row heights at a station, bottom to top.
    fn rows(&self, xi: f64) -> Vec<f64> {
        let yt = self.half_thickness(xi);
        let hp = (0.5 * self.pla_thickness_m).min(0.25 * yt);
        let hc = self.chamber_height_m.min(self.chamber_height_fraction * (yt - hp));
        let mut upper = vec![0.0, hp];
        for k in 1..=self.chamber_layers {
            upper.push(hp + hc * k as f64 / self.chamber_layers as f64);
        }
        for k in 1..=self.wall_layers {
            upper.push(hp + hc + (yt - hp - hc) * k as f64 / self.wall_layers as f64);
        }
        let mut rows: Vec<f64> = upper[1..].iter().rev().map(|y| -y).collect();
        rows.extend(upper);
        rows
    }

    fn classify(&self, column: usize, xi_mid: f64, row: usize) -> Cell {
        let h = self.half_layers();
        // distance from the chord line in layers: 0 is the PLA layer
        let (upper, layer) = if row >= h { (true, row - h) } else { (false, h - 1 - row) };
        if xi_mid < self.nose_fraction {
            return Cell::Solid(material_id::ALUMINIUM);
        }
        if layer == 0 && xi_mid < self.pla_end_fraction {
            return Cell::Solid(material_id::PLA);
        }
        let in_band = layer >= 1 && layer <= self.chamber_layers;
        if in_band && xi_mid > self.chamber_start_fraction && xi_mid < self.chamber_end_fraction {
            let k = column - self.cells_nose - self.cells_front;
            if k % (self.cell_columns + 1) != self.cell_columns {
                return Cell::Void { upper };
            }
        }
        Cell::Solid(material_id::SILICONE)
    }
}

/// Builds the wing cross-section mesh.
pub fn build_wing_mesh(params: &WingSectionParams) -> Result<Mesh2D> {
    params.validate()?;
    let quadratic = params.element == ElementKind::Tri6;
    // grid step between element corners in the node lattice
    let step = if quadratic { 2 } else { 1 };
    let coarse = params.stations();
    let nx = coarse.len() - 1;
    let ny = 2 * params.half_layers();

    let mut columns: Vec<f64> = Vec::new();
    for w in coarse.windows(2) {
        columns.push(w[0]);
        if quadratic {
            columns.push(0.5 * (w[0] + w[1]));
        }
    }
    columns.push(1.0);
    let last_col = columns.len() - 1;

    let lattice_y = |xi: f64| -> Vec<f64> {
        let rows = params.rows(xi);
        if !quadratic {
            return rows;
        }
        let mut out = Vec::with_capacity(2 * rows.len() - 1);
        for w in rows.windows(2) {
            out.push(w[0]);
            out.push(0.5 * (w[0] + w[1]));
        }
        out.push(rows[rows.len() - 1]);
        out
    };
    let heights: Vec<Vec<f64>> = columns.iter().map(|&xi| lattice_y(xi)).collect();

    // lattice key, with the nose and tail columns collapsed to one point
    let key = |i: usize, j: usize| -> (usize, usize) {
        if i == 0 || i == last_col {
            (i, 0)
        } else {
            (i, j)
        }
    };

    let cells: Vec<Vec<Cell>> = (0..nx)
        .map(|i| {
            let mid = 0.5 * (coarse[i] + coarse[i + 1]);
            (0..ny).map(|j| params.classify(i, mid, j)).collect()
        })
        .collect();

    let mut raw_elements: Vec<(Vec<(usize, usize)>, usize)> = Vec::new();
    let mut raw_sets: BTreeMap<&str, Vec<Vec<(usize, usize)>>> = BTreeMap::new();
    let upper_half = |j: usize| j >= ny / 2;

    for i in 0..nx {
        for j in 0..ny {
            let Cell::Solid(material) = cells[i][j] else { continue };
            let (x0, y0) = (step * i, step * j);
            let (x2, y2) = (x0 + step, y0 + step);
            let c0 = key(x0, y0);
            let c1 = key(x2, y0);
            let c2 = key(x2, y2);
            let c3 = key(x0, y2);
            let (xm, ym) = (x0 + 1, y0 + 1);
            let bottom = key(xm, y0);
            let right = key(x2, ym);
            let top = key(xm, y2);
            let left = key(x0, ym);
            let center = key(xm, ym);

            let mut tris: Vec<Vec<(usize, usize)>> = Vec::new();
            if i == 0 {
                tris.push(vec![c0, c1, c2, bottom, right, top]);
            } else if i == nx - 1 {
                tris.push(vec![c0, c1, c3, bottom, top, left]);
            } else if upper_half(j) {
                tris.push(vec![c0, c1, c2, bottom, right, center]);
                tris.push(vec![c0, c2, c3, center, top, left]);
            } else {
                tris.push(vec![c0, c1, c3, bottom, center, left]);
                tris.push(vec![c1, c2, c3, right, top, center]);
            }
            for mut t in tris {
                if !quadratic {
                    t.truncate(3);
                }
                raw_elements.push((t, material));
            }

            // cell sides in counter-clockwise order; collapsed sides are skipped
            let mut sides: Vec<(Vec<(usize, usize)>, Option<(usize, usize)>)> = vec![
                (vec![c0, c1, bottom], if j == 0 { None } else { Some((i, j - 1)) }),
                (vec![c2, c3, top], if j == ny - 1 { None } else { Some((i, j + 1)) }),
            ];
            if i + 1 < nx {
                sides.push((vec![c1, c2, right], Some((i + 1, j))));
            }
            if i > 0 {
                sides.push((vec![c3, c0, left], Some((i - 1, j))));
            }
            for (mut edge, neighbour) in sides {
                if !quadratic {
                    edge.truncate(2);
                }
                if material == material_id::ALUMINIUM {
                    raw_sets.entry(LEADING_EDGE_FIXED).or_default().push(edge.clone());
                }
                match neighbour {
                    None => raw_sets.entry(OUTER_SURFACE).or_default().push(edge),
                    Some((ni, nj)) => {
                        if let Cell::Void { upper } = cells[ni][nj] {
                            let name = if upper { CHAMBER_UPPER } else { CHAMBER_LOWER };
                            raw_sets.entry(name).or_default().push(edge);
                        }
                    }
                }
            }
        }
    }
    // the aluminium diagonals are not cell sides; fix the whole nose explicitly
    for (nodes, material) in &raw_elements {
        if *material == material_id::ALUMINIUM {
            let edge: Vec<(usize, usize)> = if quadratic {
                vec![nodes[2], nodes[0], nodes[5]]
            } else {
                vec![nodes[2], nodes[0]]
            };
            raw_sets.entry(LEADING_EDGE_FIXED).or_default().push(edge);
            let edge: Vec<(usize, usize)> = if quadratic {
                vec![nodes[1], nodes[2], nodes[4]]
            } else {
                vec![nodes[1], nodes[2]]
            };
            raw_sets.entry(LEADING_EDGE_FIXED).or_default().push(edge);
        }
    }

    // number the used lattice points column by column
    let mut used: Vec<(usize, usize)> = raw_elements.iter().flat_map(|(n, _)| n.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let index: HashMap<(usize, usize), usize> = used.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let nodes: Vec<[f64; 2]> = used
        .iter()
        .map(|&(i, j)| [columns[i] * params.chord_m, heights[i][j]])
        .collect();

    let elements = raw_elements
        .into_iter()
        .map(|(n, material)| MeshElement {
            kind: params.element,
            nodes: n.iter().map(|p| index[p]).collect(),
            material,
        })
        .collect();
    let mut sets: BTreeMap<String, Vec<Edge>> = BTreeMap::new();
    for (name, edges) in raw_sets {
        let mut out: Vec<Edge> = edges
            .into_iter()
            .map(|e| e.iter().map(|p| index[p]).collect())
            .collect();
        if name == LEADING_EDGE_FIXED {
            out.sort();
            out.dedup();
        }
        sets.insert(name.to_string(), out);
    }
    Mesh2D::new(nodes, elements, sets, vec![])
}
