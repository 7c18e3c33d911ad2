//! Plain-text mesh format, see `docs/meshformat.md`.

use super::element::ElementKind;
use super::mesh::{Mesh2D, MeshElement};
use super::{Result, StructuralError};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

pub const FORMAT_HEADER: &str = "morphglide-mesh";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_mesh<W: Write>(mut out: W, mesh: &Mesh2D) -> Result<()> {
    writeln!(out, "{FORMAT_HEADER} {FORMAT_VERSION}")?;
    writeln!(out, "nodes {}", mesh.nodes().len())?;
    for p in mesh.nodes() {
        writeln!(out, "{:e} {:e}", p[0], p[1])?;
    }
    writeln!(out, "elements {}", mesh.elements().len())?;
    for el in mesh.elements() {
        let kind = match el.kind {
            ElementKind::Tri3 => "tri3",
            ElementKind::Tri6 => "tri6",
        };
        let nodes: Vec<String> = el.nodes.iter().map(|n| n.to_string()).collect();
        writeln!(out, "{kind} {} {}", el.material, nodes.join(" "))?;
    }
    writeln!(out, "bonded {}", mesh.bonded_pairs().len())?;
    for (a, b) in mesh.bonded_pairs() {
        writeln!(out, "{a} {b}")?;
    }
    writeln!(out, "sets {}", mesh.boundary_sets().len())?;
    for (name, edges) in mesh.boundary_sets() {
        writeln!(out, "set {name} {}", edges.len())?;
        for e in edges {
            let nodes: Vec<String> = e.iter().map(|n| n.to_string()).collect();
            writeln!(out, "{}", nodes.join(" "))?;
        }
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn err(&self, msg: impl Into<String>) -> StructuralError {
        StructuralError::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    /// Next non-blank, non-comment line split into fields.
    fn next_fields(&mut self) -> Result<Vec<String>> {
        loop {
            self.line += 1;
            let Some(line) = self.inner.next() else {
                return Err(self.err("unexpected end of file"));
            };
            let line = line?;
            let body = line.split('#').next().unwrap_or("").trim();
            if !body.is_empty() {
                return Ok(body.split_whitespace().map(str::to_string).collect());
            }
        }
    }

    fn num<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(format!("cannot parse {s:?}")))
    }

    fn section(&mut self, keyword: &str) -> Result<usize> {
        let f = self.next_fields()?;
        if f.len() != 2 || f[0] != keyword {
            return Err(self.err(format!("expected `{keyword} <count>`")));
        }
        self.num(&f[1])
    }
}

pub fn read_mesh<R: BufRead>(input: R) -> Result<Mesh2D> {
    let mut lines = Lines {
        inner: input.lines(),
        line: 0,
    };
    let head = lines.next_fields()?;
    if head.len() != 2 || head[0] != FORMAT_HEADER {
        return Err(lines.err(format!("expected `{FORMAT_HEADER} <version>`")));
    }
    let version: u32 = lines.num(&head[1])?;
    if version != FORMAT_VERSION {
        return Err(lines.err(format!("unsupported version {version}")));
    }

    let n = lines.section("nodes")?;
    let mut nodes = Vec::with_capacity(n);
    for _ in 0..n {
        let f = lines.next_fields()?;
        if f.len() != 2 {
            return Err(lines.err("node needs `x y`"));
        }
        nodes.push([lines.num(&f[0])?, lines.num(&f[1])?]);
    }

    let m = lines.section("elements")?;
    let mut elements = Vec::with_capacity(m);
    for _ in 0..m {
        let f = lines.next_fields()?;
        let kind = match f.first().map(String::as_str) {
            Some("tri3") => ElementKind::Tri3,
            Some("tri6") => ElementKind::Tri6,
            _ => return Err(lines.err("element kind must be tri3 or tri6")),
        };
        if f.len() != 2 + kind.n_nodes() {
            return Err(lines.err(format!("{kind:?} needs a material id and {} nodes", kind.n_nodes())));
        }
        let material = lines.num(&f[1])?;
        let nodes = f[2..].iter().map(|s| lines.num(s)).collect::<Result<_>>()?;
        elements.push(MeshElement { kind, nodes, material });
    }

    let k = lines.section("bonded")?;
    let mut bonded = Vec::with_capacity(k);
    for _ in 0..k {
        let f = lines.next_fields()?;
        if f.len() != 2 {
            return Err(lines.err("bonded pair needs two node ids"));
        }
        bonded.push((lines.num(&f[0])?, lines.num(&f[1])?));
    }

    let s = lines.section("sets")?;
    let mut sets = BTreeMap::new();
    for _ in 0..s {
        let f = lines.next_fields()?;
        if f.len() != 3 || f[0] != "set" {
            return Err(lines.err("expected `set <name> <count>`"));
        }
        let count: usize = lines.num(&f[2])?;
        let mut edges = Vec::with_capacity(count);
        for _ in 0..count {
            let e = lines.next_fields()?;
            if !(2..=3).contains(&e.len()) {
                return Err(lines.err("edge needs 2 or 3 node ids"));
            }
            edges.push(e.iter().map(|s| lines.num(s)).collect::<Result<Vec<usize>>>()?);
        }
        sets.insert(f[1].clone(), edges);
    }
    Mesh2D::new(nodes, elements, sets, bonded)
}

#[cfg(test)]
mod tests {
    use super::super::mesher::{build_wing_mesh, WingSectionParams};
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let params = WingSectionParams {
            chamber_cells: 3,
            ..Default::default()
        };
        let mesh = build_wing_mesh(&params).unwrap();
        let mut buf = Vec::new();
        write_mesh(&mut buf, &mesh).unwrap();
        let back = read_mesh(buf.as_slice()).unwrap();
        assert_eq!(back, mesh);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "morphglide-mesh 1\n# comment\nnodes 1\n0.0 zero\n";
        match read_mesh(text.as_bytes()) {
            Err(StructuralError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(read_mesh("morphglide-mesh 2\n".as_bytes()).is_err());
    }
}
