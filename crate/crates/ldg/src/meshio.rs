//! Plain-text mesh files:
//!
//! ```text
//! dim 2
//! <vertex count>
//! <x> <y>            (one line per vertex)
//! <cell count>
//! <i> <j> <k>        (0-based vertex indices, one line per cell)
//! ```
//!
//! Text after `#` is a comment; blank lines are ignored.

use std::fmt::Write as _;
use std::path::Path;

use ldg_core::Mesh;

use crate::error::LdgError;

fn bad(line: usize, message: impl Into<String>) -> LdgError {
    LdgError::MeshFormat {
        line,
        message: message.into(),
    }
}

pub fn parse_mesh(text: &str) -> Result<Mesh, LdgError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or_default().trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| lines.next().ok_or_else(|| bad(0, format!("unexpected end of file, expected {what}")));

    let (n, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["dim", "2"] {
        return Err(bad(n, format!("expected `dim 2`, found `{header}`")));
    }
    let count = |(n, l): (usize, &str)| l.parse::<usize>().map_err(|_| bad(n, format!("expected a count, found `{l}`")));

    let nv = count(next("vertex count")?)?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = next("vertex")?;
        let v: Vec<f64> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(n, format!("invalid vertex `{l}`")))?;
        match v[..] {
            [x, y] if x.is_finite() && y.is_finite() => vertices.push([x, y]),
            _ => return Err(bad(n, format!("expected two finite coordinates, found `{l}`"))),
        }
    }

    let nc = count(next("cell count")?)?;
    let mut cells = Vec::with_capacity(nc);
    for _ in 0..nc {
        let (n, l) = next("cell")?;
        let c: Vec<usize> = l
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad(n, format!("invalid cell `{l}`")))?;
        match c[..] {
            [a, b, d] => cells.push([a, b, d]),
            _ => return Err(bad(n, format!("expected three vertex indices, found `{l}`"))),
        }
    }
    if let Some((n, l)) = lines.next() {
        return Err(bad(n, format!("trailing content `{l}`")));
    }
    Ok(Mesh::new(vertices, cells)?)
}

pub fn read_mesh(path: &Path) -> Result<Mesh, LdgError> {
    let text = std::fs::read_to_string(path).map_err(|e| LdgError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_mesh(&text)
}

pub fn format_mesh(mesh: &Mesh) -> String {
    let mut s = String::from("dim 2\n");
    let _ = writeln!(s, "{}", mesh.vertices().len());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{:?} {:?}", v[0], v[1]);
    }
    let _ = writeln!(s, "{}", mesh.num_cells());
    for c in mesh.cells() {
        let _ = writeln!(s, "{} {} {}", c[0], c[1], c[2]);
    }
    s
}
