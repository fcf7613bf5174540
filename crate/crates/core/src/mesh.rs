//! Triangular meshes of polygonal domains, possibly with hanging nodes.
//!
//! Mesh faces are the maximal segments of the skeleton that are shared by
//! exactly two cells or lie on the boundary. Where a vertex of one cell sits
//! inside an edge of its neighbour (a hanging node), a mesh face is a proper
//! part of that neighbour's element edge. A face is *regular* with respect
//! to a cell when it coincides with one of the cell's three edges.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Relative tolerance for collinearity and coincidence tests, scaled by the
/// local cell diameter.
pub const GEOMETRIC_TOLERANCE: f64 = 1e-12;

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn dist(a: Point, b: Point) -> f64 {
    let d = sub(a, b);
    libm::sqrt(dot(d, d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    vertices: Vec<Point>,
    cells: Vec<[usize; 3]>,
    diameters: Vec<f64>,
    h: f64,
}

impl Mesh {
    /// Validates the cells, reorders clockwise cells to counterclockwise and
    /// computes cell diameters.
    pub fn new(vertices: Vec<Point>, cells: Vec<[usize; 3]>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let mut cells = cells;
        let mut seen: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for (c, cell) in cells.iter_mut().enumerate() {
            for &i in cell.iter() {
                if i >= vertices.len() {
                    return Err(Error::VertexOutOfRange {
                        cell: c,
                        index: i,
                        vertex_count: vertices.len(),
                    });
                }
            }
            let [a, b, d] = cell.map(|i| vertices[i]);
            let twice_area = cross(sub(b, a), sub(d, a));
            let scale = dist(a, b).max(dist(b, d)).max(dist(d, a));
            if !(twice_area.abs() > GEOMETRIC_TOLERANCE * scale * scale) {
                return Err(Error::DegenerateCell(c));
            }
            if twice_area < 0.0 {
                cell.swap(1, 2);
            }
            let mut key = *cell;
            key.sort_unstable();
            if let Some(&prev) = seen.get(&key) {
                return Err(Error::DuplicateCell(c, prev));
            }
            seen.insert(key, c);
        }
        let diameters: Vec<f64> = cells
            .iter()
            .map(|cell| {
                let [a, b, d] = cell.map(|i| vertices[i]);
                dist(a, b).max(dist(b, d)).max(dist(d, a))
            })
            .collect();
        let h = diameters.iter().cloned().fold(0.0, f64::max);
        Ok(Self {
            vertices,
            cells,
            diameters,
            h,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[[usize; 3]] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_points(&self, cell: usize) -> [Point; 3] {
        self.cells[cell].map(|i| self.vertices[i])
    }

    /// `h_K`, the diameter of a cell.
    pub fn diameter(&self, cell: usize) -> f64 {
        self.diameters[cell]
    }

    /// `h = max_K h_K`.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn area(&self, cell: usize) -> f64 {
        let [a, b, c] = self.cell_points(cell);
        0.5 * cross(sub(b, a), sub(c, a))
    }

    /// Diameter over inradius.
    pub fn shape_ratio(&self, cell: usize) -> f64 {
        let [a, b, c] = self.cell_points(cell);
        let perimeter = dist(a, b) + dist(b, c) + dist(c, a);
        let inradius = 2.0 * self.area(cell) / perimeter;
        self.diameters[cell] / inradius
    }

    /// Local edge `e` of a cell runs from local vertex `e` to `e + 1 (mod 3)`.
    pub fn edge_vertices(&self, cell: usize, edge: usize) -> [usize; 2] {
        let c = self.cells[cell];
        [c[edge], c[(edge + 1) % 3]]
    }

    /// Outward unit normal of a local edge.
    pub fn edge_normal(&self, cell: usize, edge: usize) -> Point {
        let [p, q] = self.edge_vertices(cell, edge).map(|i| self.vertices[i]);
        let t = sub(q, p);
        let l = libm::sqrt(dot(t, t));
        [t[1] / l, -t[0] / l]
    }

    /// Every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|p| [p[0] * factor, p[1] * factor])
            .collect();
        Self::new(vertices, self.cells.clone())
    }

    /// Red refinement: every triangle is split into four through its edge
    /// midpoints. Midpoints that coincide with existing vertices (hanging
    /// nodes) are merged.
    pub fn refine_uniform(&self) -> Mesh {
        let mut vertices = self.vertices.clone();
        let mut lookup = VertexLookup::new(&vertices, self.h);
        let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |a: usize, b: usize, vertices: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            if let Some(&m) = midpoints.get(&key) {
                return m;
            }
            let p = [
                0.5 * (vertices[a][0] + vertices[b][0]),
                0.5 * (vertices[a][1] + vertices[b][1]),
            ];
            let m = lookup.find_or_insert(p, vertices);
            midpoints.insert(key, m);
            m
        };
        let mut cells = Vec::with_capacity(4 * self.cells.len());
        for &[a, b, c] in &self.cells {
            let ab = midpoint(a, b, &mut vertices);
            let bc = midpoint(b, c, &mut vertices);
            let ca = midpoint(c, a, &mut vertices);
            cells.push([a, ab, ca]);
            cells.push([ab, b, bc]);
            cells.push([ca, bc, c]);
            cells.push([ab, bc, ca]);
        }
        Mesh::new(vertices, cells).expect("refinement of a valid mesh is valid")
    }
}

/// Coordinate-keyed vertex deduplication on a quantised grid.
struct VertexLookup {
    grid: BTreeMap<(i64, i64), usize>,
    quantum: f64,
}

impl VertexLookup {
    fn new(vertices: &[Point], h: f64) -> Self {
        let quantum = 1e-9 * h;
        let mut grid = BTreeMap::new();
        for (i, p) in vertices.iter().enumerate() {
            grid.insert(Self::key(p, quantum), i);
        }
        Self { grid, quantum }
    }

    fn key(p: &Point, q: f64) -> (i64, i64) {
        (libm::round(p[0] / q) as i64, libm::round(p[1] / q) as i64)
    }

    fn find_or_insert(&mut self, p: Point, vertices: &mut Vec<Point>) -> usize {
        let (kx, ky) = Self::key(&p, self.quantum);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&i) = self.grid.get(&(kx + dx, ky + dy)) {
                    if dist(vertices[i], p) <= self.quantum {
                        return i;
                    }
                }
            }
        }
        vertices.push(p);
        let i = vertices.len() - 1;
        self.grid.insert((kx, ky), i);
        i
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceKind {
    Interior,
    Boundary,
}

/// Which of the three situations of the stability argument a face falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FaceCase {
    /// Boundary face.
    Case1,
    /// Interior face, regular with respect to both neighbours.
    Case2,
    /// Interior face, regular with respect to exactly one neighbour.
    Case3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Ext,
    Int,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Face {
    /// Endpoints, ordered counterclockwise with respect to `ext`.
    pub endpoints: [Point; 2],
    pub vertices: [usize; 2],
    /// `h_F`.
    pub length: f64,
    pub kind: FaceKind,
    /// Cell the normal points out of.
    pub ext: usize,
    pub int: Option<usize>,
    /// Unit normal, outward from `ext`.
    pub normal: Point,
    /// Local edge of `ext` (resp. `int`) containing the face.
    pub ext_edge: usize,
    pub int_edge: Option<usize>,
    pub regular_ext: bool,
    pub regular_int: bool,
}

impl Face {
    pub fn is_interior(&self) -> bool {
        self.kind == FaceKind::Interior
    }

    pub fn cell(&self, side: Side) -> Option<usize> {
        match side {
            Side::Ext => Some(self.ext),
            Side::Int => self.int,
        }
    }

    /// Cells touching the face with the sign of `n_F` relative to their
    /// outward normal (`+1` for `ext`, `-1` for `int`).
    pub fn sides(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        core::iter::once((self.ext, 1.0)).chain(self.int.map(|c| (c, -1.0)))
    }

    /// Point at parameter `t ∈ [0, 1]` along the face.
    pub fn point(&self, t: f64) -> Point {
        let [a, b] = self.endpoints;
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    }

    pub fn regular_wrt_any(&self) -> bool {
        self.regular_ext || (self.int.is_some() && self.regular_int)
    }

    pub fn case(&self) -> FaceCase {
        match self.kind {
            FaceKind::Boundary => FaceCase::Case1,
            FaceKind::Interior if self.regular_ext && self.regular_int => FaceCase::Case2,
            FaceKind::Interior => FaceCase::Case3,
        }
    }
}

/// Splits element edges at hanging vertices, groups the resulting pieces by
/// the cells that share them, and merges collinear runs into maximal faces.
///
/// Regularity flags are left `false`; see [`classify_regularity`].
pub fn enumerate_faces(mesh: &Mesh) -> Result<Vec<Face>> {
    let verts = mesh.vertices();
    // Atomic pieces keyed by their sorted vertex pair.
    let mut pieces: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for cell in 0..mesh.num_cells() {
        let tol = GEOMETRIC_TOLERANCE * mesh.diameter(cell);
        for edge in 0..3 {
            let [i, j] = mesh.edge_vertices(cell, edge);
            let (p, q) = (verts[i], verts[j]);
            let t = sub(q, p);
            let len2 = dot(t, t);
            let len = libm::sqrt(len2);
            let (lo, hi) = (
                [p[0].min(q[0]) - tol, p[1].min(q[1]) - tol],
                [p[0].max(q[0]) + tol, p[1].max(q[1]) + tol],
            );
            let mut inner: Vec<(f64, usize)> = Vec::new();
            for (v, &x) in verts.iter().enumerate() {
                if v == i || v == j || x[0] < lo[0] || x[0] > hi[0] || x[1] < lo[1] || x[1] > hi[1]
                {
                    continue;
                }
                let r = sub(x, p);
                let off = cross(t, r).abs() / len;
                let s = dot(r, t) / len2;
                if off <= tol && s * len > tol && (1.0 - s) * len > tol {
                    inner.push((s, v));
                }
            }
            inner.sort_by(|a, b| a.0.total_cmp(&b.0));
            let chain: Vec<usize> = core::iter::once(i)
                .chain(inner.iter().map(|&(_, v)| v))
                .chain(core::iter::once(j))
                .collect();
            for w in chain.windows(2) {
                let key = (w[0].min(w[1]), w[0].max(w[1]));
                pieces.entry(key).or_default().push((cell, edge));
            }
        }
    }

    // Group pieces sharing the same owners; each group lies on one element
    // edge per owner, so its pieces are collinear.
    let mut groups: BTreeMap<Vec<(usize, usize)>, Vec<(usize, usize)>> = BTreeMap::new();
    for (key, mut owners) in pieces {
        owners.sort_unstable();
        match owners.len() {
            1 => {}
            2 if owners[0].0 != owners[1].0 => {}
            _ => {
                return Err(Error::NonConforming(format!(
                    "segment between vertices {} and {} is claimed by cell edges {:?}",
                    key.0, key.1, owners
                )))
            }
        }
        groups.entry(owners).or_default().push(key);
    }

    let mut faces = Vec::new();
    for (owners, segs) in groups {
        let (ext, ext_edge) = owners[0];
        let [a, b] = mesh.edge_vertices(ext, ext_edge);
        let (pa, pb) = (verts[a], verts[b]);
        let t = sub(pb, pa);
        let len2 = dot(t, t);
        let param = |v: usize| dot(sub(verts[v], pa), t) / len2;
        // Orient each piece along the ext edge and sort.
        let mut oriented: Vec<(f64, usize, usize)> = segs
            .iter()
            .map(|&(u, v)| {
                if param(u) <= param(v) {
                    (param(u), u, v)
                } else {
                    (param(v), v, u)
                }
            })
            .collect();
        oriented.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for (_, u, v) in oriented {
            match runs.last_mut() {
                Some(last) if last.1 == u => last.1 = v,
                _ => runs.push((u, v)),
            }
        }
        for (u, v) in runs {
            let endpoints = [verts[u], verts[v]];
            let length = dist(endpoints[0], endpoints[1]);
            let (int, int_edge, kind) = match owners.get(1) {
                Some(&(c, e)) => (Some(c), Some(e), FaceKind::Interior),
                None => (None, None, FaceKind::Boundary),
            };
            faces.push(Face {
                endpoints,
                vertices: [u, v],
                length,
                kind,
                ext,
                int,
                normal: mesh.edge_normal(ext, ext_edge),
                ext_edge,
                int_edge,
                regular_ext: false,
                regular_int: false,
            });
        }
    }
    // Deterministic order: by ext cell, then edge, then position.
    faces.sort_by(|x, y| {
        (x.ext, x.ext_edge)
            .cmp(&(y.ext, y.ext_edge))
            .then(x.vertices.cmp(&y.vertices))
    });
    Ok(faces)
}

/// Marks each face regular with respect to the neighbours whose element edge
/// it coincides with. Returns whether the mesh is face regular, i.e. every
/// face is regular with respect to at least one neighbour.
pub fn classify_regularity(mesh: &Mesh, faces: &mut [Face]) -> bool {
    let same_edge = |cell: usize, edge: usize, f: &Face| -> bool {
        let [a, b] = mesh.edge_vertices(cell, edge);
        let tol = GEOMETRIC_TOLERANCE * mesh.diameter(cell);
        let (pa, pb) = (mesh.vertices()[a], mesh.vertices()[b]);
        let [fa, fb] = f.endpoints;
        (dist(pa, fa) <= tol && dist(pb, fb) <= tol) || (dist(pa, fb) <= tol && dist(pb, fa) <= tol)
    };
    let mut all = true;
    for f in faces.iter_mut() {
        f.regular_ext = same_edge(f.ext, f.ext_edge, f);
        f.regular_int = match (f.int, f.int_edge) {
            (Some(c), Some(e)) => same_edge(c, e, f),
            _ => false,
        };
        all &= f.regular_wrt_any();
    }
    all
}

/// Faces of a mesh together with the per-cell edge links used by the local
/// moment systems.
#[derive(Debug, Clone)]
pub struct Skeleton {
    faces: Vec<Face>,
    face_regular: bool,
    /// `edge_faces[cell][edge]` is the mesh face equal to that element edge,
    /// if the edge is a mesh face.
    edge_faces: Vec<[Option<usize>; 3]>,
    cell_faces: Vec<Vec<usize>>,
}

impl Skeleton {
    pub fn new(mesh: &Mesh) -> Result<Self> {
        let mut faces = enumerate_faces(mesh)?;
        let face_regular = classify_regularity(mesh, &mut faces);
        let mut edge_faces = vec![[None; 3]; mesh.num_cells()];
        let mut cell_faces = vec![Vec::new(); mesh.num_cells()];
        for (i, f) in faces.iter().enumerate() {
            if f.regular_ext {
                edge_faces[f.ext][f.ext_edge] = Some(i);
            }
            if let (Some(c), Some(e), true) = (f.int, f.int_edge, f.regular_int) {
                edge_faces[c][e] = Some(i);
            }
            for (c, _) in f.sides() {
                cell_faces[c].push(i);
            }
        }
        Ok(Self {
            faces,
            face_regular,
            edge_faces,
            cell_faces,
        })
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn is_face_regular(&self) -> bool {
        self.face_regular
    }

    pub fn edge_face(&self, cell: usize, edge: usize) -> Option<usize> {
        self.edge_faces[cell][edge]
    }

    /// Faces touching a cell.
    pub fn cell_faces(&self, cell: usize) -> &[usize] {
        &self.cell_faces[cell]
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| f.is_interior())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| !f.is_interior())
    }
}

/// Named meshes used throughout the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinMesh {
    /// Unit square cut along one diagonal.
    TwoTriangle,
    /// `(-1, 1)²` cut along both diagonals.
    CrissCross,
    /// Diamond with one hanging node; face regular.
    Fig1Left,
    /// Diamond with two hanging nodes; not face regular.
    Fig1Right,
    /// `n × n` squares on `[0, 1]²`, each cut along its main diagonal.
    UnitSquare(usize),
}

impl BuiltinMesh {
    pub const FACE_REGULAR: [BuiltinMesh; 4] = [
        BuiltinMesh::TwoTriangle,
        BuiltinMesh::CrissCross,
        BuiltinMesh::Fig1Left,
        BuiltinMesh::UnitSquare(2),
    ];

    pub fn build(self) -> Result<Mesh> {
        match self {
            BuiltinMesh::TwoTriangle => Mesh::new(
                vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
                vec![[0, 1, 2], [0, 2, 3]],
            ),
            BuiltinMesh::CrissCross => Mesh::new(
                vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0], [0.0, 0.0]],
                // K1 (bottom), K2 (right), K3 (top), K4 (left)
                vec![[0, 1, 4], [1, 2, 4], [2, 3, 4], [3, 0, 4]],
            ),
            BuiltinMesh::Fig1Left => Mesh::new(
                vec![[0.0, 1.0], [1.0, 0.0], [0.0, -1.0], [-1.0, 0.0], [0.0, 0.0]],
                // K (right half, hanging node at the origin), then the two
                // halves of the left triangle.
                vec![[2, 1, 0], [3, 4, 0], [3, 2, 4]],
            ),
            BuiltinMesh::Fig1Right => Mesh::new(
                vec![
                    [0.0, 1.0],
                    [1.0, 0.0],
                    [0.0, -1.0],
                    [-1.0, 0.0],
                    [0.0, -0.2],
                    [0.0, 0.2],
                ],
                vec![[3, 2, 4], [3, 4, 0], [2, 1, 5], [5, 1, 0]],
            ),
            BuiltinMesh::UnitSquare(n) => {
                if n == 0 {
                    return Err(Error::EmptyMesh);
                }
                let np = n + 1;
                let hs = 1.0 / n as f64;
                let mut vertices = Vec::with_capacity(np * np);
                for j in 0..np {
                    for i in 0..np {
                        vertices.push([i as f64 * hs, j as f64 * hs]);
                    }
                }
                let mut cells = Vec::with_capacity(2 * n * n);
                for j in 0..n {
                    for i in 0..n {
                        let v00 = j * np + i;
                        let v10 = v00 + 1;
                        let v01 = v00 + np;
                        let v11 = v01 + 1;
                        cells.push([v00, v10, v11]);
                        cells.push([v00, v11, v01]);
                    }
                }
                Mesh::new(vertices, cells)
            }
        }
    }
}

impl fmt::Display for BuiltinMesh {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinMesh::TwoTriangle => f.write_str("two_triangle"),
            BuiltinMesh::CrissCross => f.write_str("criss_cross"),
            BuiltinMesh::Fig1Left => f.write_str("fig1_left"),
            BuiltinMesh::Fig1Right => f.write_str("fig1_right"),
            BuiltinMesh::UnitSquare(n) => write!(f, "unit_square({n})"),
        }
    }
}

impl FromStr for BuiltinMesh {
    type Err = Error;

    /// Accepts `unit_square(n)` and `unit_square:n` for the grid family.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || Error::UnknownMesh(String::from(s));
        match s {
            "two_triangle" => Ok(BuiltinMesh::TwoTriangle),
            "criss_cross" => Ok(BuiltinMesh::CrissCross),
            "fig1_left" => Ok(BuiltinMesh::Fig1Left),
            "fig1_right" => Ok(BuiltinMesh::Fig1Right),
            _ => {
                let rest = s.strip_prefix("unit_square").ok_or_else(unknown)?;
                let n = rest
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .or_else(|| rest.strip_prefix(':'))
                    .ok_or_else(unknown)?;
                match n.trim().parse::<usize>() {
                    Ok(n) if n > 0 => Ok(BuiltinMesh::UnitSquare(n)),
                    _ => Err(unknown()),
                }
            }
        }
    }
}
