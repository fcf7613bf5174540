//! Discontinuous piecewise-polynomial spaces and the local
//! Raviart–Thomas–Nédélec moment systems.
//!
//! Every cell carries the same orthonormal reference basis pushed forward by
//! its affine map, so the physical mass matrix of a cell is `det J_K · I` for
//! scalar fields and for each component of vector fields. A scalar field of
//! degree `m` stores `dim P_m` coefficients per cell; a vector field stores
//! the `x` block followed by the `y` block.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::mesh::{Face, Mesh, Point, Side, Skeleton};
use crate::polybasis::{
    dim_p, legendre_unit, quad_segment, quad_triangle, HomogeneousBasis, ScalarBasis, SegmentRule,
    TriangleRule,
};

pub const MIN_K: usize = 1;
pub const MAX_K: usize = 4;

/// Affine map `x = origin + J ξ` from the reference triangle onto a cell.
#[derive(Debug, Clone, Copy)]
pub struct CellGeometry {
    pub origin: Point,
    pub jac: [[f64; 2]; 2],
    pub jac_inv: [[f64; 2]; 2],
    /// `det J = 2 |K|`.
    pub det: f64,
}

impl CellGeometry {
    pub fn new([a, b, c]: [Point; 3]) -> Self {
        let jac = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let jac_inv = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        Self {
            origin: a,
            jac,
            jac_inv,
            det,
        }
    }

    pub fn to_physical(&self, xi: [f64; 2]) -> Point {
        [
            self.origin[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1],
            self.origin[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1],
        ]
    }

    pub fn to_reference(&self, x: Point) -> [f64; 2] {
        let d = [x[0] - self.origin[0], x[1] - self.origin[1]];
        [
            self.jac_inv[0][0] * d[0] + self.jac_inv[0][1] * d[1],
            self.jac_inv[1][0] * d[0] + self.jac_inv[1][1] * d[1],
        ]
    }

    /// Physical gradient from a reference gradient, `J^{-T} g`.
    pub fn grad_to_physical(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.jac_inv[0][0] * g[0] + self.jac_inv[1][0] * g[1],
            self.jac_inv[0][1] * g[0] + self.jac_inv[1][1] * g[1],
        ]
    }
}

/// Quadrature points of one face with basis values of each neighbour.
#[derive(Debug, Clone)]
pub struct FaceTable {
    pub points: Vec<Point>,
    /// Physical weights (they sum to `h_F`).
    pub weights: Vec<f64>,
    /// `values[side][i][q]`: basis function `i` of the cell on `side`.
    pub ext_values: Vec<Vec<f64>>,
    pub int_values: Option<Vec<Vec<f64>>>,
}

impl FaceTable {
    pub fn values(&self, side: Side) -> Option<&[Vec<f64>]> {
        match side {
            Side::Ext => Some(&self.ext_values),
            Side::Int => self.int_values.as_deref(),
        }
    }
}

/// A mesh, its skeleton and all tables needed for `V_{h,k}` and
/// `Σ_{h,k+1}`.
#[derive(Debug, Clone)]
pub struct Discretization {
    mesh: Mesh,
    skeleton: Skeleton,
    k: usize,
    basis: ScalarBasis,
    dxi: Vec<Vec<f64>>,
    deta: Vec<Vec<f64>>,
    geometry: Vec<CellGeometry>,
    cell_rule: TriangleRule,
    cell_values: Vec<Vec<f64>>,
    fine_rule: TriangleRule,
    fine_values: Vec<Vec<f64>>,
    face_rule: SegmentRule,
    face_tables: Vec<FaceTable>,
}

impl Discretization {
    pub fn new(mesh: Mesh, k: usize) -> Result<Self> {
        if !(MIN_K..=MAX_K).contains(&k) {
            return Err(Error::UnsupportedDegree(k));
        }
        let skeleton = Skeleton::new(&mesh)?;
        let basis = ScalarBasis::new(k + 1)?;
        let (dxi, deta) = basis.derivative_matrices()?;
        let geometry: Vec<CellGeometry> = (0..mesh.num_cells())
            .map(|c| CellGeometry::new(mesh.cell_points(c)))
            .collect();
        let cell_rule = quad_triangle(2 * (k + 2))?;
        let cell_values = basis.eval_table(&cell_rule.points);
        let fine_rule = quad_triangle(2 * (k + 2) + 4)?;
        let fine_values = basis.eval_table(&fine_rule.points);
        let face_rule = quad_segment(2 * (k + 2))?;
        let face_tables = skeleton
            .faces()
            .iter()
            .map(|f| {
                let points: Vec<Point> = face_rule.points.iter().map(|&t| f.point(t)).collect();
                let weights = face_rule.weights.iter().map(|w| w * f.length).collect();
                let table = |cell: usize| {
                    let refs: Vec<[f64; 2]> =
                        points.iter().map(|&x| geometry[cell].to_reference(x)).collect();
                    basis.eval_table(&refs)
                };
                FaceTable {
                    ext_values: table(f.ext),
                    int_values: f.int.map(table),
                    points,
                    weights,
                }
            })
            .collect();
        Ok(Self {
            mesh,
            skeleton,
            k,
            basis,
            dxi,
            deta,
            geometry,
            cell_rule,
            cell_values,
            fine_rule,
            fine_values,
            face_rule,
            face_tables,
        })
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn faces(&self) -> &[Face] {
        self.skeleton.faces()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_cells(&self) -> usize {
        self.mesh.num_cells()
    }

    pub fn basis(&self) -> &ScalarBasis {
        &self.basis
    }

    /// Largest polynomial degree the tables support (`k + 1`).
    pub fn max_degree(&self) -> usize {
        self.k + 1
    }

    pub fn geometry(&self, cell: usize) -> &CellGeometry {
        &self.geometry[cell]
    }

    pub fn derivative_matrices(&self) -> (&[Vec<f64>], &[Vec<f64>]) {
        (&self.dxi, &self.deta)
    }

    /// Rule exact to degree `2(k + 2)` with basis values `[i][q]`.
    pub fn cell_rule(&self) -> (&TriangleRule, &[Vec<f64>]) {
        (&self.cell_rule, &self.cell_values)
    }

    /// Rule exact to degree `2(k + 2) + 4`, used for non-polynomial data.
    pub fn fine_rule(&self) -> (&TriangleRule, &[Vec<f64>]) {
        (&self.fine_rule, &self.fine_values)
    }

    pub fn face_rule(&self) -> &SegmentRule {
        &self.face_rule
    }

    pub fn face_table(&self, face: usize) -> &FaceTable {
        &self.face_tables[face]
    }

    pub fn scalar_dofs(&self, degree: usize) -> usize {
        self.num_cells() * dim_p(degree)
    }

    pub fn vector_dofs(&self, degree: usize) -> usize {
        2 * self.num_cells() * dim_p(degree)
    }

    pub(crate) fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.max_degree() {
            return Err(Error::UnsupportedLiftingDegree {
                k: self.k,
                ell: degree,
            });
        }
        Ok(())
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Element of `V_{h,m}`: one block of `dim P_m` coefficients per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DgScalar {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl DgScalar {
    pub fn zeros(disc: &Discretization, degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![0.0; disc.scalar_dofs(degree)],
        }
    }

    pub fn from_coeffs(disc: &Discretization, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        disc.check_degree(degree)?;
        let expected = disc.scalar_dofs(degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { degree, coeffs })
    }

    pub fn block_len(&self) -> usize {
        dim_p(self.degree)
    }

    pub fn cell(&self, c: usize) -> &[f64] {
        let n = self.block_len();
        &self.coeffs[c * n..(c + 1) * n]
    }

    pub fn cell_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.block_len();
        &mut self.coeffs[c * n..(c + 1) * n]
    }

    pub fn eval(&self, disc: &Discretization, cell: usize, x: Point) -> f64 {
        let xi = disc.geometry(cell).to_reference(x);
        let v = disc.basis().eval(xi);
        dot(self.cell(cell), &v)
    }

    /// Values on a face at the face quadrature points, from one side.
    pub fn face_trace(&self, disc: &Discretization, face: usize, side: Side) -> Result<Vec<f64>> {
        let f = disc.skeleton().face(face);
        let cell = f.cell(side).ok_or(Error::NoInteriorSide(face))?;
        let vals = disc
            .face_table(face)
            .values(side)
            .ok_or(Error::NoInteriorSide(face))?;
        let c = self.cell(cell);
        let nq = disc.face_rule().len();
        Ok((0..nq)
            .map(|q| c.iter().enumerate().map(|(i, a)| a * vals[i][q]).sum())
            .collect())
    }

    /// Values at arbitrary points of a face (parameters `t ∈ [0, 1]`).
    pub fn eval_on_face(
        &self,
        disc: &Discretization,
        face: usize,
        side: Side,
        params: &[f64],
    ) -> Result<Vec<f64>> {
        let f = disc.skeleton().face(face);
        let cell = f.cell(side).ok_or(Error::NoInteriorSide(face))?;
        Ok(params
            .iter()
            .map(|&t| self.eval(disc, cell, f.point(t)))
            .collect())
    }

    pub fn l2_inner(&self, disc: &Discretization, other: &DgScalar) -> f64 {
        let n = self.block_len().min(other.block_len());
        (0..disc.num_cells())
            .map(|c| disc.geometry(c).det * dot(&self.cell(c)[..n], &other.cell(c)[..n]))
            .sum()
    }

    pub fn l2_norm(&self, disc: &Discretization) -> f64 {
        libm::sqrt(self.l2_inner(disc, self))
    }

    /// Same function in a higher-degree space (zero padding).
    pub fn embed(&self, degree: usize) -> DgScalar {
        assert!(degree >= self.degree);
        let (n, m) = (self.block_len(), dim_p(degree));
        let cells = self.coeffs.len() / n;
        let mut coeffs = vec![0.0; cells * m];
        for c in 0..cells {
            coeffs[c * m..c * m + n].copy_from_slice(self.cell(c));
        }
        DgScalar { degree, coeffs }
    }

    /// Max of `|u|` sampled at the fine quadrature points and the vertices
    /// of every cell.
    pub fn max_abs(&self, disc: &Discretization) -> f64 {
        let basis = disc.basis();
        let (rule, _) = disc.fine_rule();
        let samples: Vec<[f64; 2]> = rule
            .points
            .iter()
            .cloned()
            .chain([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
            .collect();
        let table: Vec<Vec<f64>> = samples.iter().map(|&p| basis.eval(p)).collect();
        let mut m: f64 = 0.0;
        for c in 0..disc.num_cells() {
            let block = self.cell(c);
            for v in &table {
                m = m.max(dot(block, v).abs());
            }
        }
        m
    }
}

/// Element of `Σ_{h,m}`: per cell, the `x` block then the `y` block.
#[derive(Debug, Clone, PartialEq)]
pub struct DgVector {
    pub degree: usize,
    pub coeffs: Vec<f64>,
}

impl DgVector {
    pub fn zeros(disc: &Discretization, degree: usize) -> Self {
        Self {
            degree,
            coeffs: vec![0.0; disc.vector_dofs(degree)],
        }
    }

    pub fn from_coeffs(disc: &Discretization, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        disc.check_degree(degree)?;
        let expected = disc.vector_dofs(degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self { degree, coeffs })
    }

    pub fn component_len(&self) -> usize {
        dim_p(self.degree)
    }

    pub fn cell(&self, c: usize) -> &[f64] {
        let n = 2 * self.component_len();
        &self.coeffs[c * n..(c + 1) * n]
    }

    pub fn cell_mut(&mut self, c: usize) -> &mut [f64] {
        let n = 2 * self.component_len();
        &mut self.coeffs[c * n..(c + 1) * n]
    }

    fn eval_block(block: &[f64], vals: &[f64]) -> [f64; 2] {
        let n = block.len() / 2;
        [dot(&block[..n], &vals[..n]), dot(&block[n..], &vals[..n])]
    }

    pub fn eval(&self, disc: &Discretization, cell: usize, x: Point) -> [f64; 2] {
        let xi = disc.geometry(cell).to_reference(x);
        Self::eval_block(self.cell(cell), &disc.basis().eval(xi))
    }

    pub fn face_trace(
        &self,
        disc: &Discretization,
        face: usize,
        side: Side,
    ) -> Result<Vec<[f64; 2]>> {
        let f = disc.skeleton().face(face);
        let cell = f.cell(side).ok_or(Error::NoInteriorSide(face))?;
        let vals = disc
            .face_table(face)
            .values(side)
            .ok_or(Error::NoInteriorSide(face))?;
        let block = self.cell(cell);
        let n = self.component_len();
        let nq = disc.face_rule().len();
        Ok((0..nq)
            .map(|q| {
                let mut v = [0.0, 0.0];
                for i in 0..n {
                    v[0] += block[i] * vals[i][q];
                    v[1] += block[n + i] * vals[i][q];
                }
                v
            })
            .collect())
    }

    /// `σ · n_F` on one side, with the global face normal.
    pub fn normal_trace(&self, disc: &Discretization, face: usize, side: Side) -> Result<Vec<f64>> {
        let n = disc.skeleton().face(face).normal;
        Ok(self
            .face_trace(disc, face, side)?
            .into_iter()
            .map(|v| v[0] * n[0] + v[1] * n[1])
            .collect())
    }

    pub fn l2_inner(&self, disc: &Discretization, other: &DgVector) -> f64 {
        let (n, m) = (self.component_len(), other.component_len());
        let r = n.min(m);
        (0..disc.num_cells())
            .map(|c| {
                let (a, b) = (self.cell(c), other.cell(c));
                disc.geometry(c).det * (dot(&a[..r], &b[..r]) + dot(&a[n..n + r], &b[m..m + r]))
            })
            .sum()
    }

    pub fn l2_norm(&self, disc: &Discretization) -> f64 {
        libm::sqrt(self.l2_inner(disc, self))
    }

    pub fn embed(&self, degree: usize) -> DgVector {
        assert!(degree >= self.degree);
        let (n, m) = (self.component_len(), dim_p(degree));
        let cells = self.coeffs.len() / (2 * n);
        let mut coeffs = vec![0.0; 2 * cells * m];
        for c in 0..cells {
            let b = self.cell(c);
            coeffs[2 * c * m..2 * c * m + n].copy_from_slice(&b[..n]);
            coeffs[2 * c * m + m..2 * c * m + m + n].copy_from_slice(&b[n..]);
        }
        DgVector { degree, coeffs }
    }

    pub fn sub(&self, other: &DgVector) -> DgVector {
        assert_eq!(self.degree, other.degree);
        DgVector {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Cell-wise L² projection `Π_h^m` of a function given per cell.
pub fn project_cellwise<F>(disc: &Discretization, degree: usize, f: F) -> Result<DgScalar>
where
    F: Fn(usize, Point) -> f64,
{
    disc.check_degree(degree)?;
    let n = dim_p(degree);
    let (rule, vals) = disc.fine_rule();
    let mut out = DgScalar::zeros(disc, degree);
    for c in 0..disc.num_cells() {
        let g = disc.geometry(c);
        let fq: Vec<f64> = rule.points.iter().map(|&p| f(c, g.to_physical(p))).collect();
        let block = out.cell_mut(c);
        for (i, b) in block.iter_mut().enumerate().take(n) {
            *b = (0..rule.len()).map(|q| rule.weights[q] * fq[q] * vals[i][q]).sum();
        }
    }
    Ok(out)
}

/// `Π_h^m f`, the element-wise L² projection onto `V_{h,m}`.
pub fn l2_project<F>(disc: &Discretization, degree: usize, f: F) -> Result<DgScalar>
where
    F: Fn(Point) -> f64,
{
    project_cellwise(disc, degree, |_, x| f(x))
}

/// Component-wise L² projection onto `Σ_{h,m}`.
pub fn l2_project_vector<F>(disc: &Discretization, degree: usize, f: F) -> Result<DgVector>
where
    F: Fn(Point) -> [f64; 2],
{
    let x = l2_project(disc, degree, |p| f(p)[0])?;
    let y = l2_project(disc, degree, |p| f(p)[1])?;
    let n = dim_p(degree);
    let mut out = DgVector::zeros(disc, degree);
    for c in 0..disc.num_cells() {
        let b = out.cell_mut(c);
        b[..n].copy_from_slice(x.cell(c));
        b[n..].copy_from_slice(y.cell(c));
    }
    Ok(out)
}

/// Moment functionals determining a field of the local space
/// `RTN_{k+1}(K) = P_k(K)² ⊕ P̃_k(K) x`:
///
/// * interior moments `∫_K τ · μ` for `μ` in the orthonormal basis of
///   `P_{k-1}(K)²` (x block, then y block),
/// * face moments `∫_E (τ · n_E) L_j ds` for each local edge `E` with its
///   outward normal and the orthonormal Legendre polynomials `L_j`, `j ≤ k`,
///   in the edge parameter running from local vertex `e` to `e + 1`.
///
/// Fields are returned as coefficient blocks of `P_{k+1}(K)²`.
#[derive(Debug, Clone)]
pub struct RtnMomentSystem {
    cell: usize,
    k: usize,
    /// Moment functionals acting on `P_{k+1}²` coefficient blocks.
    functionals: DMatrix<f64>,
    /// Columns: spanning set of the RTN space in `P_{k+1}²` coefficients.
    spanning: DMatrix<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    condition: f64,
}

impl RtnMomentSystem {
    pub fn new(disc: &Discretization, cell: usize) -> Result<Self> {
        let k = disc.k();
        let n1 = dim_p(k + 1);
        let nk = dim_p(k);
        let nkm = dim_p(k - 1);
        let dim = (k + 1) * (k + 3);
        let geo = disc.geometry(cell);
        let mesh = disc.mesh();

        let mut functionals = DMatrix::<f64>::zeros(dim, 2 * n1);
        for c in 0..2 {
            for i in 0..nkm {
                functionals[(c * nkm + i, c * n1 + i)] = geo.det;
            }
        }
        let rule = disc.face_rule();
        let basis = disc.basis();
        let mut row = 2 * nkm;
        for e in 0..3 {
            let [a, b] = mesh.edge_vertices(cell, e).map(|v| mesh.vertices()[v]);
            let len = libm::hypot(b[0] - a[0], b[1] - a[1]);
            let normal = mesh.edge_normal(cell, e);
            let vals: Vec<Vec<f64>> = rule
                .points
                .iter()
                .map(|&t| basis.eval(geo.to_reference([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])])))
                .collect();
            for j in 0..=k {
                for (q, &t) in rule.points.iter().enumerate() {
                    let w = rule.weights[q] * len * legendre_unit(j, t);
                    for i in 0..n1 {
                        functionals[(row, i)] += w * normal[0] * vals[q][i];
                        functionals[(row, n1 + i)] += w * normal[1] * vals[q][i];
                    }
                }
                row += 1;
            }
        }

        let mut spanning = DMatrix::<f64>::zeros(2 * n1, dim);
        let mut col = 0;
        for c in 0..2 {
            for i in 0..nk {
                spanning[(c * n1 + i, col)] = 1.0;
                col += 1;
            }
        }
        // x P̃_k, centred at the barycentre and scaled by h_K.
        let [p0, p1, p2] = mesh.cell_points(cell);
        let centre = [(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0];
        let hk = mesh.diameter(cell);
        let homogeneous = HomogeneousBasis::new(k);
        let (crule, cvals) = disc.cell_rule();
        let scaled: Vec<[f64; 2]> = crule
            .points
            .iter()
            .map(|&p| {
                let x = geo.to_physical(p);
                [(x[0] - centre[0]) / hk, (x[1] - centre[1]) / hk]
            })
            .collect();
        for j in 0..homogeneous.dim() {
            for (q, s) in scaled.iter().enumerate() {
                let m = homogeneous.eval(*s)[j];
                let w = crule.weights[q];
                for i in 0..n1 {
                    spanning[(i, col)] += w * s[0] * m * cvals[i][q];
                    spanning[(n1 + i, col)] += w * s[1] * m * cvals[i][q];
                }
            }
            col += 1;
        }
        debug_assert_eq!(col, dim);

        let matrix = &functionals * &spanning;
        let sv = matrix.clone().singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        let condition = smax / smin;
        if !(smin > 1e-14 * smax) {
            return Err(Error::SingularMomentSystem(cell));
        }
        Ok(Self {
            cell,
            k,
            functionals,
            spanning,
            lu: matrix.lu(),
            condition,
        })
    }

    pub fn cell(&self) -> usize {
        self.cell
    }

    pub fn dim(&self) -> usize {
        (self.k + 1) * (self.k + 3)
    }

    pub fn num_interior(&self) -> usize {
        self.k * (self.k + 1)
    }

    pub fn num_face(&self) -> usize {
        3 * (self.k + 1)
    }

    /// Face moments of local edge `e` occupy `face[e*(k+1)..(e+1)*(k+1)]`.
    pub fn face_range(&self, edge: usize) -> core::ops::Range<usize> {
        edge * (self.k + 1)..(edge + 1) * (self.k + 1)
    }

    /// 2-norm condition number of the square moment matrix.
    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    /// Interior and face moments of a `P_{k+1}²` block.
    pub fn moments(&self, block: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let v = &self.functionals * DVector::from_column_slice(block);
        let ni = self.num_interior();
        (v.as_slice()[..ni].to_vec(), v.as_slice()[ni..].to_vec())
    }

    /// The unique RTN field with the given moments, as a `P_{k+1}²` block.
    pub fn from_moments(&self, interior: &[f64], face: &[f64]) -> Result<Vec<f64>> {
        if interior.len() != self.num_interior() {
            return Err(Error::DimensionMismatch {
                expected: self.num_interior(),
                got: interior.len(),
            });
        }
        if face.len() != self.num_face() {
            return Err(Error::DimensionMismatch {
                expected: self.num_face(),
                got: face.len(),
            });
        }
        let rhs = DVector::from_iterator(self.dim(), interior.iter().chain(face).cloned());
        let c = self
            .lu
            .solve(&rhs)
            .ok_or(Error::SingularMomentSystem(self.cell))?;
        Ok((&self.spanning * c).as_slice().to_vec())
    }
}

/// One-shot reconstruction of an RTN field from its moments.
pub fn rtn_from_moments(
    disc: &Discretization,
    cell: usize,
    interior: &[f64],
    face: &[f64],
) -> Result<Vec<f64>> {
    RtnMomentSystem::new(disc, cell)?.from_moments(interior, face)
}
