//! Poisson problem `-Δu = f` in `Ω`, `u = 0` on `∂Ω`, discretized by
//! `a_h(u, v) = (G_h u, G_h v)` with the degree-`k+1` lifted gradient and
//! no penalty term.
//!
//! The stiffness matrix is `A = Gᵀ M G` with `G` the lifted-gradient matrix
//! and `M` the block-diagonal mass matrix of `Σ_{h,k+1}`. The load vector is
//! `b = M_V Π_h^k f`. A discrete solution satisfies
//! `-D_h(G_h u_h) = Π_h^k f` cell by cell.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liftings::{
    broken_gradient, jump, lifted_divergence, lifted_gradient, lifted_gradient_matrix,
    scalar_mass_diagonal, vector_mass_diagonal,
};
use crate::mesh::{Mesh, Point};
use crate::sparse::{conjugate_gradient, CsrMatrix};
use crate::spaces::{l2_project, DgScalar, Discretization};

/// Relative algebraic residual targeted by the iterative solver.
pub const CG_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct StiffnessSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    /// `Π_h^k f`.
    pub projected_load: DgScalar,
}

/// Assembles `A` and `b`; refuses meshes that are not face regular.
pub fn assemble<F>(disc: &Discretization, f: F) -> Result<StiffnessSystem>
where
    F: Fn(Point) -> f64,
{
    if !disc.skeleton().is_face_regular() {
        return Err(Error::NotFaceRegular);
    }
    let k = disc.k();
    let g = lifted_gradient_matrix(disc, k + 1)?;
    let matrix = g.weighted_gram(&vector_mass_diagonal(disc, k + 1));
    let projected_load = l2_project(disc, k, f)?;
    let rhs = projected_load
        .coeffs
        .iter()
        .zip(scalar_mass_diagonal(disc, k))
        .map(|(c, m)| c * m)
        .collect();
    Ok(StiffnessSystem {
        matrix,
        rhs,
        projected_load,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinearSolver {
    /// Jacobi-preconditioned conjugate gradient.
    #[default]
    ConjugateGradient,
    /// Dense Cholesky factorization.
    Cholesky,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: DgScalar,
    pub iterations: usize,
    /// `‖b - A u‖ / ‖b‖` (zero for `b = 0`).
    pub relative_residual: f64,
}

pub fn solve(disc: &Discretization, system: &StiffnessSystem, solver: LinearSolver) -> Result<Solution> {
    let n = system.rhs.len();
    let (coeffs, iterations) = match solver {
        LinearSolver::ConjugateGradient => {
            let out = conjugate_gradient(&system.matrix, &system.rhs, CG_TOLERANCE, 20 * n + 100)?;
            (out.solution, out.iterations)
        }
        LinearSolver::Cholesky => {
            let chol = system
                .matrix
                .to_dense()
                .cholesky()
                .ok_or(Error::NotPositiveDefinite)?;
            let x = chol.solve(&DVector::from_column_slice(&system.rhs));
            (x.as_slice().to_vec(), 0)
        }
    };
    let ax = system.matrix.mul_vec(&coeffs);
    let res: f64 = ax.iter().zip(&system.rhs).map(|(a, b)| (a - b) * (a - b)).sum();
    let bn: f64 = system.rhs.iter().map(|b| b * b).sum();
    let relative_residual = if bn == 0.0 {
        libm::sqrt(res)
    } else {
        libm::sqrt(res / bn)
    };
    Ok(Solution {
        u: DgScalar::from_coeffs(disc, disc.k(), coeffs)?,
        iterations,
        relative_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongFormResidual {
    /// `max |-D_h(G_h u) - Π_h^k f|` over sample points of every cell.
    pub residual: f64,
    /// `‖Π_h^k f‖_∞` over the same samples.
    pub load_max: f64,
}

/// Evaluates `-D_h(G_h u) - Π_h^k f` through the function-level operators.
pub fn strong_form_residual(
    disc: &Discretization,
    u: &DgScalar,
    projected_load: &DgScalar,
) -> Result<StrongFormResidual> {
    let g = lifted_gradient(disc, u, disc.k() + 1)?;
    let mut r = lifted_divergence(disc, &g)?;
    for (a, f) in r.coeffs.iter_mut().zip(&projected_load.coeffs) {
        *a = -*a - f;
    }
    Ok(StrongFormResidual {
        residual: r.max_abs(disc),
        load_max: projected_load.max_abs(disc),
    })
}

/// Smallest eigenvalue of the dense stiffness matrix.
pub fn min_eigenvalue(system: &StiffnessSystem) -> f64 {
    crate::linalg::symmetric_extremes(&system.matrix.to_dense()).0
}

/// Exact solution with its gradient and the matching load.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedSolution {
    pub name: &'static str,
    pub u: fn(Point) -> f64,
    pub grad: fn(Point) -> [f64; 2],
    pub f: fn(Point) -> f64,
}

impl ManufacturedSolution {
    /// `u = sin(πx) sin(πy)` on the unit square, `f = 2π² u`.
    pub fn sinsin() -> Self {
        use core::f64::consts::PI;
        Self {
            name: "sinsin",
            u: |p| libm::sin(PI * p[0]) * libm::sin(PI * p[1]),
            grad: |p| {
                [
                    PI * libm::cos(PI * p[0]) * libm::sin(PI * p[1]),
                    PI * libm::sin(PI * p[0]) * libm::cos(PI * p[1]),
                ]
            },
            f: |p| 2.0 * PI * PI * libm::sin(PI * p[0]) * libm::sin(PI * p[1]),
        }
    }

    pub fn zero() -> Self {
        Self {
            name: "zero",
            u: |_| 0.0,
            grad: |_| [0.0, 0.0],
            f: |_| 0.0,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "sinsin" => Some(Self::sinsin()),
            "zero" => Some(Self::zero()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub h: f64,
    pub dofs: usize,
    pub err_l2: f64,
    pub err_h1_broken: f64,
    /// `‖u - u_h‖_{1,h}`; the exact solution has no jumps.
    pub err_1h: f64,
}

/// Errors measured with the fine cell rule against the exact solution.
pub fn compute_errors(disc: &Discretization, u_h: &DgScalar, exact: &ManufacturedSolution) -> Result<ErrorReport> {
    let grad_h = broken_gradient(disc, u_h, u_h.degree.clamp(1, disc.max_degree()))?;
    let (rule, _) = disc.fine_rule();
    let (mut l2, mut h1) = (0.0, 0.0);
    for c in 0..disc.num_cells() {
        let g = disc.geometry(c);
        for (q, &p) in rule.points.iter().enumerate() {
            let x = g.to_physical(p);
            let w = g.det * rule.weights[q];
            let e = (exact.u)(x) - u_h.eval(disc, c, x);
            let ge = (exact.grad)(x);
            let gh = grad_h.eval(disc, c, x);
            l2 += w * e * e;
            h1 += w * ((ge[0] - gh[0]) * (ge[0] - gh[0]) + (ge[1] - gh[1]) * (ge[1] - gh[1]));
        }
    }
    let mut jumps = 0.0;
    for (fi, face) in disc.faces().iter().enumerate() {
        let w = &disc.face_table(fi).weights;
        let j = jump(disc, u_h, fi);
        jumps += (0..w.len()).map(|q| w[q] * j[q] * j[q]).sum::<f64>() / face.length;
    }
    Ok(ErrorReport {
        h: disc.mesh().h(),
        dofs: u_h.coeffs.len(),
        err_l2: libm::sqrt(l2),
        err_h1_broken: libm::sqrt(h1),
        err_1h: libm::sqrt(h1 + jumps),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub k: usize,
    pub levels: Vec<ErrorReport>,
    /// `log2(e_i / e_{i+1})` between consecutive levels.
    pub rates_l2: Vec<f64>,
    pub rates_h1: Vec<f64>,
    pub rates_1h: Vec<f64>,
}

fn rates(errors: impl Iterator<Item = f64> + Clone) -> Vec<f64> {
    let v: Vec<f64> = errors.collect();
    v.windows(2).map(|w| libm::log2(w[0] / w[1])).collect()
}

/// Solves on `base` and `levels - 1` uniform refinements of it.
pub fn convergence_study(
    base: &Mesh,
    levels: usize,
    k: usize,
    exact: &ManufacturedSolution,
    solver: LinearSolver,
) -> Result<ConvergenceStudy> {
    if levels < 3 {
        return Err(Error::TooFewLevels(levels));
    }
    let mut mesh = base.clone();
    let mut reports = Vec::with_capacity(levels);
    for level in 0..levels {
        if level > 0 {
            mesh = mesh.refine_uniform();
        }
        let disc = Discretization::new(mesh.clone(), k)?;
        let system = assemble(&disc, exact.f)?;
        let sol = solve(&disc, &system, solver)?;
        reports.push(compute_errors(&disc, &sol.u, exact)?);
    }
    Ok(ConvergenceStudy {
        k,
        rates_l2: rates(reports.iter().map(|r| r.err_l2)),
        rates_h1: rates(reports.iter().map(|r| r.err_h1_broken)),
        rates_1h: rates(reports.iter().map(|r| r.err_1h)),
        levels: reports,
    })
}

/// `max_{v ≠ 0} |a_h(u_h, v) - (f, v)|`-style check: the entries of
/// `A u - b` as a dense vector (Galerkin orthogonality per basis function).
pub fn galerkin_defect(system: &StiffnessSystem, u: &DgScalar) -> Vec<f64> {
    let au = system.matrix.mul_vec(&u.coeffs);
    au.iter().zip(&system.rhs).map(|(a, b)| a - b).collect()
}

/// Dense `Gᵀ M G` built from the function-level lifted gradient applied to
/// unit vectors; an assembly cross-check for small meshes.
pub fn stiffness_by_probing(disc: &Discretization) -> Result<DMatrix<f64>> {
    let k = disc.k();
    let n = disc.scalar_dofs(k);
    let columns: Vec<_> = (0..n)
        .map(|j| {
            let mut e = DgScalar::zeros(disc, k);
            e.coeffs[j] = 1.0;
            lifted_gradient(disc, &e, k + 1)
        })
        .collect::<Result<_>>()?;
    Ok(DMatrix::from_fn(n, n, |i, j| columns[i].l2_inner(disc, &columns[j])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::BuiltinMesh;
    use crate::stability::norm_1h;

    fn disc(m: BuiltinMesh, k: usize) -> Discretization {
        Discretization::new(m.build().unwrap(), k).unwrap()
    }

    #[test]
    fn zero_load_gives_zero_solution() {
        let d = disc(BuiltinMesh::CrissCross, 1);
        let s = assemble(&d, |_| 0.0).unwrap();
        assert!(s.rhs.iter().all(|b| *b == 0.0));
        for solver in [LinearSolver::ConjugateGradient, LinearSolver::Cholesky] {
            let sol = solve(&d, &s, solver).unwrap();
            assert!(sol.u.coeffs.iter().all(|v| *v == 0.0));
            let r = strong_form_residual(&d, &sol.u, &s.projected_load).unwrap();
            assert_eq!(r.residual, 0.0);
        }
    }

    #[test]
    fn stiffness_is_symmetric_and_matches_probing() {
        for (m, k) in [(BuiltinMesh::Fig1Left, 1), (BuiltinMesh::TwoTriangle, 2)] {
            let d = disc(m, k);
            let s = assemble(&d, |_| 1.0).unwrap();
            assert!(s.matrix.asymmetry() <= 1e-12 * s.matrix.max_abs());
            let probe = stiffness_by_probing(&d).unwrap();
            assert!((s.matrix.to_dense() - probe).abs().max() <= 1e-12 * s.matrix.max_abs());
        }
    }

    #[test]
    fn positive_definite_on_criss_cross() {
        let d = disc(BuiltinMesh::CrissCross, 1);
        assert!(min_eigenvalue(&assemble(&d, |_| 1.0).unwrap()) > 0.0);
    }

    #[test]
    fn refuses_irregular_mesh() {
        let d = disc(BuiltinMesh::Fig1Right, 1);
        assert_eq!(assemble(&d, |_| 1.0).unwrap_err(), Error::NotFaceRegular);
    }

    #[test]
    fn constant_load_strong_form() {
        for (m, k) in [(BuiltinMesh::Fig1Left, 1), (BuiltinMesh::UnitSquare(2), 2)] {
            let d = disc(m, k);
            let s = assemble(&d, |_| 1.0).unwrap();
            let sol = solve(&d, &s, LinearSolver::ConjugateGradient).unwrap();
            let r = strong_form_residual(&d, &sol.u, &s.projected_load).unwrap();
            assert!(r.residual <= 1e-9 * r.load_max, "{r:?}");
            assert!((r.load_max - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn solvers_agree_and_galerkin_orthogonality_holds() {
        let d = disc(BuiltinMesh::UnitSquare(4), 1);
        let ms = ManufacturedSolution::sinsin();
        let s = assemble(&d, ms.f).unwrap();
        let a = solve(&d, &s, LinearSolver::ConjugateGradient).unwrap();
        let b = solve(&d, &s, LinearSolver::Cholesky).unwrap();
        assert!(a.relative_residual <= 1e-10 && b.relative_residual <= 1e-10);
        let scale = s.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(galerkin_defect(&s, &a.u).iter().all(|v| v.abs() <= 1e-10 * scale));
        for (x, y) in a.u.coeffs.iter().zip(&b.u.coeffs) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_exact_solution_has_zero_error() {
        let base = BuiltinMesh::UnitSquare(1).build().unwrap();
        let study = convergence_study(&base, 3, 1, &ManufacturedSolution::zero(), LinearSolver::default()).unwrap();
        assert!(study.levels.iter().all(|r| r.err_l2 == 0.0 && r.err_1h == 0.0));
        assert_eq!(
            convergence_study(&base, 2, 1, &ManufacturedSolution::zero(), LinearSolver::default()).unwrap_err(),
            Error::TooFewLevels(2)
        );
    }

    #[test]
    fn solution_bounded_by_load() {
        let ms = ManufacturedSolution::sinsin();
        let mut ratios = Vec::new();
        let mut mesh = BuiltinMesh::UnitSquare(2).build().unwrap();
        for _ in 0..3 {
            let d = Discretization::new(mesh.clone(), 1).unwrap();
            let s = assemble(&d, ms.f).unwrap();
            let sol = solve(&d, &s, LinearSolver::default()).unwrap();
            let fnorm = l2_project(&d, 2, ms.f).unwrap().l2_norm(&d);
            ratios.push(norm_1h(&d, &sol.u).unwrap().value / fnorm);
            mesh = mesh.refine_uniform();
        }
        let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
        assert!(hi / lo < 1.5, "{ratios:?}");
    }
}
