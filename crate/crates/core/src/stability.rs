//! The `‖·‖_{1,h}` norm, the test field `τ_h` that certifies coercivity of
//! the lifted gradient, norm-equivalence constants and the equal-order
//! counterexample on the criss-cross mesh.
//!
//! `τ_h` is built cell by cell in `RTN_{k+1}(K)` from
//!
//! * interior moments `∫_K τ·μ = ∫_K ∇u·μ` for `μ ∈ P_{k-1}(K)²`,
//! * face moments `τ·n_F = -h_F^{-1} [[u]]` on element edges that are mesh
//!   faces, and `τ·n_E = 0` on edges that are not.
//!
//! On a face-regular mesh this gives `{τ·n_F} = -h_F^{-1}[[u]]` on faces
//! regular with respect to all neighbours and half of that on the others,
//! hence `∫ G_h u · τ_h ≥ ½ ‖u‖²_{1,h}` when the lifting has degree `k+1`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liftings::{
    broken_gradient, broken_gradient_matrix, jump, jumps, lifted_gradient, lifted_gradient_matrix,
    normal_average, vector_mass_diagonal,
};
use crate::linalg::{generalized_eigen_extremes, generalized_singular_extremes};
use crate::mesh::{BuiltinMesh, FaceCase};
use crate::polybasis::{dim_p, legendre_unit};
use crate::report::{Check, ExperimentReport};
use crate::sparse::CsrMatrix;
use crate::spaces::{project_cellwise, DgScalar, DgVector, Discretization, RtnMomentSystem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norm1h {
    /// `Σ_K ‖∇u‖²_{L²(K)}`.
    pub gradient: f64,
    /// `Σ_F h_F^{-1} ‖[[u]]‖²_{L²(F)}`, boundary faces included.
    pub jump: f64,
    pub value: f64,
}

pub fn norm_1h(disc: &Discretization, u: &DgScalar) -> Result<Norm1h> {
    let ell = u.degree.clamp(1, disc.max_degree());
    let grad = broken_gradient(disc, u, ell)?;
    let gradient = grad.l2_inner(disc, &grad);
    let mut jump_part = 0.0;
    for (fi, face) in disc.faces().iter().enumerate() {
        let w = &disc.face_table(fi).weights;
        let j = jump(disc, u, fi);
        jump_part += (0..w.len()).map(|q| w[q] * j[q] * j[q]).sum::<f64>() / face.length;
    }
    Ok(Norm1h {
        gradient,
        jump: jump_part,
        value: libm::sqrt(gradient + jump_part),
    })
}

/// Gram matrix `B` of `‖·‖²_{1,h}` over `V_{h,k}`.
pub fn norm_1h_matrix(disc: &Discretization) -> Result<CsrMatrix> {
    let k = disc.k();
    let grad = broken_gradient_matrix(disc, k)?;
    let grad_part = grad.weighted_gram(&vector_mass_diagonal(disc, k));
    let jumps = crate::liftings::jump_matrix(disc);
    let weights: Vec<f64> = (0..disc.faces().len())
        .flat_map(|fi| {
            let h = disc.faces()[fi].length;
            disc.face_table(fi).weights.iter().map(move |w| w / h)
        })
        .collect();
    Ok(grad_part.add(&jumps.weighted_gram(&weights)))
}

/// The test field `τ_h ∈ Σ_{h,k+1}` for `u ∈ V_{h,k}`.
pub fn build_tau(disc: &Discretization, u: &DgScalar) -> Result<DgVector> {
    if !disc.skeleton().is_face_regular() {
        return Err(Error::NotFaceRegular);
    }
    let k = disc.k();
    if u.degree > k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: u.degree,
        });
    }
    let (n1, nkm) = (dim_p(k + 1), dim_p(k - 1));
    let grad = broken_gradient(disc, u, k + 1)?;
    let face_jumps = jumps(disc, u);
    let mesh = disc.mesh();
    let mut tau = DgVector::zeros(disc, k + 1);
    for cell in 0..disc.num_cells() {
        let system = RtnMomentSystem::new(disc, cell)?;
        let det = disc.geometry(cell).det;
        let g = grad.cell(cell);
        let mut interior = vec![0.0; system.num_interior()];
        for c in 0..2 {
            for i in 0..nkm {
                interior[c * nkm + i] = det * g[c * n1 + i];
            }
        }
        let mut face = vec![0.0; system.num_face()];
        for e in 0..3 {
            let Some(fi) = disc.skeleton().edge_face(cell, e) else {
                continue;
            };
            let f = disc.skeleton().face(fi);
            let sign = if f.ext == cell { 1.0 } else { -1.0 };
            let [a, b] = mesh.edge_vertices(cell, e).map(|v| mesh.vertices()[v]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let len2 = d[0] * d[0] + d[1] * d[1];
            let table = disc.face_table(fi);
            for (j, m) in face[system.face_range(e)].iter_mut().enumerate() {
                *m = table
                    .points
                    .iter()
                    .zip(&table.weights)
                    .zip(&face_jumps.values[fi])
                    .map(|((x, w), jmp)| {
                        let t = ((x[0] - a[0]) * d[0] + (x[1] - a[1]) * d[1]) / len2;
                        -sign * w * jmp / f.length * legendre_unit(j, t)
                    })
                    .sum();
            }
        }
        let block = system.from_moments(&interior, &face)?;
        tau.cell_mut(cell).copy_from_slice(&block);
    }
    Ok(tau)
}

/// Deviation of `{τ·n_F}` from its predicted value on one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceCaseResidual {
    pub face: usize,
    pub case: FaceCase,
    /// Pointwise maximum over the face quadrature points.
    pub residual: f64,
}

/// `{τ·n_F}` against `-h_F^{-1}[[u]]` (cases 1 and 2) or
/// `-½ h_F^{-1}[[u]]` (case 3), face by face.
pub fn face_case_residuals(disc: &Discretization, u: &DgScalar, tau: &DgVector) -> Vec<FaceCaseResidual> {
    disc.faces()
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let case = f.case();
            let factor = if case == FaceCase::Case3 { 0.5 } else { 1.0 };
            let avg = normal_average(disc, tau, fi);
            let jmp = jump(disc, u, fi);
            let residual = avg
                .iter()
                .zip(&jmp)
                .map(|(a, j)| (a + factor * j / f.length).abs())
                .fold(0.0, f64::max);
            FaceCaseResidual { face: fi, case, residual }
        })
        .collect()
}

/// `∫_Ω G_h u · τ` with the degree-`k+1` lifting.
pub fn tau_pairing(disc: &Discretization, u: &DgScalar, tau: &DgVector) -> Result<f64> {
    Ok(lifted_gradient(disc, u, disc.k() + 1)?.l2_inner(disc, tau))
}

/// `‖τ‖_{L²} / ‖u‖_{1,h}`.
pub fn check_upper_bound(disc: &Discretization, u: &DgScalar, tau: &DgVector) -> Result<f64> {
    let n = norm_1h(disc, u)?.value;
    if n == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(tau.l2_norm(disc) / n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// `min ‖G_h u‖ / ‖u‖_{1,h}` over `V_{h,k} \ {0}`.
    pub c_min: f64,
    pub c_max: f64,
    pub k: usize,
    pub ell: usize,
}

/// Extremal ratios `‖G_h u‖_{L²} / ‖u‖_{1,h}` with lifting degree `ell`.
pub fn equivalence_constants(disc: &Discretization, ell: usize) -> Result<EquivalenceReport> {
    let g = lifted_gradient_matrix(disc, ell)?;
    let mut g = g.to_dense();
    for (r, w) in vector_mass_diagonal(disc, ell).iter().enumerate() {
        let s = libm::sqrt(*w);
        g.row_mut(r).iter_mut().for_each(|v| *v *= s);
    }
    let b = norm_1h_matrix(disc)?.to_dense();
    let (c_min, c_max) = generalized_singular_extremes(&g, &b)?;
    Ok(EquivalenceReport {
        c_min,
        c_max,
        k: disc.k(),
        ell,
    })
}

/// `sup ‖u‖_{L²} / ‖u‖_{1,h}` over `V_{h,k}`.
pub fn poincare_constant(disc: &Discretization) -> Result<f64> {
    let b = norm_1h_matrix(disc)?.to_dense();
    let n = dim_p(disc.k());
    let mass = DMatrix::from_fn(b.nrows(), b.ncols(), |i, j| {
        if i == j {
            disc.geometry(i / n).det
        } else {
            0.0
        }
    });
    let (_, hi) = generalized_eigen_extremes(&mass, &b)?;
    Ok(libm::sqrt(hi))
}

/// The piecewise-linear function on the criss-cross mesh with vanishing
/// interior averages and cell means:
/// `y + 2/3`, `x - 2/3`, `-y + 2/3`, `-x - 2/3` on the bottom, right, top and
/// left triangles.
pub fn counterexample_function(disc: &Discretization) -> Result<DgScalar> {
    project_cellwise(disc, 1, |cell, p| match cell {
        0 => p[1] + 2.0 / 3.0,
        1 => p[0] - 2.0 / 3.0,
        2 => -p[1] + 2.0 / 3.0,
        _ => -p[0] - 2.0 / 3.0,
    })
}

/// Equal-order lifting fails on the criss-cross mesh while the
/// degree-`k+1` lifting does not.
pub fn run_counterexample() -> Result<ExperimentReport> {
    let disc = Discretization::new(BuiltinMesh::CrissCross.build()?, 1)?;
    let u = counterexample_function(&disc)?;
    let norm = norm_1h(&disc, &u)?.value;

    let avg_max = disc
        .skeleton()
        .interior_faces()
        .flat_map(|(fi, _)| crate::liftings::average(&disc, &u, fi))
        .fold(0.0, |m: f64, v| m.max(v.abs()));
    let (rule, vals) = disc.cell_rule();
    let mean_max = (0..disc.num_cells())
        .map(|c| {
            let uc = u.cell(c);
            let integral: f64 = (0..rule.len())
                .map(|q| rule.weights[q] * uc.iter().enumerate().map(|(i, a)| a * vals[i][q]).sum::<f64>())
                .sum();
            (disc.geometry(c).det * integral).abs()
        })
        .fold(0.0, f64::max);
    let equal_order = lifted_gradient(&disc, &u, 1)?.l2_norm(&disc);
    let stable = lifted_gradient(&disc, &u, 2)?.l2_norm(&disc);
    let constants = equivalence_constants(&disc, 2)?;
    let equal_constants = equivalence_constants(&disc, 1)?;

    let checks = vec![
        Check::at_most("interior_average_max", avg_max, 1e-13),
        Check::at_most("cell_mean_max", mean_max, 1e-13),
        Check::at_most("equal_order_lifted_gradient_ratio", equal_order / norm, 1e-10),
        Check::at_least(
            "stable_lifted_gradient_ratio",
            stable / norm,
            constants.c_min * (1.0 - 1e-10),
        ),
        Check::at_least("stable_c_min", constants.c_min, 1e-8),
        Check::at_most("equal_order_c_min", equal_constants.c_min, 1e-8),
    ];
    Ok(ExperimentReport {
        experiment: "counterexample".to_string(),
        mesh: BuiltinMesh::CrissCross.to_string(),
        k: 1,
        ell: 2,
        c_min: Some(constants.c_min),
        c_max: Some(constants.c_max),
        checks,
    })
}
