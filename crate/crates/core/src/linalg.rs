//! Dense symmetric and generalized eigenvalue helpers.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Smallest and largest eigenvalue of a symmetric matrix.
pub fn symmetric_extremes(a: &DMatrix<f64>) -> (f64, f64) {
    let ev = SymmetricEigen::new(a.clone()).eigenvalues;
    (ev.min(), ev.max())
}

/// Extremal values of `‖G x‖ / ‖L^T x‖` where `B = L Lᵀ`.
///
/// Equivalent to the square roots of the extremal eigenvalues of
/// `Gᵀ G x = λ B x`, but computed through singular values so that a
/// vanishing minimum is resolved to absolute accuracy near machine
/// precision instead of its square root.
pub fn generalized_singular_extremes(g: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, f64)> {
    if g.ncols() != b.nrows() || !b.is_square() {
        return Err(Error::DimensionMismatch {
            expected: b.nrows(),
            got: g.ncols(),
        });
    }
    let l = b.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.unpack();
    // Reduce a tall G to its square R factor first; singular values agree.
    let r = if g.nrows() > g.ncols() {
        g.clone().qr().r()
    } else {
        g.clone()
    };
    // X = R L^{-T}  <=>  L Xᵀ = Rᵀ
    let xt = l
        .solve_lower_triangular(&r.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let sv = xt.singular_values();
    Ok((sv.min(), sv.max()))
}

/// Extremal eigenvalues of `A x = λ B x` with `B` symmetric positive
/// definite.
pub fn generalized_eigen_extremes(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, f64)> {
    let l = b.clone().cholesky().ok_or(Error::NotPositiveDefinite)?.unpack();
    let y = l.solve_lower_triangular(a).ok_or(Error::NotPositiveDefinite)?;
    let c = l
        .solve_lower_triangular(&y.transpose())
        .ok_or(Error::NotPositiveDefinite)?;
    let c = (&c + c.transpose()) * 0.5;
    Ok(symmetric_extremes(&c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_generalized_problem() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[2.0, 8.0, 3.0]));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[1.0, 2.0, 3.0]));
        let (lo, hi) = generalized_eigen_extremes(&a, &b).unwrap();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 4.0).abs() < 1e-14);
    }

    #[test]
    fn singular_extremes_match_eigen_route() {
        let g = DMatrix::from_fn(7, 3, |i, j| ((i * 3 + j) as f64 * 0.7).sin());
        let b = DMatrix::from_fn(3, 3, |i, j| if i == j { 2.0 } else { 0.3 });
        let (smin, smax) = generalized_singular_extremes(&g, &b).unwrap();
        let (lmin, lmax) = generalized_eigen_extremes(&(g.transpose() * &g), &b).unwrap();
        assert!((smin * smin - lmin).abs() < 1e-12);
        assert!((smax * smax - lmax).abs() < 1e-12);
    }

    #[test]
    fn exact_kernel_is_resolved() {
        let g = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, -1.0, -1.0]);
        let b = DMatrix::identity(2, 2);
        let (smin, _) = generalized_singular_extremes(&g, &b).unwrap();
        assert!(smin < 1e-15);
    }

    #[test]
    fn indefinite_metric_is_rejected() {
        let g = DMatrix::identity(2, 2);
        let b = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(generalized_singular_extremes(&g, &b), Err(Error::NotPositiveDefinite));
    }
}
