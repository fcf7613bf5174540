//! Compressed sparse row matrices and a Jacobi-preconditioned conjugate
//! gradient solver.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Duplicates are summed; explicit zeros are kept.
    pub fn from_triplets(nrows: usize, ncols: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_ptr[r + 1] += 1;
                col_idx.push(c);
                values.push(v);
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    fn from_rows(nrows: usize, ncols: usize, rows: Vec<BTreeMap<usize, f64>>) -> Self {
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for row in rows {
            for (c, v) in row {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(&c, v)| v * x[c]).sum()
            })
            .collect()
    }

    pub fn transpose_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.nrows);
        let mut out = vec![0.0; self.ncols];
        for (i, yi) in y.iter().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, v) in cols.iter().zip(vals) {
                out[c] += v * yi;
            }
        }
        out
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |A - Aᵀ|` over stored entries.
    pub fn asymmetry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, v) in cols.iter().zip(vals) {
                m = m.max((v - self.get(j, i)).abs());
            }
        }
        m
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&j, v) in cols.iter().zip(vals) {
                d[(i, j)] += v;
            }
        }
        d
    }

    /// `Aᵀ diag(w) A`, accumulated row by row in a fixed order.
    pub fn weighted_gram(&self, weights: &[f64]) -> CsrMatrix {
        assert_eq!(weights.len(), self.nrows);
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); self.ncols];
        for (r, w) in weights.iter().enumerate() {
            let (cols, vals) = self.row(r);
            for (&i, vi) in cols.iter().zip(vals) {
                let row = &mut rows[i];
                for (&j, vj) in cols.iter().zip(vals) {
                    *row.entry(j).or_insert(0.0) += w * vi * vj;
                }
            }
        }
        Self::from_rows(self.ncols, self.ncols, rows)
    }

    pub fn add(&self, other: &CsrMatrix) -> CsrMatrix {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); self.nrows];
        for m in [self, other] {
            for (i, row) in rows.iter_mut().enumerate() {
                let (cols, vals) = m.row(i);
                for (&j, v) in cols.iter().zip(vals) {
                    *row.entry(j).or_insert(0.0) += v;
                }
            }
        }
        Self::from_rows(self.nrows, self.ncols, rows)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub solution: Vec<f64>,
    pub iterations: usize,
    /// `‖b - A x‖ / ‖b‖`, recomputed from the final iterate.
    pub relative_residual: f64,
}

/// Jacobi-preconditioned conjugate gradient for an SPD matrix.
///
/// Fails with [`Error::NotPositiveDefinite`] on a non-positive curvature
/// direction and with [`Error::NotConverged`] when `max_iter` is reached.
pub fn conjugate_gradient(a: &CsrMatrix, b: &[f64], tol: f64, max_iter: usize) -> Result<CgOutcome> {
    let n = b.len();
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok(CgOutcome {
            solution: vec![0.0; n],
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let diag = a.diagonal();
    if diag.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::NotPositiveDefinite);
    }
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut it = 0;
    while it < max_iter {
        if norm(&r) <= tol * bnorm {
            // Confirm with the true residual; restart from it if drifted.
            let ax = a.mul_vec(&x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
            if norm(&r) <= tol * bnorm {
                break;
            }
            for i in 0..n {
                z[i] = r[i] / diag[i];
            }
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
        }
        let ap = a.mul_vec(&p);
        let curvature = dot(&p, &ap);
        if !(curvature > 0.0) {
            return Err(Error::NotPositiveDefinite);
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        // Replace the recursive residual periodically to curb drift.
        if it % 50 == 49 {
            let ax = a.mul_vec(&x);
            for i in 0..n {
                r[i] = b[i] - ax[i];
            }
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        it += 1;
    }
    let ax = a.mul_vec(&x);
    let res: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let relative_residual = norm(&res) / bnorm;
    if relative_residual > tol {
        return Err(Error::NotConverged {
            iterations: it,
            residual: relative_residual,
        });
    }
    Ok(CgOutcome {
        solution: x,
        iterations: it,
        relative_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplace_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, n, t)
    }

    #[test]
    fn triplets_are_summed() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(1, 2, 1.0), (0, 0, 2.0), (1, 2, 0.5)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(1, 2), 1.5);
        assert_eq!(m.get(0, 1), 0.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0, 2.0]), vec![2.0, 3.0]);
        assert_eq!(m.transpose_mul_vec(&[1.0, 2.0]), vec![2.0, 0.0, 3.0]);
    }

    #[test]
    fn weighted_gram_matches_dense() {
        let a = CsrMatrix::from_triplets(
            3,
            2,
            vec![(0, 0, 1.0), (0, 1, 2.0), (1, 1, -1.0), (2, 0, 3.0)],
        );
        let w = [2.0, 1.0, 0.5];
        let g = a.weighted_gram(&w).to_dense();
        let d = a.to_dense();
        let expected = d.transpose() * DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&w)) * d;
        assert!((g - expected).abs().max() < 1e-14);
    }

    #[test]
    fn cg_solves_spd_system() {
        let a = laplace_1d(50);
        let b: Vec<f64> = (0..50).map(|i| (i as f64).sin()).collect();
        let out = conjugate_gradient(&a, &b, 1e-12, 500).unwrap();
        assert!(out.relative_residual <= 1e-12);
        let zero = conjugate_gradient(&a, &vec![0.0; 50], 1e-12, 500).unwrap();
        assert!(zero.solution.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn cg_detects_indefinite_matrix() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 1, 1.0), (0, 1, 3.0), (1, 0, 3.0)]);
        assert_eq!(
            conjugate_gradient(&a, &[1.0, -1.0], 1e-12, 10).unwrap_err(),
            Error::NotPositiveDefinite
        );
    }
}
