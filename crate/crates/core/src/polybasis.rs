//! Quadrature and polynomial bases on the reference triangle
//! `{(0,0), (1,0), (0,1)}` and the reference segment `[0, 1]`.
//!
//! Scalar bases are orthonormal in `L²` of the reference triangle and
//! hierarchical: the first `dim P_m` functions of any basis of degree
//! `n ≥ m` span `P_m`. Embedding a lower-degree field into a higher-degree
//! space is therefore zero padding of its coefficient block.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const MAX_QUADRATURE_DEGREE: usize = 20;

/// Number of polynomials of total degree `≤ m` in two variables.
pub const fn dim_p(m: usize) -> usize {
    (m + 1) * (m + 2) / 2
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Orthonormal Legendre polynomial of degree `j` on `[0, 1]`.
pub fn legendre_unit(j: usize, t: f64) -> f64 {
    let x = 2.0 * t - 1.0;
    let p = if j == 0 {
        1.0
    } else {
        legendre_with_derivative(j, x).0
    };
    libm::sqrt(2.0 * j as f64 + 1.0) * p
}

#[derive(Debug, Clone)]
pub struct QuadratureRule<P> {
    pub points: Vec<P>,
    pub weights: Vec<f64>,
    pub exact_degree: usize,
}

impl<P> QuadratureRule<P> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

pub type TriangleRule = QuadratureRule<[f64; 2]>;
pub type SegmentRule = QuadratureRule<f64>;

/// Gauss–Legendre rule on `[0, 1]`, exact for polynomials of degree `≤ degree`.
pub fn quad_segment(degree: usize) -> Result<SegmentRule> {
    if degree > MAX_QUADRATURE_DEGREE {
        return Err(Error::UnsupportedQuadrature(degree));
    }
    let n = degree / 2 + 1;
    let (x, w) = gauss_legendre(n);
    Ok(QuadratureRule {
        points: x.iter().map(|&x| 0.5 * (x + 1.0)).collect(),
        weights: w.iter().map(|&w| 0.5 * w).collect(),
        exact_degree: degree,
    })
}

/// Collapsed (conical product) Gauss rule on the reference triangle.
///
/// Uses `ξ = u (1 - v)`, `η = v` with Gauss–Legendre in `u` and `v`; the
/// Jacobian `(1 - v)` raises the degree in `v` by one, so `⌊(d + 3) / 2⌋`
/// points per direction are needed.
pub fn quad_triangle(degree: usize) -> Result<TriangleRule> {
    if degree > MAX_QUADRATURE_DEGREE {
        return Err(Error::UnsupportedQuadrature(degree));
    }
    let n = (degree + 3) / 2;
    let (x, w) = gauss_legendre(n);
    let mut points = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&xv, &wv) in x.iter().zip(&w) {
        let v = 0.5 * (xv + 1.0);
        for (&xu, &wu) in x.iter().zip(&w) {
            let u = 0.5 * (xu + 1.0);
            points.push([u * (1.0 - v), v]);
            weights.push(0.25 * wu * wv * (1.0 - v));
        }
    }
    Ok(QuadratureRule {
        points,
        weights,
        exact_degree: degree,
    })
}

/// Exponents `(a, b)` of the monomials `x^a y^b` with `a + b ≤ m`, ordered
/// by total degree.
pub fn monomial_exponents(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(dim_p(m));
    for t in 0..=m {
        for j in 0..=t {
            out.push((t - j, j));
        }
    }
    out
}

fn powi(x: f64, n: usize) -> f64 {
    let mut r = 1.0;
    for _ in 0..n {
        r *= x;
    }
    r
}

const CENTER: f64 = 1.0 / 3.0;

/// Orthonormal basis of `P_m` on the reference triangle.
///
/// Built from monomials centred at the barycentre by two passes of modified
/// Gram–Schmidt against an exact quadrature.
#[derive(Debug, Clone)]
pub struct ScalarBasis {
    degree: usize,
    exponents: Vec<(usize, usize)>,
    /// Row `i` holds the monomial coefficients of basis function `i`.
    coeffs: Vec<Vec<f64>>,
}

impl ScalarBasis {
    pub fn new(degree: usize) -> Result<Self> {
        let exponents = monomial_exponents(degree);
        let n = exponents.len();
        let rule = quad_triangle(2 * degree)?;
        let mono_at = |p: &[f64; 2]| -> Vec<f64> {
            let (x, y) = (p[0] - CENTER, p[1] - CENTER);
            exponents.iter().map(|&(a, b)| powi(x, a) * powi(y, b)).collect()
        };
        let table: Vec<Vec<f64>> = rule.points.iter().map(mono_at).collect();
        let values = |c: &[f64]| -> Vec<f64> {
            table
                .iter()
                .map(|m| m.iter().zip(c).map(|(a, b)| a * b).sum())
                .collect()
        };
        let inner = |a: &[f64], b: &[f64]| -> f64 {
            rule.weights
                .iter()
                .zip(a.iter().zip(b))
                .map(|(w, (x, y))| w * x * y)
                .sum()
        };

        let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut vals: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = vec![0.0; n];
            c[i] = 1.0;
            let mut v = values(&c);
            for _ in 0..2 {
                for (cj, vj) in coeffs.iter().zip(&vals) {
                    let proj = inner(&v, vj);
                    for (a, b) in c.iter_mut().zip(cj) {
                        *a -= proj * b;
                    }
                    for (a, b) in v.iter_mut().zip(vj) {
                        *a -= proj * b;
                    }
                }
            }
            let norm = libm::sqrt(inner(&v, &v));
            c.iter_mut().for_each(|a| *a /= norm);
            v.iter_mut().for_each(|a| *a /= norm);
            coeffs.push(c);
            vals.push(v);
        }
        Ok(Self {
            degree,
            exponents,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn monomials(&self, p: [f64; 2]) -> Vec<f64> {
        let (x, y) = (p[0] - CENTER, p[1] - CENTER);
        self.exponents
            .iter()
            .map(|&(a, b)| powi(x, a) * powi(y, b))
            .collect()
    }

    /// Values of all basis functions at a reference point.
    pub fn eval(&self, p: [f64; 2]) -> Vec<f64> {
        let m = self.monomials(p);
        self.coeffs
            .iter()
            .map(|c| c.iter().zip(&m).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reference gradients of all basis functions at a reference point.
    pub fn eval_grad(&self, p: [f64; 2]) -> Vec<[f64; 2]> {
        let (x, y) = (p[0] - CENTER, p[1] - CENTER);
        let dm: Vec<[f64; 2]> = self
            .exponents
            .iter()
            .map(|&(a, b)| {
                let dx = if a > 0 {
                    a as f64 * powi(x, a - 1) * powi(y, b)
                } else {
                    0.0
                };
                let dy = if b > 0 {
                    b as f64 * powi(x, a) * powi(y, b - 1)
                } else {
                    0.0
                };
                [dx, dy]
            })
            .collect();
        self.coeffs
            .iter()
            .map(|c| {
                c.iter().zip(&dm).fold([0.0, 0.0], |acc, (a, d)| {
                    [acc[0] + a * d[0], acc[1] + a * d[1]]
                })
            })
            .collect()
    }

    /// `table[i][q]` = basis function `i` at point `q`.
    pub fn eval_table(&self, points: &[[f64; 2]]) -> Vec<Vec<f64>> {
        let per_point: Vec<Vec<f64>> = points.iter().map(|&p| self.eval(p)).collect();
        (0..self.dim())
            .map(|i| per_point.iter().map(|v| v[i]).collect())
            .collect()
    }

    /// `table[i][q]` = reference gradient of basis function `i` at point `q`.
    pub fn eval_grad_table(&self, points: &[[f64; 2]]) -> Vec<Vec<[f64; 2]>> {
        let per_point: Vec<Vec<[f64; 2]>> = points.iter().map(|&p| self.eval_grad(p)).collect();
        (0..self.dim())
            .map(|i| per_point.iter().map(|v| v[i]).collect())
            .collect()
    }

    /// Coefficients of the reference derivatives in the basis itself:
    /// `∂_ξ φ_j = Σ_i dxi[i][j] φ_i`, and likewise for `∂_η`.
    pub fn derivative_matrices(&self) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        let n = self.dim();
        let rule = quad_triangle(2 * self.degree)?;
        let vals = self.eval_table(&rule.points);
        let grads = self.eval_grad_table(&rule.points);
        let mut dxi = vec![vec![0.0; n]; n];
        let mut deta = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut sx = 0.0;
                let mut sy = 0.0;
                for (q, w) in rule.weights.iter().enumerate() {
                    sx += w * grads[j][q][0] * vals[i][q];
                    sy += w * grads[j][q][1] * vals[i][q];
                }
                // The reference triangle has measure 1/2 but the basis is
                // orthonormal, so the projection needs no rescaling.
                dxi[i][j] = sx;
                deta[i][j] = sy;
            }
        }
        Ok((dxi, deta))
    }
}

/// Monomials of exact total degree `k`: `x^{k-j} y^j`, `j = 0..=k`.
#[derive(Debug, Clone, Copy)]
pub struct HomogeneousBasis {
    degree: usize,
}

impl HomogeneousBasis {
    pub fn new(degree: usize) -> Self {
        Self { degree }
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    pub fn eval(&self, p: [f64; 2]) -> Vec<f64> {
        let k = self.degree;
        (0..=k).map(|j| powi(p[0], k - j) * powi(p[1], j)).collect()
    }
}
