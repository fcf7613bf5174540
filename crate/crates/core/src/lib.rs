//! Penalty-free local discontinuous Galerkin (LDG) discretization on 2D
//! simplicial meshes with hanging nodes.
//!
//! The lifted gradient `G_h u = ∇_h u - r_h([[u]])` uses a lifting of one
//! polynomial degree higher than the scalar space. With that choice the
//! bilinear form `a_h(u, v) = (G_h u, G_h v)` is coercive in the broken
//! `‖·‖_{1,h}` norm without any jump penalty, on every face-regular mesh.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports on disk
//! and the command line live in the `ldg` companion crate.
//!
//! Module map:
//!
//! * [`mesh`]: triangles, face enumeration across hanging nodes, face regularity.
//! * [`polybasis`]: quadrature and orthonormal polynomial bases on the reference triangle.
//! * [`spaces`]: discontinuous scalar/vector spaces, L² projection, local RTN moment systems.
//! * [`liftings`]: jumps, averages, liftings, lifted gradient and divergence.
//! * [`stability`]: the `‖·‖_{1,h}` norm, the test field τ_h, norm equivalence constants.
//! * [`solver`]: Poisson assembly, linear solve, strong-form residual, convergence studies.
#![no_std]

extern crate alloc;

pub mod error;
pub mod linalg;
pub mod liftings;
pub mod mesh;
pub mod polybasis;
pub mod report;
pub mod solver;
pub mod sparse;
pub mod spaces;
pub mod stability;

pub use error::{Error, Result};
pub use mesh::{BuiltinMesh, Face, FaceCase, FaceKind, Mesh, Point, Side, Skeleton};
pub use report::{Check, ExperimentReport};
pub use spaces::{DgScalar, DgVector, Discretization};
