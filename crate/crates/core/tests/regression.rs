//! Frozen norm-equivalence constants for the degree-raised lifting.
//! A change beyond the tolerance signals a change in the discretization.

use approx::assert_relative_eq;
use ldg_core::mesh::BuiltinMesh;
use ldg_core::spaces::Discretization;
use ldg_core::stability::{equivalence_constants, poincare_constant};

// (mesh, k, c_min, c_max, poincare)
const BASELINES: &[(BuiltinMesh, usize, f64, f64, f64)] = &[
    (BuiltinMesh::CrissCross, 1, 9.096056673478063e-1, 4.916565623474251e0, 1.056847680503709e0),
    (BuiltinMesh::CrissCross, 2, 8.334852606145122e-1, 6.348645707577201e0, 1.082160085519830e0),
    (BuiltinMesh::CrissCross, 3, 7.471121782276635e-1, 7.772001872658761e0, 1.082402417729756e0),
    (BuiltinMesh::CrissCross, 4, 6.936798103672353e-1, 9.191254620404356e0, 1.082409237882802e0),
    (BuiltinMesh::Fig1Left, 1, 1.040831624379765e0, 4.451727877473484e0, 7.351799823665243e-1),
    (BuiltinMesh::Fig1Left, 2, 8.328992556349636e-1, 5.796135021113882e0, 7.651723753575324e-1),
    (BuiltinMesh::Fig1Left, 3, 7.494841327984524e-1, 7.073961871915015e0, 7.653118563040893e-1),
    (BuiltinMesh::Fig1Left, 4, 6.904787023985914e-1, 8.388348579492336e0, 7.653788859712496e-1),
    (BuiltinMesh::TwoTriangle, 1, 1.453388468210065e0, 3.489036578511079e0, 5.129223571889904e-1),
    (BuiltinMesh::TwoTriangle, 2, 8.737084136919610e-1, 4.513705479973255e0, 5.410381949184894e-1),
    (BuiltinMesh::UnitSquare(2), 1, 9.065395688005392e-1, 3.545990108296422e0, 4.398146547280363e-1),
    (BuiltinMesh::UnitSquare(2), 2, 7.915624098109286e-1, 4.531136123519860e0, 4.489808843838642e-1),
];

#[test]
fn equivalence_constants_match_baselines() {
    for &(mesh, k, c_min, c_max, poincare) in BASELINES {
        let d = Discretization::new(mesh.build().unwrap(), k).unwrap();
        let r = equivalence_constants(&d, k + 1).unwrap();
        assert_relative_eq!(r.c_min, c_min, max_relative = 1e-8);
        assert_relative_eq!(r.c_max, c_max, max_relative = 1e-8);
        assert_relative_eq!(poincare_constant(&d).unwrap(), poincare, max_relative = 1e-8);
    }
}

#[test]
fn equal_order_lifting_has_a_kernel_on_criss_cross() {
    for k in 1..=2 {
        let d = Discretization::new(BuiltinMesh::CrissCross.build().unwrap(), k).unwrap();
        assert!(equivalence_constants(&d, k).unwrap().c_min <= 1e-8);
    }
}
