//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ldg_core::liftings::{average, lifted_divergence, lifted_gradient};
use ldg_core::mesh::{BuiltinMesh, FaceCase, Mesh};
use ldg_core::polybasis::legendre_unit;
use ldg_core::solver::{
    assemble, convergence_study, min_eigenvalue, solve, strong_form_residual, LinearSolver,
    ManufacturedSolution,
};
use ldg_core::spaces::{DgScalar, DgVector, Discretization, RtnMomentSystem};
use ldg_core::stability::{
    build_tau, check_upper_bound, counterexample_function, equivalence_constants,
    face_case_residuals, norm_1h, tau_pairing,
};
use ldg_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn disc(m: BuiltinMesh, k: usize) -> Discretization {
    Discretization::new(m.build().expect("builtin mesh"), k).expect("discretization")
}

fn random_scalar(d: &Discretization, rng: &mut ChaCha8Rng) -> DgScalar {
    let c = (0..d.scalar_dofs(d.k())).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DgScalar::from_coeffs(d, d.k(), c).unwrap()
}

fn random_vector(d: &Discretization, degree: usize, rng: &mut ChaCha8Rng) -> DgVector {
    let c = (0..d.vector_dofs(degree)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DgVector::from_coeffs(d, degree, c).unwrap()
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("runtime {elapsed:?} exceeds {limit:?}"))
    }
}

fn counterexample() -> Outcome {
    let start = Instant::now();
    let d = disc(BuiltinMesh::CrissCross, 1);
    let u = counterexample_function(&d).map_err(|e| e.to_string())?;
    let norm = norm_1h(&d, &u).unwrap().value;
    let ratio = lifted_gradient(&d, &u, 1).unwrap().l2_norm(&d) / norm;
    let avg = d
        .skeleton()
        .interior_faces()
        .flat_map(|(fi, _)| average(&d, &u, fi))
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let (rule, vals) = d.cell_rule();
    let mean = (0..d.num_cells())
        .map(|c| {
            let uc = u.cell(c);
            let s: f64 = (0..rule.len())
                .map(|q| rule.weights[q] * (0..uc.len()).map(|i| uc[i] * vals[i][q]).sum::<f64>())
                .sum();
            (d.geometry(c).det * s).abs()
        })
        .fold(0.0f64, f64::max);
    within(start.elapsed(), Duration::from_secs(1))?;
    let msg = format!("|G~u|/|u|_1h = {ratio:.2e}, max|{{u}}| = {avg:.2e}, max|mean| = {mean:.2e}");
    if ratio <= 1e-10 && avg <= 1e-13 && mean <= 1e-13 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn positivity() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in [1, 2] {
        for m in [BuiltinMesh::CrissCross, BuiltinMesh::Fig1Left] {
            let c = equivalence_constants(&disc(m, k), k + 1).unwrap().c_min;
            ok &= c > 0.0;
            lines.push(format!("{m} k={k}: {c:.4}"));
        }
        let mut prev: Option<f64> = None;
        for n in [2, 4, 8] {
            let c = equivalence_constants(&disc(BuiltinMesh::UnitSquare(n), k), k + 1)
                .unwrap()
                .c_min;
            ok &= c > 0.0;
            if let Some(p) = prev {
                let drift = (c - p).abs() / p;
                ok &= drift < 0.2;
                lines.push(format!("unit_square({n}) k={k}: {c:.4} (drift {:.1}%)", 100.0 * drift));
            } else {
                lines.push(format!("unit_square({n}) k={k}: {c:.4}"));
            }
            prev = Some(c);
        }
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn three_cases() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let d = disc(BuiltinMesh::Fig1Left, 1);
    let mut worst = 0.0f64;
    let mut seen = [false; 3];
    for _ in 0..50 {
        let u = random_scalar(&d, &mut rng);
        let tau = build_tau(&d, &u).map_err(|e| e.to_string())?;
        for r in face_case_residuals(&d, &u, &tau) {
            worst = worst.max(r.residual);
            seen[match r.case {
                FaceCase::Case1 => 0,
                FaceCase::Case2 => 1,
                FaceCase::Case3 => 2,
            }] = true;
        }
    }
    let msg = format!("max residual {worst:.2e}, cases seen {seen:?}");
    if worst <= 1e-10 && seen == [true; 3] {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn lower_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(401);
    let mut worst = f64::INFINITY;
    for m in BuiltinMesh::FACE_REGULAR {
        for k in [1, 2] {
            let d = disc(m, k);
            for _ in 0..50 {
                let u = random_scalar(&d, &mut rng);
                let tau = build_tau(&d, &u).map_err(|e| e.to_string())?;
                let n = norm_1h(&d, &u).unwrap().value;
                worst = worst.min(tau_pairing(&d, &u, &tau).unwrap() - 0.5 * n * n);
            }
        }
    }
    let msg = format!("min (G_h u, tau) - |u|^2/2 = {worst:.3e}");
    if worst >= -1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn upper_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(501);
    let mut maxima = Vec::new();
    for n in [2, 4, 8] {
        let d = disc(BuiltinMesh::UnitSquare(n), 1);
        let mut m = 0.0f64;
        for _ in 0..50 {
            let u = random_scalar(&d, &mut rng);
            let tau = build_tau(&d, &u).map_err(|e| e.to_string())?;
            m = m.max(check_upper_bound(&d, &u, &tau).unwrap());
        }
        maxima.push(m);
    }
    let lo = maxima.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = maxima.iter().cloned().fold(0.0, f64::max);
    let variation = (hi - lo) / lo;
    let msg = format!("max ratios {maxima:.4?}, variation {:.1}%", 100.0 * variation);
    if variation < 0.5 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn ibp() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    let mut worst = 0.0f64;
    for m in BuiltinMesh::FACE_REGULAR {
        for k in [1, 2] {
            let d = disc(m, k);
            for _ in 0..100 {
                let sigma = random_vector(&d, k + 1, &mut rng);
                let v = random_scalar(&d, &mut rng);
                let g = lifted_gradient(&d, &v, k + 1).unwrap();
                let dv = lifted_divergence(&d, &sigma).unwrap();
                let defect = sigma.l2_inner(&d, &g) + dv.l2_inner(&d, &v);
                let scale = sigma.l2_norm(&d) * g.l2_norm(&d) + dv.l2_norm(&d) * v.l2_norm(&d);
                worst = worst.max(defect.abs() / scale);
            }
        }
    }
    let msg = format!("max relative defect {worst:.2e}");
    if worst <= 1e-11 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn strong_form() -> Outcome {
    let sinsin = ManufacturedSolution::sinsin();
    let loads: [(&str, fn([f64; 2]) -> f64); 2] = [("f=1", |_| 1.0), ("sinsin", sinsin.f)];
    let mut worst = 0.0f64;
    let meshes = BuiltinMesh::FACE_REGULAR
        .into_iter()
        .chain([BuiltinMesh::UnitSquare(8)]);
    for m in meshes {
        for k in [1, 2] {
            let d = disc(m, k);
            for (_, f) in loads {
                let s = assemble(&d, f).unwrap();
                let sol = solve(&d, &s, LinearSolver::ConjugateGradient).map_err(|e| e.to_string())?;
                let r = strong_form_residual(&d, &sol.u, &s.projected_load).unwrap();
                worst = worst.max(r.residual / r.load_max);
            }
        }
    }
    let msg = format!("max |-D(Gu) - Pf| / |Pf|_inf = {worst:.2e}");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn convergence() -> Outcome {
    let start = Instant::now();
    let base = BuiltinMesh::UnitSquare(2).build().unwrap();
    let ms = ManufacturedSolution::sinsin();
    let mut lines = Vec::new();
    let mut ok = true;
    for k in [1, 2] {
        let study = convergence_study(&base, 4, k, &ms, LinearSolver::ConjugateGradient)
            .map_err(|e| e.to_string())?;
        let l2 = *study.rates_l2.last().unwrap();
        let h1 = *study.rates_h1.last().unwrap();
        ok &= l2 >= k as f64 + 0.85 && h1 >= k as f64 - 0.15;
        lines.push(format!("k={k}: L2 rate {l2:.3}, H1 rate {h1:.3}"));
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn well_shaped_triangle(rng: &mut ChaCha8Rng) -> Mesh {
    loop {
        let p: Vec<[f64; 2]> = (0..3)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let Ok(mesh) = Mesh::new(p, vec![[0, 1, 2]]) else {
            continue;
        };
        if mesh.shape_ratio(0) < 8.0 {
            return mesh;
        }
    }
}

fn rtn_unisolvence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    let (mut round_trip, mut trace) = (0.0f64, 0.0f64);
    for k in 1..=4 {
        for _ in 0..100 {
            let d = Discretization::new(well_shaped_triangle(&mut rng), k).unwrap();
            let sys = RtnMomentSystem::new(&d, 0).map_err(|e| e.to_string())?;
            let interior: Vec<f64> = (0..sys.num_interior()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut face: Vec<f64> = (0..sys.num_face()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let edge = rng.gen_range(0..3);
            face[sys.face_range(edge)].iter_mut().for_each(|m| *m = 0.0);
            let block = sys.from_moments(&interior, &face).unwrap();
            let (i2, f2) = sys.moments(&block);
            for (a, b) in interior.iter().chain(&face).zip(i2.iter().chain(&f2)) {
                round_trip = round_trip.max((a - b).abs());
            }
            let tau = DgVector::from_coeffs(&d, k + 1, block).unwrap();
            let mesh = d.mesh();
            let [a, b] = mesh.edge_vertices(0, edge).map(|v| mesh.vertices()[v]);
            let n = mesh.edge_normal(0, edge);
            for s in 0..=20 {
                let t = s as f64 / 20.0;
                let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                let v = tau.eval(&d, 0, x);
                trace = trace.max((v[0] * n[0] + v[1] * n[1]).abs());
            }
            // the Legendre moments use the same edge parametrization
            let _ = legendre_unit(0, 0.0);
        }
    }
    let msg = format!("max round-trip error {round_trip:.2e}, max normal trace on zeroed edge {trace:.2e}");
    if round_trip <= 1e-10 && trace <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn well_posedness() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for m in BuiltinMesh::FACE_REGULAR {
        for k in [1, 2] {
            let d = disc(m, k);
            let lambda = min_eigenvalue(&assemble(&d, |_| 1.0).unwrap());
            ok &= lambda > 0.0;
            lines.push(format!("{m} k={k}: {lambda:.3e}"));
        }
    }
    match assemble(&disc(BuiltinMesh::Fig1Right, 1), |_| 1.0) {
        Err(e @ Error::NotFaceRegular) => lines.push(format!("fig1_right refused: {e}")),
        other => {
            ok = false;
            lines.push(format!("fig1_right not refused: {:?}", other.map(|_| ())));
        }
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("counterexample", counterexample),
        ("positivity", positivity),
        ("three_case_identity", three_cases),
        ("lower_bound", lower_bound),
        ("upper_bound", upper_bound),
        ("ibp_identity", ibp),
        ("strong_form", strong_form),
        ("convergence", convergence),
        ("rtn_unisolvence", rtn_unisolvence),
        ("well_posedness", well_posedness),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name} ({secs:.2}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
