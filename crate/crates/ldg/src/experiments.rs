//! The experiments behind `ldg run`.
//!
//! Each experiment yields an [`ExperimentReport`] (asserted checks) plus a
//! CSV table with fixed columns. Random test functions come from a
//! ChaCha8 stream seeded by the configured seed, so outputs are
//! reproducible.

use ldg_core::liftings::{jumps, lift_vector, lifted_divergence, lifted_gradient, normal_average, jump};
use ldg_core::mesh::FaceCase;
use ldg_core::report::{Check, ExperimentReport};
use ldg_core::solver::{
    assemble, convergence_study, min_eigenvalue, solve, strong_form_residual, ManufacturedSolution,
};
use ldg_core::spaces::{DgScalar, DgVector, Discretization};
use ldg_core::stability::{
    build_tau, check_upper_bound, equivalence_constants, face_case_residuals, norm_1h,
    poincare_constant, run_counterexample, tau_pairing,
};
use ldg_core::{BuiltinMesh, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{Experiment, MeshSource, RunConfig};
use crate::error::LdgError;
use crate::meshio::read_mesh;

/// Dense eigensolves are skipped above this many unknowns.
pub const DENSE_LIMIT: usize = 4000;

pub const CONVERGENCE_COLUMNS: [&str; 8] = [
    "level",
    "h",
    "dofs",
    "err_l2",
    "err_h1broken",
    "err_1h",
    "rate_l2",
    "rate_h1",
];

pub const STABILITY_COLUMNS: [&str; 12] = [
    "level",
    "cells",
    "h",
    "dofs",
    "ell",
    "c_min",
    "c_max",
    "c_min_raised",
    "c_max_raised",
    "poincare",
    "tau_ratio_max",
    "lower_bound_margin_min",
];

pub const CHECK_COLUMNS: [&str; 5] = ["name", "value", "threshold", "relation", "pass"];

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn checks(report: &ExperimentReport) -> Self {
        let mut t = Table::new(&CHECK_COLUMNS);
        for c in &report.checks {
            t.rows.push(vec![
                c.name.clone(),
                num(c.value),
                num(c.threshold),
                serde_json::to_value(c.relation)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                c.pass.to_string(),
            ]);
        }
        t
    }
}

/// Full-precision, locale-independent number formatting.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub report: ExperimentReport,
    pub table: Table,
    /// Experiment-specific data stored alongside the report in JSON.
    pub data: serde_json::Value,
}

pub fn load_mesh(source: &MeshSource) -> Result<Mesh, LdgError> {
    match source {
        MeshSource::Builtin(m) => Ok(m.build()?),
        MeshSource::File(p) => read_mesh(p),
    }
}

fn face_regular_discretization(mesh: Mesh, k: usize) -> Result<Discretization, LdgError> {
    let d = Discretization::new(mesh, k)?;
    if !d.skeleton().is_face_regular() {
        return Err(ldg_core::Error::NotFaceRegular.into());
    }
    Ok(d)
}

fn random_scalar(d: &Discretization, rng: &mut ChaCha8Rng) -> DgScalar {
    let c = (0..d.scalar_dofs(d.k())).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DgScalar::from_coeffs(d, d.k(), c).expect("length matches")
}

fn random_vector(d: &Discretization, degree: usize, rng: &mut ChaCha8Rng) -> DgVector {
    let c = (0..d.vector_dofs(degree)).map(|_| rng.gen_range(-1.0..1.0)).collect();
    DgVector::from_coeffs(d, degree, c).expect("length matches")
}

pub fn counterexample() -> Result<ExperimentOutput, LdgError> {
    let report = run_counterexample()?;
    Ok(ExperimentOutput {
        table: Table::checks(&report),
        data: json!({}),
        report,
    })
}

pub fn stability(config: &RunConfig) -> Result<ExperimentOutput, LdgError> {
    let (k, ell) = (config.k, config.ell);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut mesh = load_mesh(&config.mesh)?;
    let mut table = Table::new(&STABILITY_COLUMNS);
    let mut checks = Vec::new();
    let mut raised_c_min: Vec<f64> = Vec::new();
    let mut tau_ratios: Vec<f64> = Vec::new();
    let mut last = (None, None);
    for level in 0..config.levels {
        if level > 0 {
            mesh = mesh.refine_uniform();
        }
        let d = face_regular_discretization(mesh.clone(), k)?;
        let dofs = d.scalar_dofs(k);
        let dense = dofs <= DENSE_LIMIT;
        let selected = dense.then(|| equivalence_constants(&d, ell)).transpose()?;
        let raised = if ell == k + 1 {
            selected
        } else {
            dense.then(|| equivalence_constants(&d, k + 1)).transpose()?
        };
        let poincare = dense.then(|| poincare_constant(&d)).transpose()?;
        let (mut ratio_max, mut margin_min) = (0.0f64, f64::INFINITY);
        for _ in 0..20 {
            let u = random_scalar(&d, &mut rng);
            let tau = build_tau(&d, &u)?;
            let n = norm_1h(&d, &u)?.value;
            ratio_max = ratio_max.max(check_upper_bound(&d, &u, &tau)?);
            margin_min = margin_min.min(tau_pairing(&d, &u, &tau)? - 0.5 * n * n);
        }
        tau_ratios.push(ratio_max);
        checks.push(Check::at_least(format!("lower_bound_margin_level{level}"), margin_min, -1e-10));
        if let Some(r) = raised {
            checks.push(Check::at_least(format!("c_min_raised_level{level}"), r.c_min, 1e-8));
            if let Some(&prev) = raised_c_min.last() {
                checks.push(Check::at_most(
                    format!("c_min_drift_level{level}"),
                    (r.c_min - prev).abs() / prev,
                    0.2,
                ));
            }
            raised_c_min.push(r.c_min);
        }
        if let (Some(s), MeshSource::Builtin(BuiltinMesh::CrissCross), 0) = (selected, &config.mesh, level) {
            if ell == k {
                checks.push(Check::at_most("equal_order_c_min_criss_cross", s.c_min, 1e-8));
            }
        }
        let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
        table.rows.push(vec![
            level.to_string(),
            d.num_cells().to_string(),
            num(d.mesh().h()),
            dofs.to_string(),
            ell.to_string(),
            opt(selected.map(|s| s.c_min)),
            opt(selected.map(|s| s.c_max)),
            opt(raised.map(|s| s.c_min)),
            opt(raised.map(|s| s.c_max)),
            opt(poincare),
            num(ratio_max),
            num(margin_min),
        ]);
        last = (selected.map(|s| s.c_min), selected.map(|s| s.c_max));
    }
    if tau_ratios.len() > 1 {
        let lo = tau_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tau_ratios.iter().cloned().fold(0.0, f64::max);
        checks.push(Check::at_most("tau_ratio_variation", (hi - lo) / lo, 0.5));
    }
    Ok(ExperimentOutput {
        report: ExperimentReport {
            experiment: Experiment::Stability.name().to_string(),
            mesh: config.mesh.label(),
            k,
            ell,
            c_min: last.0,
            c_max: last.1,
            checks,
        },
        table,
        data: json!({ "comparison_mode": config.comparison_mode() }),
    })
}

pub fn identities(config: &RunConfig) -> Result<ExperimentOutput, LdgError> {
    let k = config.k;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let d = face_regular_discretization(load_mesh(&config.mesh)?, k)?;

    let mut lifting = 0.0f64;
    let mut ibp = 0.0f64;
    for _ in 0..100 {
        let sigma = random_vector(&d, k + 1, &mut rng);
        let v = random_scalar(&d, &mut rng);
        let g = lifted_gradient(&d, &v, k + 1)?;
        let dv = lifted_divergence(&d, &sigma)?;
        let scale = sigma.l2_norm(&d) * g.l2_norm(&d) + dv.l2_norm(&d) * v.l2_norm(&d);
        ibp = ibp.max((sigma.l2_inner(&d, &g) + dv.l2_inner(&d, &v)).abs() / scale);

        let r = lift_vector(&d, &jumps(&d, &v), k + 1)?;
        let mut pairing = 0.0;
        for fi in 0..d.faces().len() {
            let avg = normal_average(&d, &sigma, fi);
            let j = jump(&d, &v, fi);
            let w = &d.face_table(fi).weights;
            pairing += (0..w.len()).map(|q| w[q] * j[q] * avg[q]).sum::<f64>();
        }
        let lhs = r.l2_inner(&d, &sigma);
        lifting = lifting.max((lhs - pairing).abs() / (r.l2_norm(&d) * sigma.l2_norm(&d)).max(f64::MIN_POSITIVE));
    }

    let mut case_residual = 0.0f64;
    let mut margin = f64::INFINITY;
    let mut cases = [0usize; 3];
    for _ in 0..50 {
        let u = random_scalar(&d, &mut rng);
        let tau = build_tau(&d, &u)?;
        for r in face_case_residuals(&d, &u, &tau) {
            case_residual = case_residual.max(r.residual);
            cases[match r.case {
                FaceCase::Case1 => 0,
                FaceCase::Case2 => 1,
                FaceCase::Case3 => 2,
            }] += 1;
        }
        let n = norm_1h(&d, &u)?.value;
        margin = margin.min(tau_pairing(&d, &u, &tau)? - 0.5 * n * n);
    }

    let mut checks = vec![
        Check::at_most("lifting_identity_relative_defect", lifting, 1e-11),
        Check::at_most("ibp_relative_defect", ibp, 1e-11),
        Check::at_most("three_case_max_residual", case_residual, 1e-10),
        Check::at_least("lower_bound_margin", margin, -1e-10),
    ];
    let sinsin = ManufacturedSolution::sinsin();
    let loads: [(&str, fn([f64; 2]) -> f64); 2] = [("constant", |_| 1.0), ("sinsin", sinsin.f)];
    for (name, f) in loads {
        let system = assemble(&d, f)?;
        if name == "constant" {
            checks.push(Check::at_most(
                "stiffness_asymmetry",
                system.matrix.asymmetry() / system.matrix.max_abs(),
                1e-12,
            ));
            if d.scalar_dofs(k) <= DENSE_LIMIT {
                checks.push(Check::at_least("stiffness_min_eigenvalue", min_eigenvalue(&system), f64::MIN_POSITIVE));
            }
        }
        let sol = solve(&d, &system, config.solver.into())?;
        checks.push(Check::at_most(format!("solve_relative_residual_{name}"), sol.relative_residual, 1e-10));
        let r = strong_form_residual(&d, &sol.u, &system.projected_load)?;
        checks.push(Check::at_most(
            format!("strong_form_relative_{name}"),
            r.residual / r.load_max,
            1e-9,
        ));
    }
    let report = ExperimentReport {
        experiment: Experiment::Identities.name().to_string(),
        mesh: config.mesh.label(),
        k,
        ell: k + 1,
        c_min: None,
        c_max: None,
        checks,
    };
    Ok(ExperimentOutput {
        table: Table::checks(&report),
        data: json!({ "face_case_counts": { "case1": cases[0], "case2": cases[1], "case3": cases[2] } }),
        report,
    })
}

pub fn convergence(config: &RunConfig) -> Result<ExperimentOutput, LdgError> {
    let k = config.k;
    let mesh = load_mesh(&config.mesh)?;
    face_regular_discretization(mesh.clone(), k)?;
    let exact = ManufacturedSolution::sinsin();
    let study = convergence_study(&mesh, config.levels, k, &exact, config.solver.into())?;
    let mut table = Table::new(&CONVERGENCE_COLUMNS);
    for (i, e) in study.levels.iter().enumerate() {
        let rate = |r: &[f64]| if i == 0 { String::new() } else { num(r[i - 1]) };
        table.rows.push(vec![
            i.to_string(),
            num(e.h),
            e.dofs.to_string(),
            num(e.err_l2),
            num(e.err_h1_broken),
            num(e.err_1h),
            rate(&study.rates_l2),
            rate(&study.rates_h1),
        ]);
    }
    let l2 = *study.rates_l2.last().expect("at least three levels");
    let h1 = *study.rates_h1.last().expect("at least three levels");
    let report = ExperimentReport {
        experiment: Experiment::Convergence.name().to_string(),
        mesh: config.mesh.label(),
        k,
        ell: k + 1,
        c_min: None,
        c_max: None,
        checks: vec![
            Check::at_least("rate_l2_finest", l2, k as f64 + 0.75),
            Check::at_least("rate_h1_finest", h1, k as f64 - 0.25),
        ],
    };
    Ok(ExperimentOutput {
        report,
        table,
        data: serde_json::to_value(&study)?,
    })
}

/// Runs one experiment, or all of them in a fixed order.
pub fn run_experiments(config: &RunConfig) -> Result<Vec<ExperimentOutput>, LdgError> {
    let order = match config.experiment {
        Experiment::All => vec![
            Experiment::Counterexample,
            Experiment::Stability,
            Experiment::Identities,
            Experiment::Convergence,
        ],
        e => vec![e],
    };
    order
        .into_iter()
        .map(|e| match e {
            Experiment::Counterexample => counterexample(),
            Experiment::Stability => stability(config),
            Experiment::Identities => identities(config),
            Experiment::Convergence => convergence(config),
            Experiment::All => unreachable!("expanded above"),
        })
        .collect()
}
