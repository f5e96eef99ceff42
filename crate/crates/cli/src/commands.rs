//! One function per subcommand. Each writes its tables under `settings.out`.

use std::path::PathBuf;

use cvpoly::analysis::{
    fidelity_pure, linspace, plan_output, state_prep_input, sweep_bare, sweep_method1_exact, sweep_method1_postselect,
    sweep_method2, target_output, wigner, FidelityCurve, InputFamily, WignerGrid,
};
use cvpoly::gates::{solve_ancilla_method1, taylor_factorize, DiagonalUnitary, MonomialPlan};
use cvpoly::method1::{
    chain_method1_exact, fidelity_postselected, optimize_state_prep, postselect_ensemble, Method1Config,
};
use cvpoly::method2::{chain_method2, Method2Config};
use serde::Serialize;

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::output::{write_json, write_table, Table};

const FAMILIES: [InputFamily; 2] = [InputFamily::Fock, InputFamily::Coherent];

fn sweep_for(settings: &Settings, family: InputFamily) -> &[f64] {
    match family {
        InputFamily::Fock => &settings.params.fock_sweep,
        InputFamily::Coherent => &settings.params.coherent_sweep,
    }
}

fn single(name: &str, values: &[f64]) -> Result<f64> {
    match values {
        [v] => Ok(*v),
        _ => Err(CliError::Usage(format!(
            "this command takes a single --{name} value, got {}",
            values.len()
        ))),
    }
}

fn cubic(nu: f64) -> Result<(DiagonalUnitary, MonomialPlan)> {
    let u = DiagonalUnitary::cubic_phase(nu);
    let plan = taylor_factorize(&u, 1)?;
    Ok((u, plan))
}

fn finish(settings: &Settings, command: &str, tables: &[Table]) -> Result<Vec<PathBuf>> {
    tables
        .iter()
        .map(|t| write_table(&settings.out, command, &settings.params, t))
        .collect()
}

pub fn bare(settings: &Settings) -> Result<Vec<PathBuf>> {
    let mut tables = Vec::new();
    for family in FAMILIES {
        let mut t = Table::new(format!("bare_{}", family.name()), &["family", "x", "nu", "fidelity"]);
        for &nu in &settings.params.nu {
            let curve = sweep_bare(family, sweep_for(settings, family), nu, settings.grid)?;
            for (x, f) in curve.x_values.iter().zip(&curve.y_values) {
                t.push(vec![family.name().into(), (*x).into(), nu.into(), (*f).into()]);
            }
        }
        tables.push(t);
    }
    finish(settings, "bare", &tables)
}

const HERALDED: [&str; 6] = ["family", "x", "db", "delta", "fidelity", "success_prob"];

fn push_curve(t: &mut Table, curve: &FidelityCurve, db: f64, delta: Option<f64>) {
    for (i, (x, f)) in curve.x_values.iter().zip(&curve.y_values).enumerate() {
        let p = curve.success_probs.as_ref().map(|p| p[i]);
        t.push(vec![
            curve.input_family.name().into(),
            (*x).into(),
            db.into(),
            delta.into(),
            (*f).into(),
            p.into(),
        ]);
    }
}

/// Exact-outcome chain; no delta and no success probability.
pub fn method1(settings: &Settings) -> Result<Vec<PathBuf>> {
    let nu = single("nu", &settings.params.nu)?;
    let mut tables = Vec::new();
    for family in FAMILIES {
        let mut t = Table::new(format!("method1_{}", family.name()), &HERALDED);
        for &db in &settings.params.db {
            let curve = sweep_method1_exact(family, sweep_for(settings, family), nu, db, settings.grid)?;
            push_curve(&mut t, &curve, db, None);
        }
        tables.push(t);
    }
    finish(settings, "method1", &tables)
}

pub fn method1_postselect(settings: &Settings) -> Result<Vec<PathBuf>> {
    let nu = single("nu", &settings.params.nu)?;
    let mut tables = Vec::new();
    for family in FAMILIES {
        let mut t = Table::new(format!("method1_postselect_{}", family.name()), &HERALDED);
        for &db in &settings.params.db {
            for &delta in &settings.params.delta {
                let xs = sweep_for(settings, family);
                let curve = sweep_method1_postselect(family, xs, nu, db, delta, settings.params.nodes, settings.grid)?;
                push_curve(&mut t, &curve, db, Some(delta));
            }
        }
        tables.push(t);
    }
    finish(settings, "method1-postselect", &tables)
}

#[derive(Serialize)]
struct OptimizeSummary {
    nu: f64,
    db: f64,
    delta: f64,
    plain_nominal_outcomes: Vec<f64>,
    plain_success_prob: f64,
    plain_fidelity: f64,
    optimized_nominal_outcomes: Vec<f64>,
    optimized_success_prob: f64,
    optimized_fidelity: f64,
}

/// Known 5 dB momentum-squeezed input; compares `m = 0` outcomes with optimized ones.
pub fn method1_optimize(settings: &Settings) -> Result<Vec<PathBuf>> {
    let nu = single("nu", &settings.params.nu)?;
    let db = single("db", &settings.params.db)?;
    let delta = single("delta", &settings.params.delta)?;
    let (u, plan) = cubic(nu)?;
    let psi = state_prep_input(settings.grid)?;
    let target = target_output(&u, &psi)?;
    let plain = Method1Config::new(plan.clone(), db, delta)?.with_nodes(settings.params.nodes)?;
    let tuned = optimize_state_prep(&psi, &plan, plain.k, delta, &settings.scan)?.with_nodes(settings.params.nodes)?;

    let mut t = Table::new(
        "method1_optimize",
        &[
            "config",
            "step",
            "root_re",
            "root_im",
            "nominal_outcome",
            "ancilla_q0",
            "ancilla_p0",
            "ancilla_k",
        ],
    );
    let mut score = Vec::new();
    for (name, cfg) in [("plain", &plain), ("optimized", &tuned)] {
        for (j, (root, &m)) in cfg.plan.roots.iter().zip(&cfg.nominal_outcomes).enumerate() {
            let anc = solve_ancilla_method1(*root, cfg.k, m)?;
            t.push(vec![
                name.into(),
                (j as f64 + 1.0).into(),
                root.re.into(),
                root.im.into(),
                m.into(),
                anc.q0().into(),
                anc.p0().into(),
                anc.k.into(),
            ]);
        }
        let ens = postselect_ensemble(&psi, cfg)?;
        score.push((ens.region_prob, fidelity_postselected(&ens, &target)?));
    }
    let mut paths = finish(settings, "method1-optimize", &[t])?;
    let summary = OptimizeSummary {
        nu,
        db,
        delta,
        plain_nominal_outcomes: plain.nominal_outcomes.clone(),
        plain_success_prob: score[0].0,
        plain_fidelity: score[0].1,
        optimized_nominal_outcomes: tuned.nominal_outcomes.clone(),
        optimized_success_prob: score[1].0,
        optimized_fidelity: score[1].1,
    };
    let path = settings.out.join("method1_optimize_summary.json");
    write_json(&path, &summary)?;
    paths.push(path);
    Ok(paths)
}

pub fn method2(settings: &Settings) -> Result<Vec<PathBuf>> {
    let nu = single("nu", &settings.params.nu)?;
    let convention = settings.params.db_convention.to_core();
    let mut tables = Vec::new();
    for family in FAMILIES {
        let mut t = Table::new(
            format!("method2_{}", family.name()),
            &["family", "x", "db", "fidelity", "success_prob"],
        );
        for &db in &settings.params.db {
            let curve = sweep_method2(family, sweep_for(settings, family), nu, db, convention, settings.grid)?;
            let probs = curve.success_probs.clone().unwrap_or_default();
            for ((x, f), p) in curve.x_values.iter().zip(&curve.y_values).zip(probs) {
                t.push(vec![
                    family.name().into(),
                    (*x).into(),
                    db.into(),
                    (*f).into(),
                    p.into(),
                ]);
            }
        }
        tables.push(t);
    }
    finish(settings, "method2", &tables)
}

pub const WIGNER_HALF_WIDTH: f64 = 6.0;
pub const WIGNER_POINTS: usize = 241;
/// Relative depth below which a Wigner dip counts as a negative region.
pub const NEGATIVITY_THRESHOLD: f64 = 1e-3;

#[derive(Serialize)]
struct PanelSummary {
    panel: &'static str,
    file: String,
    min_w: f64,
    max_w: f64,
    negative_regions: usize,
    fidelity_vs_target: f64,
    success_prob: Option<f64>,
}

#[derive(Serialize)]
struct WignerSummary {
    nu: f64,
    db: f64,
    negativity_threshold: f64,
    panels: Vec<PanelSummary>,
}

fn wigner_table(name: &str, w: &WignerGrid) -> Table {
    let mut t = Table::new(name, &["q", "p", "W"]);
    for (q, row) in w.q_axis.iter().zip(&w.values) {
        for (p, v) in w.p_axis.iter().zip(row) {
            t.push(vec![(*q).into(), (*p).into(), (*v).into()]);
        }
    }
    t
}

/// Target, bare polynomial, method 1 and method 2 outputs for the state-preparation input.
pub fn wigner_panels(settings: &Settings) -> Result<Vec<PathBuf>> {
    let nu = single("nu", &settings.params.nu)?;
    let db = single("db", &settings.params.db)?;
    let (u, plan) = cubic(nu)?;
    let psi = state_prep_input(settings.grid)?;
    let target = target_output(&u, &psi)?;
    let m1 = chain_method1_exact(&psi, &Method1Config::new(plan.clone(), db, 1.0)?)?;
    let m2 = chain_method2(
        &psi,
        &Method2Config::new(plan.clone(), db)?.with_convention(settings.params.db_convention.to_core()),
    )?;
    let panels = [
        ("target", target.clone(), None),
        ("polynomial", plan_output(&plan, &psi)?, None),
        ("method1", m1, None),
        ("method2", m2.state, Some(m2.success_prob)),
    ];
    let axis = linspace(-WIGNER_HALF_WIDTH, WIGNER_HALF_WIDTH, WIGNER_POINTS);
    let mut tables = Vec::new();
    let mut summaries = Vec::new();
    for (panel, state, success_prob) in panels {
        let w = wigner(&state, &axis, &axis)?;
        let name = format!("wigner_{panel}");
        summaries.push(PanelSummary {
            panel,
            file: format!("{name}.csv"),
            min_w: w.min_value,
            max_w: w.max_value(),
            negative_regions: w.negative_regions(NEGATIVITY_THRESHOLD),
            fidelity_vs_target: fidelity_pure(&target, &state)?,
            success_prob,
        });
        tables.push(wigner_table(&name, &w));
    }
    let mut paths = finish(settings, "wigner", &tables)?;
    let path = settings.out.join("wigner_summary.json");
    write_json(
        &path,
        &WignerSummary {
            nu,
            db,
            negativity_threshold: NEGATIVITY_THRESHOLD,
            panels: summaries,
        },
    )?;
    paths.push(path);
    Ok(paths)
}
