//! Fast routines against the two-mode simulation, plus normalization checks.

use std::path::PathBuf;

use cvpoly::analysis::{
    bare_polynomial_fidelity, fidelity_pure, input_state, state_prep_input, target_output, InputFamily,
};
use cvpoly::gates::{solve_ancilla_method1, solve_ancilla_method2, taylor_factorize, DiagonalUnitary, Protocol};
use cvpoly::method1::{
    chain_method1_exact, gaussian_moment_pdf, homodyne_pdf, step_method1, AnalyticInput, Method1Config,
};
use cvpoly::method2::{chain_method2, detection_distribution, step_method2, Method2Config};
use cvpoly::oracle::{oracle_step, OracleGrid, OracleOutcome};
use cvpoly::states::{
    db_to_k, inner, make_coherent, make_fock, Grid, Ladder, SqueezeConvention, SqueezedParams, WaveFunction,
};
use cvpoly::Complex64;
use serde::Serialize;

use crate::config::Settings;
use crate::error::{CliError, Result};
use crate::output::write_json;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub pass: bool,
    pub nu: f64,
    pub db: Vec<f64>,
    pub checks: Vec<Check>,
}

fn deficit(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    Ok(1.0 - inner(a, b)?.norm() / (a.norm_sq() * b.norm_sq()).sqrt())
}

fn inputs(g: Grid) -> Result<Vec<(AnalyticInput, WaveFunction)>> {
    let one = Complex64::new(1.0, 0.0);
    Ok(vec![
        (AnalyticInput::Fock(0), make_fock(0, g)?),
        (AnalyticInput::Fock(1), make_fock(1, g)?),
        (AnalyticInput::Coherent(one), make_coherent(one, g)?),
    ])
}

struct Checks {
    override_tol: Option<f64>,
    list: Vec<Check>,
}

impl Checks {
    fn add(&mut self, name: &'static str, residual: f64, tolerance: f64) {
        let tolerance = self.override_tol.unwrap_or(tolerance);
        // NaN residuals fail
        let pass = residual < tolerance;
        self.list.push(Check {
            name,
            residual,
            tolerance,
            pass,
        });
    }
}

/// Fidelities that should not move when the grid is refined.
fn refinement_probes(nu: f64, grid: Grid) -> Result<Vec<f64>> {
    let u = DiagonalUnitary::cubic_phase(nu);
    let plan = taylor_factorize(&u, 1)?;
    let psi = state_prep_input(grid)?;
    let target = target_output(&u, &psi)?;
    let m1 = chain_method1_exact(&psi, &Method1Config::new(plan.clone(), 5.0, 0.1)?)?;
    let m2 = chain_method2(&psi, &Method2Config::new(plan.clone(), 5.0)?)?;
    let mut out = vec![fidelity_pure(&target, &m1)?, fidelity_pure(&target, &m2.state)?];
    for n in [0.0, 3.0, 10.0] {
        for family in [InputFamily::Fock, InputFamily::Coherent] {
            out.push(bare_polynomial_fidelity(&u, &plan, &input_state(family, n, grid)?)?);
        }
    }
    Ok(out)
}

pub fn run(settings: &Settings, grid_refine: bool) -> Result<(Report, PathBuf)> {
    let nu = match settings.params.nu.as_slice() {
        [v] => *v,
        v => {
            return Err(CliError::Usage(format!(
                "verify takes a single --nu value, got {}",
                v.len()
            )))
        }
    };
    let plan = taylor_factorize(&DiagonalUnitary::cubic_phase(nu), 1)?;
    let mut checks = Checks {
        override_tol: settings.tolerance,
        list: Vec::new(),
    };

    // the anti-squeezed photon-subtracted ancilla needs the wider box
    let g1 = OracleGrid::square(25.0, 2048)?.grid1;
    let g2 = OracleGrid::default().grid1;
    let (mut step1, mut step2, mut prob2) = (0.0f64, 0.0f64, 0.0f64);
    for &db in &settings.params.db {
        let k1 = db_to_k(db, SqueezeConvention::AntiSqueezedQ);
        let k2 = db_to_k(db, settings.params.db_convention.to_core());
        for &root in &plan.roots {
            let mo = -root.re;
            let anc1 = solve_ancilla_method1(root, k1, mo)?;
            for (_, psi) in inputs(g1)? {
                let (fast, _) = step_method1(&psi, &anc1, mo)?;
                let (slow, _) = oracle_step(
                    &psi,
                    Protocol::PhotonSubtracted,
                    &anc1,
                    OracleOutcome::Homodyne(mo),
                    Ladder::Annihilate,
                )?;
                step1 = step1.max(deficit(&fast, &slow)?);
            }
            let anc2 = solve_ancilla_method2(root, k2)?;
            for (_, psi) in inputs(g2)? {
                let (fast, p) = step_method2(&psi, &anc2)?;
                let (slow, q) = oracle_step(
                    &psi,
                    Protocol::SinglePhotonCounter,
                    &anc2,
                    OracleOutcome::Photons(1),
                    Ladder::Annihilate,
                )?;
                step2 = step2.max(deficit(&fast, &slow)?);
                prob2 = prob2.max((p - q).abs());
            }
        }
    }
    checks.add("method1_step_vs_oracle", step1, 1e-5);
    checks.add("method2_step_vs_oracle", step2, 1e-5);
    checks.add("method2_probability_vs_oracle", prob2, 1e-6);

    let k = db_to_k(5.0, SqueezeConvention::AntiSqueezedQ);
    let ancillas = [
        SqueezedParams::from_quadratures(0.0, 0.0, k)?,
        solve_ancilla_method1(plan.roots[plan.roots.len() / 2], k, 1.0)?,
    ];
    let (mut dens, mut moments) = (0.0f64, 0.0f64);
    for anc in &ancillas {
        for (kind, psi) in inputs(g2)? {
            let pdf = homodyne_pdf(&psi, anc)?;
            for i in 0..11 {
                let m = -1.0 + 0.2 * i as f64;
                let (_, d) = oracle_step(
                    &psi,
                    Protocol::PhotonSubtracted,
                    anc,
                    OracleOutcome::Homodyne(m),
                    Ladder::Annihilate,
                )?;
                dens = dens.max((pdf.density(m) - d).abs());
                moments = moments.max((gaussian_moment_pdf(kind, anc, m)? - pdf.density(m)).abs());
            }
        }
    }
    checks.add("homodyne_density_vs_oracle", dens, 1e-5);
    checks.add("homodyne_density_vs_moments", moments, 1e-8);

    let psi = state_prep_input(settings.grid)?;
    let anc2 = solve_ancilla_method2(plan.roots[0], db_to_k(5.0, SqueezeConvention::SqueezedQ))?;
    let total: f64 = detection_distribution(&psi, &anc2, 40)?.iter().sum();
    checks.add("photon_count_completeness", (total - 1.0).abs(), 1e-6);
    let vac = make_fock(0, settings.grid)?;
    let integral = homodyne_pdf(&vac, &ancillas[0])?.window_probability(0.0, 12.0, 96)?;
    checks.add("homodyne_normalization", (integral - 1.0).abs(), 1e-6);

    if grid_refine {
        let coarse = refinement_probes(nu, settings.grid)?;
        let fine = refinement_probes(nu, settings.grid.refined())?;
        let delta = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        checks.add("grid_refinement_delta", delta, 1e-6);
    }

    let report = Report {
        pass: checks.list.iter().all(|c| c.pass),
        nu,
        db: settings.params.db.clone(),
        checks: checks.list,
    };
    let path = settings.out.join("verify_report.json");
    write_json(&path, &report)?;
    Ok((report, path))
}
