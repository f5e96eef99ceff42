//! Closed-form steps and outcome statistics against the two-mode simulation.

use cvpoly::gates::{
    lambda_method1_added, solve_ancilla_method1, solve_ancilla_method2, taylor_factorize, DiagonalUnitary,
    EffectiveBlock, Protocol,
};
use cvpoly::method1::{homodyne_pdf, step_method1};
use cvpoly::method2::{detection_distribution, step_method2};
use cvpoly::oracle::{cz_apply, oracle_step, project_fock, Mode, OracleGrid, OracleOutcome, TwoModeState};
use cvpoly::states::{
    db_to_k, inner, make_coherent, make_fock, make_squeezed, Grid, Ladder, SqueezeConvention, SqueezedParams,
    WaveFunction,
};
use cvpoly::Complex64;

fn grid() -> Grid {
    OracleGrid::default().grid1
}

fn inputs(g: Grid) -> Vec<(&'static str, WaveFunction)> {
    vec![
        ("vacuum", make_fock(0, g).unwrap()),
        ("fock1", make_fock(1, g).unwrap()),
        ("coherent1", make_coherent(Complex64::new(1.0, 0.0), g).unwrap()),
    ]
}

fn deficit(a: &WaveFunction, b: &WaveFunction) -> f64 {
    1.0 - inner(a, b).unwrap().norm() / (a.norm_sq() * b.norm_sq()).sqrt()
}

fn cubic_roots() -> Vec<Complex64> {
    taylor_factorize(&DiagonalUnitary::cubic_phase(0.1), 1).unwrap().roots
}

#[test]
fn method1_steps_match_oracle() {
    // the 10 dB ancilla is anti-squeezed in q and overflows [-15, 15]
    let g = OracleGrid::square(25.0, 2048).unwrap().grid1;
    let mut worst: f64 = 0.0;
    for db in [1.0, 5.0, 10.0] {
        let k = db_to_k(db, SqueezeConvention::AntiSqueezedQ);
        for root in cubic_roots() {
            let mo = -root.re;
            let anc = solve_ancilla_method1(root, k, mo).unwrap();
            for (name, psi) in inputs(g) {
                for m in [mo - 0.3, mo, mo + 0.3] {
                    let (fast, _) = step_method1(&psi, &anc, m).unwrap();
                    let (slow, _) = oracle_step(
                        &psi,
                        Protocol::PhotonSubtracted,
                        &anc,
                        OracleOutcome::Homodyne(m),
                        Ladder::Annihilate,
                    )
                    .unwrap();
                    let d = deficit(&fast, &slow);
                    assert!(d < 1e-5, "{name} {db} dB root {root} m {m}: deficit {d:e}");
                    worst = worst.max(d);
                }
            }
        }
    }
    eprintln!("method 1 worst deficit {worst:e}");
}

#[test]
fn method2_steps_match_oracle() {
    let g = grid();
    for db in [1.0, 5.0, 10.0] {
        let k = db_to_k(db, SqueezeConvention::SqueezedQ);
        for root in cubic_roots() {
            let anc = solve_ancilla_method2(root, k).unwrap();
            for (name, psi) in inputs(g) {
                let (fast, p) = step_method2(&psi, &anc).unwrap();
                let (slow, q) = oracle_step(
                    &psi,
                    Protocol::SinglePhotonCounter,
                    &anc,
                    OracleOutcome::Photons(1),
                    Ladder::Annihilate,
                )
                .unwrap();
                let d = deficit(&fast, &slow);
                assert!(d < 1e-5, "{name} {db} dB root {root}: deficit {d:e}");
                assert!((p - q).abs() < 1e-6, "{name} {db} dB root {root}: p {p} vs {q}");
            }
        }
    }
}

#[test]
fn zero_displacement_step_is_envelope_times_q() {
    let g = grid();
    let psi = make_fock(0, g).unwrap();
    let k = db_to_k(5.0, SqueezeConvention::AntiSqueezedQ);
    let anc = SqueezedParams::from_quadratures(0.0, 0.0, k).unwrap();
    let (slow, _) = oracle_step(
        &psi,
        Protocol::PhotonSubtracted,
        &anc,
        OracleOutcome::Homodyne(0.0),
        Ladder::Annihilate,
    )
    .unwrap();
    let direct = psi.map_q(|q| Complex64::new(q * (-q * q / (k * k)).exp(), 0.0));
    assert!(deficit(&direct, &slow) < 1e-6);
}

#[test]
fn photon_added_ancilla_keeps_block_form() {
    let g = grid();
    let k = db_to_k(5.0, SqueezeConvention::AntiSqueezedQ);
    let anc = SqueezedParams::from_quadratures(0.6, -0.4, k).unwrap();
    for (name, psi) in inputs(g) {
        for m in [-0.3, 0.2] {
            let (slow, _) = oracle_step(
                &psi,
                Protocol::PhotonSubtracted,
                &anc,
                OracleOutcome::Homodyne(m),
                Ladder::Create,
            )
            .unwrap();
            let mut block = EffectiveBlock::photon_subtracted(anc, m).unwrap();
            block.lambda = lambda_method1_added(&anc, m);
            let fit = WaveFunction::new(
                g,
                psi.amps()
                    .iter()
                    .zip(g.points())
                    .map(|(a, q)| a * block.factor(q))
                    .collect(),
            )
            .unwrap();
            let d = deficit(&fit, &slow);
            assert!(d < 1e-6, "{name} m {m}: deficit {d:e}");
        }
    }
}

#[test]
fn homodyne_density_matches_oracle_marginal() {
    let g = grid();
    let k = db_to_k(5.0, SqueezeConvention::AntiSqueezedQ);
    let ancillas = [
        SqueezedParams::from_quadratures(0.0, 0.0, k).unwrap(),
        solve_ancilla_method1(cubic_roots()[1], k, 1.0).unwrap(),
    ];
    for anc in &ancillas {
        for (name, psi) in inputs(g) {
            let pdf = homodyne_pdf(&psi, anc).unwrap();
            for i in 0..11 {
                let m = -1.0 + 0.2 * i as f64;
                let (_, density) = oracle_step(
                    &psi,
                    Protocol::PhotonSubtracted,
                    anc,
                    OracleOutcome::Homodyne(m),
                    Ladder::Annihilate,
                )
                .unwrap();
                let fast = pdf.density(m);
                assert!((fast - density).abs() < 1e-5, "{name} m {m}: {fast} vs {density}");
            }
        }
    }
}

#[test]
fn detection_probabilities_match_oracle() {
    let g = grid();
    let configs = [
        SqueezedParams::vacuum(),
        solve_ancilla_method2(cubic_roots()[0], db_to_k(5.0, SqueezeConvention::SqueezedQ)).unwrap(),
        solve_ancilla_method2(cubic_roots()[2], db_to_k(1.0, SqueezeConvention::SqueezedQ)).unwrap(),
    ];
    for anc in &configs {
        for (name, psi) in inputs(g) {
            let fast = detection_distribution(&psi, anc, 40).unwrap();
            let sigma = make_squeezed(*anc, g).unwrap();
            let joint = cz_apply(&TwoModeState::product(&psi, &sigma).unwrap());
            let mut total = 0.0;
            for (n, pf) in fast.iter().enumerate() {
                let (_, p) = project_fock(&joint, Mode::Second, n).unwrap();
                total += p;
                assert!((pf - p).abs() < 1e-6, "{name} n {n}: {pf} vs {p}");
            }
            assert!((total - 1.0).abs() < 1e-6, "{name}: completeness {total}");
        }
    }
}
