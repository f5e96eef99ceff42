//! Randomized invariants.

use proptest::prelude::*;

use cvpoly::analysis::fidelity_pure;
use cvpoly::gates::{
    apply_effective_block, lambda_method1, lambda_method2, solve_ancilla_method1, solve_ancilla_method2,
    taylor_factorize, DiagonalUnitary, EffectiveBlock,
};
use cvpoly::method1::{homodyne_pdf, step_method1};
use cvpoly::method2::detection_distribution;
use cvpoly::moments::{gaussian_poly_integral, RealPoly};
use cvpoly::states::{make_coherent, make_fock, Grid, SqueezedParams};
use cvpoly::Complex64;

fn grid() -> Grid {
    Grid::symmetric(16.0, 1024).unwrap()
}

fn k_away_from_vacuum() -> impl Strategy<Value = f64> {
    prop_oneof![0.3f64..1.3, 1.6f64..6.0]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn method1_solver_round_trip(re in -3.0f64..3.0, im in -3.0f64..3.0, k in k_away_from_vacuum(), m in -2.0f64..2.0) {
        let target = Complex64::new(re, im);
        let anc = solve_ancilla_method1(target, k, m).unwrap();
        let got = lambda_method1(&anc, m).unwrap();
        prop_assert!((got - target).norm() < 1e-12 * (1.0 + target.norm()));
    }

    #[test]
    fn method2_solver_round_trip(re in -3.0f64..3.0, im in -3.0f64..3.0, k in 0.1f64..4.0) {
        let target = Complex64::new(re, im);
        let anc = solve_ancilla_method2(target, k).unwrap();
        prop_assert!((lambda_method2(&anc) - target).norm() < 1e-12 * (1.0 + target.norm()));
    }

    #[test]
    fn steps_preserve_normalization(
        q0 in -2.0f64..2.0, p0 in -2.0f64..2.0, k in k_away_from_vacuum(), m in -1.0f64..1.0,
        ar in -1.0f64..1.0, ai in -1.0f64..1.0,
    ) {
        let psi = make_coherent(Complex64::new(ar, ai), grid()).unwrap();
        let anc = SqueezedParams::from_quadratures(q0, p0, k).unwrap();
        let (out, _) = step_method1(&psi, &anc, m).unwrap();
        prop_assert!((out.norm_sq() - 1.0).abs() < 1e-12);
        let (out, w) = apply_effective_block(&psi, &EffectiveBlock::single_photon(anc)).unwrap();
        prop_assert!((out.norm_sq() - 1.0).abs() < 1e-12);
        prop_assert!(w > 0.0);
    }

    #[test]
    fn fidelity_symmetric_and_phase_blind(
        a in -1.5f64..1.5, b in -1.5f64..1.5, c in -1.5f64..1.5, d in -1.5f64..1.5, phase in 0.0f64..6.3,
    ) {
        let g = grid();
        let x = make_coherent(Complex64::new(a, b), g).unwrap();
        let y = make_coherent(Complex64::new(c, d), g).unwrap();
        let f = fidelity_pure(&x, &y).unwrap();
        prop_assert!((f - fidelity_pure(&y, &x).unwrap()).abs() < 1e-14);
        let rotated = x.map_q(|_| Complex64::from_polar(1.0, phase));
        prop_assert!((f - fidelity_pure(&rotated, &y).unwrap()).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn homodyne_density_is_nonnegative(q0 in -2.0f64..2.0, p0 in -2.0f64..2.0, k in 1.6f64..3.0, n in 0usize..4, m in -3.0f64..3.0) {
        let psi = make_fock(n, grid()).unwrap();
        let anc = SqueezedParams::from_quadratures(q0, p0, k).unwrap();
        prop_assert!(homodyne_pdf(&psi, &anc).unwrap().density(m) >= 0.0);
    }

    #[test]
    fn detection_probabilities_are_subnormalized(q0 in -1.0f64..1.0, p0 in -1.0f64..1.0, k in 0.5f64..2.5, n in 0usize..3) {
        let psi = make_fock(n, grid()).unwrap();
        let anc = SqueezedParams::from_quadratures(q0, p0, k).unwrap();
        let dist = detection_distribution(&psi, &anc, 8).unwrap();
        prop_assert!(dist.iter().all(|&p| p >= 0.0));
        prop_assert!(dist.iter().sum::<f64>() <= 1.0 + 1e-9);
    }

    #[test]
    fn plan_reconstructs_taylor_polynomial(nu in 0.01f64..1.0, q in -4.0f64..4.0) {
        let u = DiagonalUnitary::cubic_phase(nu);
        let plan = taylor_factorize(&u, 1).unwrap();
        let a = plan.eval(q);
        let b = u.taylor_eval(1, q);
        prop_assert!((a - b).norm() < 1e-9 * (1.0 + b.norm()));
        let sum: Complex64 = plan.roots.iter().sum();
        prop_assert!(sum.norm() < 1e-9 * nu.powf(-1.0 / 3.0));
    }

    #[test]
    fn gaussian_integral_is_linear(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, a in 0.2f64..3.0, b in -2.0f64..2.0) {
        let p = RealPoly(vec![c0, c1, c2]);
        let whole = gaussian_poly_integral(a, b, 0.0, &p);
        let parts: f64 = (0..3)
            .map(|i| {
                let mut e = vec![0.0; 3];
                e[i] = p.0[i];
                gaussian_poly_integral(a, b, 0.0, &RealPoly(e))
            })
            .sum();
        prop_assert!((whole - parts).abs() < 1e-10 * (1.0 + whole.abs()));
    }
}
