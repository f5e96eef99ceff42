//! Squeezed ancilla with a photon-number-resolving detector.
//!
//! After the CZ gate the ancilla is projected on `|1>`; the heralded input
//! picks up `exp(-(k^2 / (4 + 2k^2)) (q + p0)^2) (q - lambda)` with
//! `lambda = -p0 + 2i q0 / k^2`, once the residual momentum kick
//! `e^{i 2 q0 q / (2 + k^2)}` is undone.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{apply_effective_block, solve_ancilla_method2, EffectiveBlock, MonomialPlan};
use crate::spectral::continuous_ft;
use crate::states::{db_to_k, hermite_function, make_squeezed, SqueezeConvention, SqueezedParams, WaveFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct Method2Config {
    pub plan: MonomialPlan,
    pub squeezing_db: f64,
    /// How dB map to `k`; `SqueezedQ` narrows the ancilla in position.
    pub convention: SqueezeConvention,
    pub max_fock_check: usize,
}

impl Method2Config {
    pub fn new(plan: MonomialPlan, squeezing_db: f64) -> Result<Self> {
        if !(squeezing_db >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "squeezing must be >= 0 dB, got {squeezing_db}"
            )));
        }
        Ok(Method2Config {
            plan,
            squeezing_db,
            convention: SqueezeConvention::SqueezedQ,
            max_fock_check: 2,
        })
    }

    pub fn with_convention(mut self, convention: SqueezeConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_max_fock_check(mut self, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("max_fock_check must be >= 2, got {n}")));
        }
        self.max_fock_check = n;
        Ok(self)
    }

    pub fn k(&self) -> f64 {
        db_to_k(self.squeezing_db, self.convention)
    }

    pub fn ancillas(&self) -> Result<Vec<SqueezedParams>> {
        let k = self.k();
        self.plan.roots.iter().map(|&r| solve_ancilla_method2(r, k)).collect()
    }
}

/// Heralded step on one detected photon. Returns the normalized output and
/// the probability of that detection event.
pub fn step_method2(psi: &WaveFunction, ancilla: &SqueezedParams) -> Result<(WaveFunction, f64)> {
    let (psi, _) = psi.clone().normalized()?;
    let p_single = spc_probability(&psi, ancilla, 1)?;
    let (out, _) = apply_effective_block(&psi, &EffectiveBlock::single_photon(*ancilla))?;
    Ok((out, p_single))
}

/// Detector response `w_n(t) = integral phi_n(s) sigma(s) e^{i s t} ds` for
/// every `n <= n_max`, on the input grid.
fn responses(psi: &WaveFunction, ancilla: &SqueezedParams, n_max: usize) -> Result<Vec<Vec<Complex64>>> {
    let grid = *psi.grid();
    if !grid.is_symmetric() {
        return Err(Error::AsymmetricGrid);
    }
    let sigma = make_squeezed(*ancilla, grid)?;
    let root_2pi = (2.0 * PI).sqrt();
    Ok((0..=n_max)
        .map(|n| {
            let prod: Vec<Complex64> = grid
                .points()
                .zip(sigma.amps())
                .map(|(s, a)| a * hermite_function(n, s))
                .collect();
            continuous_ft(&prod, grid.q_min(), grid.spacing(), 1.0)
                .into_iter()
                .map(|w| w * root_2pi)
                .collect()
        })
        .collect())
}

/// Probability of detecting `n` photons on the ancilla.
pub fn spc_probability(psi: &WaveFunction, ancilla: &SqueezedParams, n: usize) -> Result<f64> {
    let w = responses(psi, ancilla, n)?;
    Ok(weighted(psi, &w[n]))
}

/// `p(0), ..., p(n_max)`.
pub fn detection_distribution(psi: &WaveFunction, ancilla: &SqueezedParams, n_max: usize) -> Result<Vec<f64>> {
    Ok(responses(psi, ancilla, n_max)?
        .iter()
        .map(|w| weighted(psi, w))
        .collect())
}

fn weighted(psi: &WaveFunction, w: &[Complex64]) -> f64 {
    let norm = psi.norm_sq();
    psi.grid()
        .integrate(psi.amps().iter().zip(w).map(|(a, w)| a.norm_sqr() * w.norm_sqr()))
        / norm
}

#[derive(Debug, Clone)]
pub struct Method2Outcome {
    pub state: WaveFunction,
    pub success_prob: f64,
    pub step_probs: Vec<f64>,
}

/// One heralded step per root; the success probability is the product of the
/// per-step single-photon probabilities.
pub fn chain_method2(psi: &WaveFunction, cfg: &Method2Config) -> Result<Method2Outcome> {
    let mut state = psi.clone().normalized()?.0;
    let mut step_probs = Vec::with_capacity(cfg.plan.roots.len());
    for anc in cfg.ancillas()? {
        let (next, p) = step_method2(&state, &anc)?;
        state = next;
        step_probs.push(p);
    }
    Ok(Method2Outcome {
        state,
        success_prob: step_probs.iter().product(),
        step_probs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{lambda_method2, taylor_factorize, DiagonalUnitary};
    use crate::states::{make_fock, Grid};
    use approx::assert_abs_diff_eq;

    #[test]
    fn completeness_of_detection_distribution() {
        let g = Grid::default();
        let k = db_to_k(5.0, SqueezeConvention::SqueezedQ);
        let anc = SqueezedParams::from_quadratures(0.4, -0.3, k).unwrap();
        for n in [0, 1, 3] {
            let psi = make_fock(n, g).unwrap();
            let dist = detection_distribution(&psi, &anc, 40).unwrap();
            assert!(dist.iter().all(|&p| p >= 0.0));
            assert_abs_diff_eq!(dist.iter().sum::<f64>(), 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn vacuum_ancilla_on_vacuum_is_mostly_empty() {
        let g = Grid::default();
        let psi = make_fock(0, g).unwrap();
        let dist = detection_distribution(&psi, &SqueezedParams::vacuum(), 4).unwrap();
        // CZ on vacuum x vacuum leaves the ancilla in a thermal-like mixture
        assert!(dist[0] > dist[1] && dist[1] > dist[2]);
    }

    #[test]
    fn zero_displacement_gives_pure_monomial_root() {
        let anc = SqueezedParams::from_quadratures(0.0, 0.0, 0.8).unwrap();
        assert_eq!(lambda_method2(&anc), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn config_roots_are_exact() {
        let plan = taylor_factorize(&DiagonalUnitary::cubic_phase(0.1), 1).unwrap();
        let cfg = Method2Config::new(plan.clone(), 5.0).unwrap();
        for (a, r) in cfg.ancillas().unwrap().iter().zip(&plan.roots) {
            assert_abs_diff_eq!((lambda_method2(a) - r).norm(), 0.0, epsilon = 1e-12);
        }
        assert!(cfg.clone().with_max_fock_check(1).is_err());
    }
}
