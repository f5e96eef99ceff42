//! Photon-subtracted ancilla with homodyne detection.
//!
//! One step entangles the input with `a|alpha, k>` through a CZ gate, measures
//! the ancilla momentum with outcome `m` and undoes the known displacements.
//! The net action on the input is the diagonal block
//! `exp(-(q - q0 + m)^2 / k^2) (q - lambda)`. Chaining one step per root of a
//! [`MonomialPlan`] builds the polynomial approximation of the target gate.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{apply_effective_block, lambda_method1, solve_ancilla_method1, EffectiveBlock, MonomialPlan};
use crate::moments::{gaussian_poly_integral, RealPoly};
use crate::par;
use crate::quadrature::gauss_legendre;
use crate::spectral::Spectrum;
use crate::states::{
    apply_ladder, db_to_k, inner, make_squeezed, Grid, Ladder, SqueezeConvention, SqueezedParams, WaveFunction,
};

/// Squared norm below which the subtracted ancilla counts as annihilated.
const ANCILLA_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Method1Config {
    pub plan: MonomialPlan,
    pub squeezing_db: f64,
    /// Ancilla width parameter, `db_to_k(squeezing_db, AntiSqueezedQ)` unless overridden.
    pub k: f64,
    /// Half-width of the acceptance window around each nominal outcome.
    pub delta: f64,
    pub nominal_outcomes: Vec<f64>,
    pub quadrature_nodes_per_dim: usize,
}

impl Method1Config {
    /// Every root realized at outcome `m = 0`; [`optimize_state_prep`] moves
    /// the nominal outcomes to likelier values.
    pub fn new(plan: MonomialPlan, squeezing_db: f64, delta: f64) -> Result<Self> {
        if !(squeezing_db >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "squeezing must be >= 0 dB, got {squeezing_db}"
            )));
        }
        let k = db_to_k(squeezing_db, SqueezeConvention::AntiSqueezedQ);
        Self::with_k(plan, k, delta).map(|mut c| {
            c.squeezing_db = squeezing_db;
            c
        })
    }

    pub fn with_k(plan: MonomialPlan, k: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
        }
        if (k * k - 2.0).abs() <= 1e-6 {
            return Err(Error::SingularAncilla { k });
        }
        let nominal_outcomes = vec![0.0; plan.roots.len()];
        Ok(Method1Config {
            plan,
            squeezing_db: crate::states::k_to_db(k, SqueezeConvention::AntiSqueezedQ),
            k,
            delta,
            nominal_outcomes,
            quadrature_nodes_per_dim: 8,
        })
    }

    pub fn with_nominal_outcomes(mut self, outcomes: Vec<f64>) -> Result<Self> {
        if outcomes.len() != self.plan.roots.len() {
            return Err(Error::InvalidParameter(format!(
                "{} outcomes for {} roots",
                outcomes.len(),
                self.plan.roots.len()
            )));
        }
        self.nominal_outcomes = outcomes;
        Ok(self)
    }

    pub fn with_nodes(mut self, nodes: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::InvalidParameter("need at least one quadrature node".into()));
        }
        self.quadrature_nodes_per_dim = nodes;
        Ok(self)
    }

    /// Ancilla per step, solved so that the nominal outcome realizes the root.
    pub fn ancillas(&self) -> Result<Vec<SqueezedParams>> {
        self.plan
            .roots
            .iter()
            .zip(&self.nominal_outcomes)
            .map(|(&root, &m)| solve_ancilla_method1(root, self.k, m))
            .collect()
    }
}

/// Nominal outcome for an ancilla displaced by `q0`: `-Re lambda - 2 q0 / (k^2 - 2)`.
pub fn nominal_outcome(lambda: Complex64, k: f64, q0: f64) -> Result<f64> {
    let d = k * k - 2.0;
    if d.abs() <= 1e-6 {
        return Err(Error::SingularAncilla { k });
    }
    Ok(-lambda.re - 2.0 * q0 / d)
}

/// One step with outcome `m`, corrections included. Returns the normalized
/// output and the realized root.
pub fn step_method1(psi: &WaveFunction, ancilla: &SqueezedParams, m: f64) -> Result<(WaveFunction, Complex64)> {
    let block = EffectiveBlock::photon_subtracted(*ancilla, m)?;
    let (out, _) = apply_effective_block(psi, &block)?;
    Ok((out, block.lambda))
}

/// `a|alpha, k>` on `grid`, normalized.
pub fn photon_subtracted_ancilla(ancilla: &SqueezedParams, grid: Grid) -> Result<WaveFunction> {
    let sigma = make_squeezed(*ancilla, grid)?;
    let (sub, weight) = apply_ladder(&sigma, Ladder::Annihilate);
    if weight < ANCILLA_FLOOR {
        return Err(Error::ZeroAncilla);
    }
    Ok(sub.normalized()?.0)
}

/// Outcome density `p(m) = integral |omega(x)|^2 |psi(x - m)|^2 dx` of one step.
#[derive(Debug, Clone)]
pub struct HomodynePdf {
    grid: Grid,
    ancilla_density: Vec<f64>,
    input: Spectrum,
}

impl HomodynePdf {
    pub fn density(&self, m: f64) -> f64 {
        let shifted = self.input.shifted(m);
        self.grid
            .integrate(self.ancilla_density.iter().zip(&shifted).map(|(w, a)| w * a.norm_sqr()))
    }

    /// Same input, different ancilla.
    pub fn with_ancilla(&self, ancilla: &SqueezedParams) -> Result<HomodynePdf> {
        let omega = photon_subtracted_ancilla(ancilla, self.grid)?;
        Ok(HomodynePdf {
            grid: self.grid,
            ancilla_density: omega.density(),
            input: self.input.clone(),
        })
    }

    /// Probability of an outcome in `[center - delta, center + delta]`.
    pub fn window_probability(&self, center: f64, delta: f64, nodes: usize) -> Result<f64> {
        let rule = gauss_legendre(nodes, center - delta, center + delta)?;
        Ok(rule.integrate(|m| self.density(m)))
    }
}

pub fn homodyne_pdf(psi: &WaveFunction, ancilla: &SqueezedParams) -> Result<HomodynePdf> {
    let grid = *psi.grid();
    let omega = photon_subtracted_ancilla(ancilla, grid)?;
    let (psi, _) = psi.clone().normalized()?;
    Ok(HomodynePdf {
        grid,
        ancilla_density: omega.density(),
        input: Spectrum::new(psi.amps(), grid.spacing()),
    })
}

/// Inputs for which the outcome density has a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AnalyticInput {
    Coherent(Complex64),
    Fock(usize),
}

/// Closed-form `p(m)` for coherent and Fock inputs.
pub fn gaussian_moment_pdf(input: AnalyticInput, ancilla: &SqueezedParams, m: f64) -> Result<f64> {
    let k2 = ancilla.k * ancilla.k;
    let (q0, p0) = (ancilla.q0(), ancilla.p0());
    // |omega(x)|^2 ∝ [(a1 x + b1)^2 + p0^2] exp(-2 (x - q0)^2 / k^2)
    let a1 = 1.0 - 2.0 / k2;
    let b1 = 2.0 * q0 / k2;
    let ancilla_poly = RealPoly(vec![b1 * b1 + p0 * p0, 2.0 * a1 * b1, a1 * a1]);
    let (ga, gb, gc) = (2.0 / k2, 4.0 * q0 / k2, -2.0 * q0 * q0 / k2);
    let ancilla_norm = gaussian_poly_integral(ga, gb, gc, &ancilla_poly);
    if ancilla_norm < ANCILLA_FLOOR {
        return Err(Error::ZeroAncilla);
    }
    // |psi(x - m)|^2 = in_poly(x) exp(-(x - center)^2)
    let (center, input_poly) = match input {
        AnalyticInput::Coherent(alpha) => (m + 2f64.sqrt() * alpha.re, RealPoly::constant(1.0 / PI.sqrt())),
        AnalyticInput::Fock(n) => {
            let h = RealPoly::hermite(n).shift(-m);
            let scale = 1.0 / (2f64.powi(n as i32) * factorial(n) * PI.sqrt());
            (m, h.mul(&h).scale(scale))
        }
    };
    let total = gaussian_poly_integral(
        ga + 1.0,
        gb + 2.0 * center,
        gc - center * center,
        &ancilla_poly.mul(&input_poly),
    );
    Ok(total / ancilla_norm)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Chain with every outcome at its nominal value.
pub fn chain_method1_exact(psi: &WaveFunction, cfg: &Method1Config) -> Result<WaveFunction> {
    let ancillas = cfg.ancillas()?;
    let mut state = psi.clone().normalized()?.0;
    for (anc, &m) in ancillas.iter().zip(&cfg.nominal_outcomes) {
        state = step_method1(&state, anc, m)?.0;
    }
    Ok(state)
}

#[derive(Debug, Clone)]
pub struct EnsembleEntry {
    pub outcomes: Vec<f64>,
    pub state: WaveFunction,
    /// Joint outcome density `p(m1) p(m2|m1) ...`.
    pub density: f64,
    /// Product of the per-dimension quadrature weights.
    pub quad_weight: f64,
}

/// Output mixture over the acceptance region.
#[derive(Debug, Clone)]
pub struct OutcomeEnsemble {
    pub entries: Vec<EnsembleEntry>,
    pub region_prob: f64,
}

impl OutcomeEnsemble {
    pub fn from_entries(entries: Vec<EnsembleEntry>) -> Self {
        let region_prob = entries.iter().map(|e| e.density * e.quad_weight).sum();
        OutcomeEnsemble { entries, region_prob }
    }
}

struct Tensor<'a> {
    ancillas: &'a [SqueezedParams],
    nodes: Vec<Vec<(f64, f64)>>,
}

fn descend(
    tensor: &Tensor<'_>,
    level: usize,
    state: &WaveFunction,
    prefix: &mut Vec<f64>,
    density: f64,
    weight: f64,
    out: &mut Vec<EnsembleEntry>,
) -> Result<()> {
    if level == tensor.ancillas.len() {
        out.push(EnsembleEntry {
            outcomes: prefix.clone(),
            state: state.clone(),
            density,
            quad_weight: weight,
        });
        return Ok(());
    }
    let anc = &tensor.ancillas[level];
    let pdf = homodyne_pdf(state, anc)?;
    for &(m, w) in &tensor.nodes[level] {
        let (next, _) = step_method1(state, anc, m)?;
        prefix.push(m);
        descend(
            tensor,
            level + 1,
            &next,
            prefix,
            density * pdf.density(m),
            weight * w,
            out,
        )?;
        prefix.pop();
    }
    Ok(())
}

/// Tensor Gauss-Legendre sampling of the acceptance region
/// `prod_j [m_oj - delta, m_oj + delta]`.
pub fn postselect_ensemble(psi: &WaveFunction, cfg: &Method1Config) -> Result<OutcomeEnsemble> {
    let ancillas = cfg.ancillas()?;
    if ancillas.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let nodes = cfg
        .nominal_outcomes
        .iter()
        .map(|&mo| {
            let rule = gauss_legendre(cfg.quadrature_nodes_per_dim, mo - cfg.delta, mo + cfg.delta)?;
            Ok(rule.nodes.into_iter().zip(rule.weights).collect())
        })
        .collect::<Result<Vec<Vec<(f64, f64)>>>>()?;
    let tensor = Tensor {
        ancillas: &ancillas,
        nodes,
    };
    let psi = psi.clone().normalized()?.0;
    let first = homodyne_pdf(&psi, &ancillas[0])?;
    let branches = par::map(&tensor.nodes[0], |&(m, w)| -> Result<Vec<EnsembleEntry>> {
        let (next, _) = step_method1(&psi, &ancillas[0], m)?;
        let mut out = Vec::new();
        let mut prefix = vec![m];
        descend(&tensor, 1, &next, &mut prefix, first.density(m), w, &mut out)?;
        Ok(out)
    });
    let mut entries = Vec::new();
    for branch in branches {
        entries.extend(branch?);
    }
    Ok(OutcomeEnsemble::from_entries(entries))
}

pub fn success_probability_m1(psi: &WaveFunction, cfg: &Method1Config) -> Result<f64> {
    Ok(postselect_ensemble(psi, cfg)?.region_prob)
}

/// Evenly spaced scan values, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl ScanRange {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// Greedy per-step choice of the ancilla position displacement `q0` that
/// maximizes the probability of landing in the acceptance window, for a
/// known input state.
pub fn optimize_state_prep(
    psi_known: &WaveFunction,
    plan: &MonomialPlan,
    k: f64,
    delta: f64,
    q0_scan: &ScanRange,
) -> Result<Method1Config> {
    let candidates = q0_scan.values();
    if candidates.is_empty() {
        return Err(Error::EmptyScanRange);
    }
    let base = Method1Config::with_k(plan.clone(), k, delta)?;
    let nodes = base.quadrature_nodes_per_dim;
    let mut state = psi_known.clone().normalized()?.0;
    let mut outcomes = Vec::with_capacity(plan.roots.len());
    for &root in &plan.roots {
        let pdf = homodyne_pdf(&state, &SqueezedParams::from_quadratures(0.0, 0.0, k)?)?;
        let scored = par::map(&candidates, |&q0| -> Result<(f64, f64)> {
            let mo = nominal_outcome(root, k, q0)?;
            let anc = solve_ancilla_method1(root, k, mo)?;
            let p = pdf.with_ancilla(&anc)?.window_probability(mo, delta, nodes)?;
            Ok((mo, p))
        });
        let mut best: Option<(f64, f64)> = None;
        for s in scored {
            let (mo, p) = s?;
            match best {
                Some((_, bp)) if !(p > bp) => {}
                _ => best = Some((mo, p)),
            }
        }
        let (mo, _) = best.ok_or(Error::EmptyScanRange)?;
        let anc = solve_ancilla_method1(root, k, mo)?;
        state = step_method1(&state, &anc, mo)?.0;
        outcomes.push(mo);
    }
    base.with_nominal_outcomes(outcomes)
}

/// `sqrt(sum_e p_e w_e / p_region |<target|state_e>|^2)`.
pub fn fidelity_postselected(ensemble: &OutcomeEnsemble, target: &WaveFunction) -> Result<f64> {
    if ensemble.entries.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    if !(ensemble.region_prob > 0.0) {
        return Err(Error::ZeroNorm {
            weight: ensemble.region_prob,
        });
    }
    let mut acc = 0.0;
    for e in &ensemble.entries {
        acc += e.density * e.quad_weight / ensemble.region_prob * inner(target, &e.state)?.norm_sqr();
    }
    Ok(acc.sqrt())
}

/// Realized root of every step for a given outcome vector.
pub fn realized_roots(cfg: &Method1Config, outcomes: &[f64]) -> Result<Vec<Complex64>> {
    cfg.ancillas()?
        .iter()
        .zip(outcomes)
        .map(|(a, &m)| lambda_method1(a, m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{taylor_factorize, DiagonalUnitary};
    use crate::states::{make_coherent, make_fock};
    use approx::assert_abs_diff_eq;

    fn grid() -> Grid {
        Grid::default()
    }

    fn cubic(nu: f64) -> MonomialPlan {
        taylor_factorize(&DiagonalUnitary::cubic_phase(nu), 1).unwrap()
    }

    #[test]
    fn nominal_outcome_at_zero_displacement() {
        let l = Complex64::new(1.3, -0.4);
        assert_eq!(nominal_outcome(l, 2.5, 0.0).unwrap(), -1.3);
    }

    #[test]
    fn config_round_trips_roots() {
        let cfg = Method1Config::new(cubic(0.1), 5.0, 0.1).unwrap();
        let roots = realized_roots(&cfg, &cfg.nominal_outcomes).unwrap();
        for (r, t) in roots.iter().zip(&cfg.plan.roots) {
            assert_abs_diff_eq!((r - t).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pdf_normalization_and_parity() {
        let vac = make_fock(0, grid()).unwrap();
        let anc = SqueezedParams::from_quadratures(0.0, 0.0, db_to_k(5.0, SqueezeConvention::AntiSqueezedQ)).unwrap();
        let pdf = homodyne_pdf(&vac, &anc).unwrap();
        let total = pdf.window_probability(0.0, 12.0, 96).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        for m in [0.3, 0.9, 1.7] {
            assert_abs_diff_eq!(pdf.density(m), pdf.density(-m), epsilon = 1e-12);
        }
    }

    #[test]
    fn analytic_density_matches_quadrature() {
        let k = db_to_k(5.0, SqueezeConvention::AntiSqueezedQ);
        let ancillas = [
            SqueezedParams::from_quadratures(0.0, 0.0, k).unwrap(),
            SqueezedParams::from_quadratures(0.7, -1.1, k).unwrap(),
        ];
        let alpha = Complex64::new(0.8, 0.0);
        for anc in &ancillas {
            for (input, psi) in [
                (AnalyticInput::Fock(0), make_fock(0, grid()).unwrap()),
                (AnalyticInput::Fock(1), make_fock(1, grid()).unwrap()),
                (AnalyticInput::Fock(4), make_fock(4, grid()).unwrap()),
                (AnalyticInput::Coherent(alpha), make_coherent(alpha, grid()).unwrap()),
            ] {
                let pdf = homodyne_pdf(&psi, anc).unwrap();
                for m in [-0.5, 0.0, 0.5] {
                    let exact = gaussian_moment_pdf(input, anc, m).unwrap();
                    assert_abs_diff_eq!(exact, pdf.density(m), epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn zero_ancilla_is_reported() {
        let vac = SqueezedParams::vacuum();
        let psi = make_fock(0, grid()).unwrap();
        assert_eq!(homodyne_pdf(&psi, &vac).unwrap_err(), Error::ZeroAncilla);
        assert_eq!(
            gaussian_moment_pdf(AnalyticInput::Fock(0), &vac, 0.0).unwrap_err(),
            Error::ZeroAncilla
        );
    }

    #[test]
    fn outcome_shift_moves_root() {
        let anc = SqueezedParams::from_quadratures(0.4, 0.2, 2.5).unwrap();
        let psi = make_fock(0, grid()).unwrap();
        let (_, l0) = step_method1(&psi, &anc, 0.1).unwrap();
        let (_, l1) = step_method1(&psi, &anc, 0.11).unwrap();
        assert_abs_diff_eq!((l1 - l0).re, -0.01, epsilon = 1e-14);
        assert_abs_diff_eq!((l1 - l0).im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn fidelity_of_trivial_ensembles() {
        let psi = make_fock(1, grid()).unwrap();
        let other = make_coherent(Complex64::new(0.5, 0.0), grid()).unwrap();
        let single = OutcomeEnsemble::from_entries(vec![EnsembleEntry {
            outcomes: vec![0.0],
            state: other.clone(),
            density: 0.3,
            quad_weight: 0.2,
        }]);
        let direct = inner(&psi, &other).unwrap().norm();
        assert_abs_diff_eq!(fidelity_postselected(&single, &psi).unwrap(), direct, epsilon = 1e-14);
        let same = OutcomeEnsemble::from_entries(
            (0..3)
                .map(|i| EnsembleEntry {
                    outcomes: vec![i as f64],
                    state: psi.clone(),
                    density: 0.1 * (i + 1) as f64,
                    quad_weight: 0.5,
                })
                .collect(),
        );
        assert_abs_diff_eq!(fidelity_postselected(&same, &psi).unwrap(), 1.0, epsilon = 1e-12);
        let empty = OutcomeEnsemble::from_entries(Vec::new());
        assert_eq!(fidelity_postselected(&empty, &psi).unwrap_err(), Error::EmptyEnsemble);
    }

    #[test]
    fn empty_scan_is_rejected() {
        let psi = make_fock(0, grid()).unwrap();
        let scan = ScanRange {
            start: 0.0,
            stop: 1.0,
            steps: 0,
        };
        assert_eq!(
            optimize_state_prep(&psi, &cubic(0.1), 2.5, 0.1, &scan).unwrap_err(),
            Error::EmptyScanRange
        );
    }
}
