//! Fidelities, Wigner functions and input sweeps.

use num_complex::Complex64;
use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{apply_diagonal, taylor_factorize, DiagonalUnitary, MonomialPlan};
use crate::method1::{chain_method1_exact, fidelity_postselected, postselect_ensemble, Method1Config, OutcomeEnsemble};
use crate::method2::{chain_method2, Method2Config};
use crate::par;
use crate::states::{
    db_to_k, inner, make_coherent, make_fock, make_squeezed, Grid, SqueezeConvention, SqueezedParams, WaveFunction,
};

/// `|<a|b>|` for normalized states.
pub fn fidelity_pure(a: &WaveFunction, b: &WaveFunction) -> Result<f64> {
    let o = inner(a, b)?.norm() / (a.norm_sq() * b.norm_sq()).sqrt();
    Ok(o.min(1.0))
}

pub fn fidelity_mixed(ensemble: &OutcomeEnsemble, target: &WaveFunction) -> Result<f64> {
    fidelity_postselected(ensemble, target)
}

/// Normalized `U psi`.
pub fn target_output(u: &DiagonalUnitary, psi: &WaveFunction) -> Result<WaveFunction> {
    Ok(apply_diagonal(psi, |q| u.eval(q)).normalized()?.0)
}

/// Normalized `P(q) psi` for the plan polynomial `P`.
pub fn plan_output(plan: &MonomialPlan, psi: &WaveFunction) -> Result<WaveFunction> {
    Ok(apply_diagonal(psi, |q| plan.eval(q)).normalized()?.0)
}

/// Fidelity of the bare polynomial (no envelopes, no measurement) with the unitary.
pub fn bare_polynomial_fidelity(u: &DiagonalUnitary, plan: &MonomialPlan, psi: &WaveFunction) -> Result<f64> {
    fidelity_pure(&target_output(u, psi)?, &plan_output(plan, psi)?)
}

/// `values[iq][ip] = W(q_axis[iq], p_axis[ip])`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub q_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub min_value: f64,
}

impl WignerGrid {
    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Trapezoid integral over the sampled rectangle.
    pub fn integral(&self) -> f64 {
        let rows: Vec<f64> = self.values.iter().map(|row| trapezoid(&self.p_axis, row)).collect();
        trapezoid(&self.q_axis, &rows)
    }

    /// `integral W(q, p) dp` at each `q`.
    pub fn q_marginal(&self) -> Vec<f64> {
        self.values.iter().map(|row| trapezoid(&self.p_axis, row)).collect()
    }

    /// Number of 4-connected regions where `W < -rel_threshold * max W`.
    pub fn negative_regions(&self, rel_threshold: f64) -> usize {
        let cut = -rel_threshold * self.max_value();
        let (nq, np) = (self.q_axis.len(), self.p_axis.len());
        let mut seen = vec![vec![false; np]; nq];
        let mut count = 0;
        for i in 0..nq {
            for j in 0..np {
                if seen[i][j] || self.values[i][j] >= cut {
                    continue;
                }
                count += 1;
                seen[i][j] = true;
                let mut queue = VecDeque::from([(i, j)]);
                while let Some((a, b)) = queue.pop_front() {
                    let mut visit = |x: usize, y: usize| {
                        if !seen[x][y] && self.values[x][y] < cut {
                            seen[x][y] = true;
                            queue.push_back((x, y));
                        }
                    };
                    if a > 0 {
                        visit(a - 1, b);
                    }
                    if a + 1 < nq {
                        visit(a + 1, b);
                    }
                    if b > 0 {
                        visit(a, b - 1);
                    }
                    if b + 1 < np {
                        visit(a, b + 1);
                    }
                }
            }
        }
        count
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

/// Evenly spaced axis with `n` points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `W(q, p) = (1/pi) integral psi*(q + y) psi(q - y) e^{2 i p y} dy`.
///
/// Each `q` is snapped to the nearest half-multiple of the grid spacing so the
/// pairs `q +- y` land on grid nodes; the returned `q_axis` holds the snapped values.
pub fn wigner(psi: &WaveFunction, q_axis: &[f64], p_axis: &[f64]) -> Result<WignerGrid> {
    let (psi, _) = psi.clone().normalized()?;
    let grid = *psi.grid();
    let (n, dq, q_min) = (grid.len() as i64, grid.spacing(), grid.q_min());
    let amps = psi.amps();
    let values = par::map(q_axis, |&q| {
        let s = (2.0 * (q - q_min) / dq).round() as i64;
        let lo = (s - (n - 1)).max(0);
        let hi = s.min(n - 1);
        // pairs (i1, s - i1); y = (2 i1 - s) dq / 2
        let pairs: Vec<(f64, Complex64)> = (lo..=hi)
            .map(|i1| {
                let i2 = s - i1;
                let y = 0.5 * (2 * i1 - s) as f64 * dq;
                (y, amps[i1 as usize].conj() * amps[i2 as usize])
            })
            .collect();
        p_axis
            .iter()
            .map(|&p| {
                let sum: Complex64 = pairs
                    .iter()
                    .map(|&(y, c)| c * Complex64::from_polar(1.0, 2.0 * p * y))
                    .sum();
                sum.re * dq / PI
            })
            .collect::<Vec<f64>>()
    });
    let min_value = values.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let snapped = q_axis
        .iter()
        .map(|&q| q_min + 0.5 * dq * (2.0 * (q - q_min) / dq).round())
        .collect();
    Ok(WignerGrid {
        q_axis: snapped,
        p_axis: p_axis.to_vec(),
        values,
        min_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputFamily {
    /// `x` is the photon number.
    Fock,
    /// `x = |alpha|^2` with `alpha` real and non-negative.
    Coherent,
}

impl InputFamily {
    pub fn name(self) -> &'static str {
        match self {
            InputFamily::Fock => "fock",
            InputFamily::Coherent => "coherent",
        }
    }
}

pub fn input_state(family: InputFamily, x: f64, grid: Grid) -> Result<WaveFunction> {
    if !(x >= 0.0) {
        return Err(Error::InvalidParameter(format!("sweep value must be >= 0, got {x}")));
    }
    match family {
        InputFamily::Fock => {
            if x.fract() != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "photon number must be an integer, got {x}"
                )));
            }
            make_fock(x as usize, grid)
        }
        InputFamily::Coherent => make_coherent(Complex64::new(x.sqrt(), 0.0), grid),
    }
}

/// Default sweep: `0, 1, ..., 10` for both families.
pub fn default_sweep() -> Vec<f64> {
    (0..=10).map(f64::from).collect()
}

/// Momentum-squeezed vacuum at 5 dB, the known input of the state-preparation runs.
pub fn state_prep_input(grid: Grid) -> Result<WaveFunction> {
    let k = db_to_k(5.0, SqueezeConvention::AntiSqueezedQ);
    make_squeezed(SqueezedParams::from_quadratures(0.0, 0.0, k)?, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodTag {
    Bare,
    Method1Exact,
    Method1Postselected,
    Method2,
}

impl MethodTag {
    pub fn name(self) -> &'static str {
        match self {
            MethodTag::Bare => "bare",
            MethodTag::Method1Exact => "method1",
            MethodTag::Method1Postselected => "method1-postselect",
            MethodTag::Method2 => "method2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveParams {
    pub nu: f64,
    pub squeezing_db: Option<f64>,
    pub method: MethodTag,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityCurve {
    pub input_family: InputFamily,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// Success probability per point, for the heralded protocols.
    pub success_probs: Option<Vec<f64>>,
    pub params: CurveParams,
}

fn cubic_plan(nu: f64) -> Result<(DiagonalUnitary, MonomialPlan)> {
    let u = DiagonalUnitary::cubic_phase(nu);
    let plan = taylor_factorize(&u, 1)?;
    Ok((u, plan))
}

fn collect(
    family: InputFamily,
    xs: &[f64],
    params: CurveParams,
    points: Vec<Result<(f64, Option<f64>)>>,
) -> Result<FidelityCurve> {
    let mut y_values = Vec::with_capacity(xs.len());
    let mut probs = Vec::with_capacity(xs.len());
    for p in points {
        let (f, prob) = p?;
        y_values.push(f);
        probs.extend(prob);
    }
    Ok(FidelityCurve {
        input_family: family,
        x_values: xs.to_vec(),
        y_values,
        success_probs: (probs.len() == xs.len() && !xs.is_empty()).then_some(probs),
        params,
    })
}

pub fn sweep_bare(family: InputFamily, xs: &[f64], nu: f64, grid: Grid) -> Result<FidelityCurve> {
    let (u, plan) = cubic_plan(nu)?;
    let points = par::map(xs, |&x| {
        let psi = input_state(family, x, grid)?;
        Ok((bare_polynomial_fidelity(&u, &plan, &psi)?, None))
    });
    let params = CurveParams {
        nu,
        squeezing_db: None,
        method: MethodTag::Bare,
        delta: None,
    };
    collect(family, xs, params, points)
}

/// Method 1 with every homodyne outcome at its nominal value.
pub fn sweep_method1_exact(family: InputFamily, xs: &[f64], nu: f64, db: f64, grid: Grid) -> Result<FidelityCurve> {
    let (u, plan) = cubic_plan(nu)?;
    let cfg = Method1Config::new(plan, db, 1.0)?;
    let points = par::map(xs, |&x| {
        let psi = input_state(family, x, grid)?;
        let out = chain_method1_exact(&psi, &cfg)?;
        Ok((fidelity_pure(&target_output(&u, &psi)?, &out)?, None))
    });
    let params = CurveParams {
        nu,
        squeezing_db: Some(db),
        method: MethodTag::Method1Exact,
        delta: None,
    };
    collect(family, xs, params, points)
}

/// Method 1 post-selected on the window `|m_j - m_oj| < delta`.
pub fn sweep_method1_postselect(
    family: InputFamily,
    xs: &[f64],
    nu: f64,
    db: f64,
    delta: f64,
    nodes: usize,
    grid: Grid,
) -> Result<FidelityCurve> {
    let (u, plan) = cubic_plan(nu)?;
    let cfg = Method1Config::new(plan, db, delta)?.with_nodes(nodes)?;
    // the ensemble itself fans out over the quadrature nodes
    let points = xs
        .iter()
        .map(|&x| {
            let psi = input_state(family, x, grid)?;
            let ens = postselect_ensemble(&psi, &cfg)?;
            Ok((
                fidelity_postselected(&ens, &target_output(&u, &psi)?)?,
                Some(ens.region_prob),
            ))
        })
        .collect();
    let params = CurveParams {
        nu,
        squeezing_db: Some(db),
        method: MethodTag::Method1Postselected,
        delta: Some(delta),
    };
    collect(family, xs, params, points)
}

pub fn sweep_method2(
    family: InputFamily,
    xs: &[f64],
    nu: f64,
    db: f64,
    convention: SqueezeConvention,
    grid: Grid,
) -> Result<FidelityCurve> {
    let (u, plan) = cubic_plan(nu)?;
    let cfg = Method2Config::new(plan, db)?.with_convention(convention);
    let points = par::map(xs, |&x| {
        let psi = input_state(family, x, grid)?;
        let out = chain_method2(&psi, &cfg)?;
        Ok((
            fidelity_pure(&target_output(&u, &psi)?, &out.state)?,
            Some(out.success_prob),
        ))
    });
    let params = CurveParams {
        nu,
        squeezing_db: Some(db),
        method: MethodTag::Method2,
        delta: None,
    };
    collect(family, xs, params, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pure_fidelity_basics() {
        let g = Grid::default();
        let a = make_fock(0, g).unwrap();
        let b = make_fock(1, g).unwrap();
        assert_abs_diff_eq!(fidelity_pure(&a, &a).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fidelity_pure(&a, &b).unwrap(), 0.0, epsilon = 1e-12);
        let other = Grid::symmetric(10.0, 1024).unwrap();
        let c = make_fock(0, other).unwrap();
        assert_eq!(fidelity_pure(&a, &c).unwrap_err(), Error::GridMismatch);
    }

    #[test]
    fn identity_gate_is_perfect() {
        let g = Grid::default();
        let (u, plan) = cubic_plan(0.0).unwrap();
        for n in [0, 3, 7] {
            let psi = make_fock(n, g).unwrap();
            assert_abs_diff_eq!(bare_polynomial_fidelity(&u, &plan, &psi).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn wigner_peaks() {
        let g = Grid::default();
        let axis = [0.0];
        let w0 = wigner(&make_fock(0, g).unwrap(), &axis, &axis).unwrap();
        let w1 = wigner(&make_fock(1, g).unwrap(), &axis, &axis).unwrap();
        assert_abs_diff_eq!(w0.values[0][0], 1.0 / PI, epsilon = 1e-6);
        assert_abs_diff_eq!(w1.values[0][0], -1.0 / PI, epsilon = 1e-6);
    }

    #[test]
    fn wigner_normalization_and_marginal() {
        let g = Grid::default();
        let psi = make_coherent(Complex64::new(0.6, -0.4), g).unwrap();
        let q = linspace(-6.0, 6.0, 121);
        let p = linspace(-8.0, 8.0, 321);
        let w = wigner(&psi, &q, &p).unwrap();
        assert_abs_diff_eq!(w.integral(), 1.0, epsilon = 1e-4);
        let q0 = 0.6 * 2f64.sqrt();
        for (&snapped, m) in w.q_axis.iter().zip(w.q_marginal()) {
            let exact = (-(snapped - q0).powi(2)).exp() / PI.sqrt();
            assert_abs_diff_eq!(m, exact, epsilon = 1e-5);
        }
    }

    #[test]
    fn region_counting() {
        let w = WignerGrid {
            q_axis: vec![0.0, 1.0, 2.0],
            p_axis: vec![0.0, 1.0, 2.0],
            values: vec![vec![-1.0, 1.0, -1.0], vec![1.0, 2.0, 1.0], vec![-1.0, -1.0, 1.0]],
            min_value: -1.0,
        };
        assert_eq!(w.negative_regions(1e-3), 3);
    }

    #[test]
    fn coherent_axis_uses_real_amplitude() {
        let g = Grid::default();
        let psi = input_state(InputFamily::Coherent, 4.0, g).unwrap();
        assert_abs_diff_eq!(psi.mean_q(), 2.0 * 2f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(psi.mean_p(), 0.0, epsilon = 1e-10);
        assert!(input_state(InputFamily::Fock, 1.5, g).is_err());
    }
}
