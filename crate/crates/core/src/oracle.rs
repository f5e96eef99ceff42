//! Brute-force two-mode simulation of both step circuits.
//!
//! Nothing here relies on the closed-form step transformations: the joint
//! wave function `Psi(q1, q2)` is built on a product grid, entangled with
//! `CZ = exp(i q1 q2)` and projected by explicit kernel contraction. It is
//! slow and only meant to check the fast routines.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{method2_phase_slope, Protocol};
use crate::par;
use crate::states::{
    apply_ladder, displace, fourier, make_fock, make_squeezed, Direction, Grid, Ladder, SqueezedParams, Translation,
    WaveFunction,
};

pub const MAX_ORACLE_POINTS: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub grid1: Grid,
    pub grid2: Grid,
}

impl OracleGrid {
    pub fn new(grid1: Grid, grid2: Grid) -> Result<Self> {
        for g in [grid1, grid2] {
            if !g.is_symmetric() {
                return Err(Error::AsymmetricGrid);
            }
            if g.len() > MAX_ORACLE_POINTS {
                return Err(Error::InvalidGrid(format!(
                    "oracle grids hold at most {MAX_ORACLE_POINTS} points per mode, got {}",
                    g.len()
                )));
            }
        }
        Ok(OracleGrid { grid1, grid2 })
    }

    pub fn square(half_width: f64, n_points: usize) -> Result<Self> {
        let g = Grid::symmetric(half_width, n_points)?;
        Self::new(g, g)
    }
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid::square(15.0, 1024).expect("default oracle grid is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    First,
    Second,
}

/// `Psi(q1, q2)` stored row-major, index `i1 * n2 + i2`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    grids: OracleGrid,
    amps: Vec<Complex64>,
}

impl TwoModeState {
    pub fn product(a: &WaveFunction, b: &WaveFunction) -> Result<Self> {
        let grids = OracleGrid::new(*a.grid(), *b.grid())?;
        let amps = a
            .amps()
            .iter()
            .flat_map(|x| b.amps().iter().map(move |y| x * y))
            .collect();
        Ok(TwoModeState { grids, amps })
    }

    pub fn grids(&self) -> &OracleGrid {
        &self.grids
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    fn n2(&self) -> usize {
        self.grids.grid2.len()
    }

    fn row(&self, i1: usize) -> &[Complex64] {
        let n2 = self.n2();
        &self.amps[i1 * n2..(i1 + 1) * n2]
    }

    pub fn norm_sq(&self) -> f64 {
        let (g1, g2) = (&self.grids.grid1, &self.grids.grid2);
        (0..g1.len())
            .map(|i1| g1.weight(i1) * g2.integrate(self.row(i1).iter().map(|a| a.norm_sqr())))
            .sum()
    }

    pub fn normalize(&mut self) -> Result<f64> {
        let w = self.norm_sq();
        if !(w > crate::states::ZERO_NORM) {
            return Err(Error::ZeroNorm { weight: w });
        }
        let s = 1.0 / w.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= s);
        Ok(w)
    }

    /// `tr rho_1^2` of the reduced state of mode 1.
    pub fn reduced_purity(&self) -> f64 {
        let (g1, g2) = (&self.grids.grid1, &self.grids.grid2);
        let n1 = g1.len();
        let norm = self.norm_sq();
        let rows: Vec<usize> = (0..n1).collect();
        let partial = par::map(&rows, |&a| {
            let ra = self.row(a);
            (0..n1)
                .map(|b| {
                    let rb = self.row(b);
                    let rho: Complex64 = ra
                        .iter()
                        .zip(rb)
                        .enumerate()
                        .map(|(i2, (x, y))| x * y.conj() * g2.weight(i2))
                        .sum();
                    g1.weight(a) * g1.weight(b) * rho.norm_sqr()
                })
                .sum::<f64>()
        });
        partial.iter().sum::<f64>() / (norm * norm)
    }
}

/// Pointwise `e^{i q1 q2}`.
pub fn cz_apply(state: &TwoModeState) -> TwoModeState {
    let (g1, g2) = (state.grids.grid1, state.grids.grid2);
    let n2 = g2.len();
    let amps = state
        .amps
        .iter()
        .enumerate()
        .map(|(idx, a)| a * Complex64::from_polar(1.0, g1.point(idx / n2) * g2.point(idx % n2)))
        .collect();
    TwoModeState {
        grids: state.grids,
        amps,
    }
}

/// Contracts `mode` against `conj(kernel)` and returns the other mode with its squared norm.
fn contract(state: &TwoModeState, mode: Mode, kernel: &[Complex64]) -> (WaveFunction, f64) {
    let (g1, g2) = (state.grids.grid1, state.grids.grid2);
    let (n1, n2) = (g1.len(), g2.len());
    let (out_grid, amps) = match mode {
        Mode::First => {
            let cols: Vec<usize> = (0..n2).collect();
            let amps = par::map(&cols, |&i2| {
                (0..n1)
                    .map(|i1| kernel[i1].conj() * state.amps[i1 * n2 + i2] * g1.weight(i1))
                    .sum::<Complex64>()
            });
            (g2, amps)
        }
        Mode::Second => {
            let rows: Vec<usize> = (0..n1).collect();
            let amps = par::map(&rows, |&i1| {
                state
                    .row(i1)
                    .iter()
                    .enumerate()
                    .map(|(i2, a)| kernel[i2].conj() * a * g2.weight(i2))
                    .sum::<Complex64>()
            });
            (g1, amps)
        }
    };
    let out = WaveFunction::from_parts(out_grid, amps);
    let w = out.norm_sq();
    (out, w)
}

fn mode_grid(state: &TwoModeState, mode: Mode) -> Grid {
    match mode {
        Mode::First => state.grids.grid1,
        Mode::Second => state.grids.grid2,
    }
}

/// `<m|_p` on `mode`; the weight is the outcome density at `m`.
pub fn project_homodyne_p(state: &TwoModeState, mode: Mode, m: f64) -> (WaveFunction, f64) {
    let g = mode_grid(state, mode);
    let c = 1.0 / (2.0 * PI).sqrt();
    let kernel: Vec<Complex64> = g.points().map(|t| Complex64::from_polar(c, m * t)).collect();
    contract(state, mode, &kernel)
}

/// `<n|` on `mode`; the weight is the detection probability.
pub fn project_fock(state: &TwoModeState, mode: Mode, n: usize) -> Result<(WaveFunction, f64)> {
    let fock = make_fock(n, mode_grid(state, mode))?;
    Ok(contract(state, mode, fock.amps()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleOutcome {
    Homodyne(f64),
    Photons(usize),
}

/// Runs one circuit step on the two-mode grid.
///
/// Photon-subtracted protocol: `F^dag` on the input, `ladder` applied to the
/// squeezed ancilla, CZ, `<m|_p` on the input mode, then `X^dag(m)` and
/// `Z^dag(p0)` on the ancilla mode, which carries the output.
///
/// Single-photon protocol: plain squeezed ancilla, CZ, `<n|` on the ancilla,
/// then `Z^dag(2 q0 / (2 + k^2))` on the input mode. `ladder` is unused.
///
/// Returns the normalized output and the outcome weight (density or probability).
pub fn oracle_step(
    psi: &WaveFunction,
    protocol: Protocol,
    ancilla: &SqueezedParams,
    outcome: OracleOutcome,
    ladder: Ladder,
) -> Result<(WaveFunction, f64)> {
    let grid = *psi.grid();
    let (psi, _) = psi.clone().normalized()?;
    match (protocol, outcome) {
        (Protocol::PhotonSubtracted, OracleOutcome::Homodyne(m)) => {
            let rotated = fourier(&psi, Direction::Inverse)?;
            let sigma = make_squeezed(*ancilla, grid)?;
            let (anc, w) = apply_ladder(&sigma, ladder);
            if w < 1e-14 {
                return Err(Error::ZeroAncilla);
            }
            let anc = anc.normalized()?.0;
            let joint = cz_apply(&TwoModeState::product(&rotated, &anc)?);
            let (out, density) = project_homodyne_p(&joint, Mode::First, m);
            let out = displace(&out, Translation::X, -m)?;
            let out = displace(&out, Translation::Z, -ancilla.p0())?;
            Ok((out.normalized()?.0, density))
        }
        (Protocol::SinglePhotonCounter, OracleOutcome::Photons(n)) => {
            let sigma = make_squeezed(*ancilla, grid)?;
            let joint = cz_apply(&TwoModeState::product(&psi, &sigma)?);
            let (out, prob) = project_fock(&joint, Mode::Second, n)?;
            let out = displace(&out, Translation::Z, -method2_phase_slope(ancilla))?;
            Ok((out.normalized()?.0, prob))
        }
        _ => Err(Error::InvalidParameter(
            "homodyne outcomes go with the photon-subtracted protocol, photon counts with the single-photon one".into(),
        )),
    }
}
