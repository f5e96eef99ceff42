//! Position-grid representation of single-mode pure states.
//!
//! Conventions: `q = (a + a^dag)/sqrt(2)`, `p = (a - a^dag)/(i sqrt(2))`, so the
//! vacuum has quadrature variance 1/2 and `[q, p] = i`. Squeezed states are
//! parametrized by `k`, with `k = sqrt(2)` the vacuum and `Var(q) = k^2 / 4`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral;

/// Relative edge amplitude above which a state is considered cut by the grid.
const EDGE_TOLERANCE: f64 = 1e-8;

/// Squared norms below this are treated as the zero vector.
pub const ZERO_NORM: f64 = 1e-300;

/// Uniform sampling of the real line, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    q_min: f64,
    q_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(q_min: f64, q_max: f64, n_points: usize) -> Result<Self> {
        if !(q_min.is_finite() && q_max.is_finite()) || q_min >= q_max {
            return Err(Error::InvalidGrid(format!(
                "need q_min < q_max, got [{q_min}, {q_max}]"
            )));
        }
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two, got {n_points}"
            )));
        }
        Ok(Grid { q_min, q_max, n_points })
    }

    /// Grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Grid::new(-half_width, half_width, n_points)
    }

    pub fn q_min(&self) -> f64 {
        self.q_min
    }

    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.q_min + i as f64 * self.spacing()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let dq = self.spacing();
        (0..self.n_points).map(move |i| self.q_min + i as f64 * dq)
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        let dq = self.spacing();
        if i == 0 || i + 1 == self.n_points {
            0.5 * dq
        } else {
            dq
        }
    }

    pub fn is_symmetric(&self) -> bool {
        (self.q_min + self.q_max).abs() <= 1e-12 * (self.q_max - self.q_min)
    }

    /// Same interval with twice as many nodes.
    pub fn refined(&self) -> Grid {
        Grid {
            n_points: 2 * self.n_points,
            ..*self
        }
    }

    /// Trapezoid rule for sampled integrands.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        let dq = self.spacing();
        let last = self.n_points - 1;
        values
            .into_iter()
            .enumerate()
            .map(|(i, v)| if i == 0 || i == last { 0.5 * v } else { v })
            .sum::<f64>()
            * dq
    }
}

impl Default for Grid {
    /// `[-20, 20]` with 4096 nodes: wide enough for a 20 dB anti-squeezed ancilla.
    fn default() -> Self {
        Grid {
            q_min: -20.0,
            q_max: 20.0,
            n_points: 4096,
        }
    }
}

/// Sampled position wave function `psi(q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid,
    amps: Vec<Complex64>,
}

impl WaveFunction {
    pub fn new(grid: Grid, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} amplitudes, got {}",
                grid.len(),
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(WaveFunction { grid, amps })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let amps = grid.points().map(f).collect();
        WaveFunction { grid, amps }
    }

    pub(crate) fn from_parts(grid: Grid, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.len(), amps.len());
        WaveFunction { grid, amps }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn value_at(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn norm_sq(&self) -> f64 {
        self.grid.integrate(self.amps.iter().map(|a| a.norm_sqr()))
    }

    /// Rescales to unit norm and returns the squared norm before rescaling.
    pub fn normalize(&mut self) -> Result<f64> {
        let weight = self.norm_sq();
        if !(weight > ZERO_NORM) || !weight.is_finite() {
            return Err(Error::ZeroNorm { weight });
        }
        let inv = weight.sqrt().recip();
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(weight)
    }

    pub fn normalized(mut self) -> Result<(Self, f64)> {
        let weight = self.normalize()?;
        Ok((self, weight))
    }

    /// `|psi(q)|^2` at every node.
    pub fn density(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn mean_q(&self) -> f64 {
        self.grid
            .integrate(self.grid.points().zip(&self.amps).map(|(q, a)| q * a.norm_sqr()))
            / self.norm_sq()
    }

    pub fn variance_q(&self) -> f64 {
        let mean = self.mean_q();
        self.grid.integrate(
            self.grid
                .points()
                .zip(&self.amps)
                .map(|(q, a)| (q - mean).powi(2) * a.norm_sqr()),
        ) / self.norm_sq()
    }

    /// `<p>` with `p = -i d/dq`.
    pub fn mean_p(&self) -> f64 {
        let d = spectral::derivative(&self.amps, self.grid.spacing());
        let num = self.grid.integrate(
            self.amps
                .iter()
                .zip(&d)
                .map(|(a, da)| (a.conj() * Complex64::new(0.0, -1.0) * da).re),
        );
        num / self.norm_sq()
    }

    /// Largest endpoint amplitude relative to the peak.
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let n = self.amps.len();
        let edge = self.amps[..2]
            .iter()
            .chain(&self.amps[n - 2..])
            .map(|a| a.norm())
            .fold(0.0, f64::max);
        edge / peak
    }

    pub(crate) fn check_support(&self) -> Result<()> {
        let ratio = self.edge_ratio();
        if ratio > EDGE_TOLERANCE {
            let peak = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
            return Err(Error::GridTooNarrow {
                edge: ratio * peak,
                peak,
            });
        }
        Ok(())
    }

    /// Pointwise product with a function of `q`; the result is not normalized.
    pub fn map_q(&self, f: impl Fn(f64) -> Complex64) -> WaveFunction {
        let amps = self.grid.points().zip(&self.amps).map(|(q, a)| f(q) * a).collect();
        WaveFunction::from_parts(self.grid, amps)
    }
}

/// Which quadrature the dB figure refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqueezeConvention {
    /// `k = sqrt(2) * 10^(dB/20)`: squeezed in `p`, stretched in `q`.
    AntiSqueezedQ,
    /// `k = sqrt(2) * 10^(-dB/20)`: squeezed in `q`.
    SqueezedQ,
}

impl SqueezeConvention {
    pub fn inverted(self) -> Self {
        match self {
            SqueezeConvention::AntiSqueezedQ => SqueezeConvention::SqueezedQ,
            SqueezeConvention::SqueezedQ => SqueezeConvention::AntiSqueezedQ,
        }
    }
}

/// Squeezing parameter `k` for a given amount of squeezing in dB.
pub fn db_to_k(squeezing_db: f64, direction: SqueezeConvention) -> f64 {
    let exponent = match direction {
        SqueezeConvention::AntiSqueezedQ => squeezing_db / 20.0,
        SqueezeConvention::SqueezedQ => -squeezing_db / 20.0,
    };
    2f64.sqrt() * 10f64.powf(exponent)
}

/// Inverse of [`db_to_k`].
pub fn k_to_db(k: f64, direction: SqueezeConvention) -> f64 {
    let db = 20.0 * (k / 2f64.sqrt()).log10();
    match direction {
        SqueezeConvention::AntiSqueezedQ => db,
        SqueezeConvention::SqueezedQ => -db,
    }
}

/// Displaced squeezed state `D(alpha) S(k) |0>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedParams {
    pub alpha: Complex64,
    pub k: f64,
}

impl SqueezedParams {
    pub fn new(alpha: Complex64, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) || !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(Error::InvalidParameter(format!("squeezed state needs k > 0, got {k}")));
        }
        Ok(SqueezedParams { alpha, k })
    }

    /// Parametrize by the quadrature displacements `q0 = sqrt(2) Re(alpha)`, `p0 = sqrt(2) Im(alpha)`.
    pub fn from_quadratures(q0: f64, p0: f64, k: f64) -> Result<Self> {
        SqueezedParams::new(Complex64::new(q0, p0) / 2f64.sqrt(), k)
    }

    pub fn vacuum() -> Self {
        SqueezedParams {
            alpha: Complex64::new(0.0, 0.0),
            k: 2f64.sqrt(),
        }
    }

    pub fn q0(&self) -> f64 {
        2f64.sqrt() * self.alpha.re
    }

    pub fn p0(&self) -> f64 {
        2f64.sqrt() * self.alpha.im
    }

    /// Closed-form `sigma_{alpha,k}(s)`, normalized on the real line.
    pub fn amplitude(&self, s: f64) -> Complex64 {
        let c = (self.k * (PI / 2.0).sqrt()).powf(-0.5);
        let (q0, p0) = (self.q0(), self.p0());
        Complex64::from_polar(c * (-(s - q0).powi(2) / (self.k * self.k)).exp(), p0 * s)
    }
}

/// Fock state `|n>` sampled on the grid.
///
/// Uses the three-term recurrence for normalized Hermite functions,
/// `phi_{j+1} = sqrt(2/(j+1)) s phi_j - sqrt(j/(j+1)) phi_{j-1}`,
/// which stays finite where `H_n(s)` alone would overflow.
pub fn make_fock(n: usize, grid: Grid) -> Result<WaveFunction> {
    if n > 60 {
        return Err(Error::InvalidParameter(format!("Fock index {n} exceeds 60")));
    }
    let psi = WaveFunction::from_fn(grid, |s| Complex64::new(hermite_function(n, s), 0.0));
    psi.check_support()?;
    Ok(psi.normalized()?.0)
}

pub(crate) fn hermite_function(n: usize, s: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI.powf(-0.25) * (-0.5 * s * s).exp();
    for j in 0..n {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * s * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub fn make_squeezed(params: SqueezedParams, grid: Grid) -> Result<WaveFunction> {
    let psi = WaveFunction::from_fn(grid, |s| params.amplitude(s));
    psi.check_support()?;
    Ok(psi.normalized()?.0)
}

pub fn make_coherent(alpha: Complex64, grid: Grid) -> Result<WaveFunction> {
    make_squeezed(SqueezedParams { alpha, k: 2f64.sqrt() }, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Annihilate,
    Create,
}

/// `a psi` or `a^dag psi` with a spectral derivative. The output is left
/// unnormalized; its squared norm is returned alongside.
pub fn apply_ladder(psi: &WaveFunction, which: Ladder) -> (WaveFunction, f64) {
    let grid = *psi.grid();
    let d = spectral::derivative(psi.amps(), grid.spacing());
    let sign = match which {
        Ladder::Annihilate => 1.0,
        Ladder::Create => -1.0,
    };
    let inv_sqrt2 = 0.5f64.sqrt();
    let amps = grid
        .points()
        .zip(psi.amps().iter().zip(&d))
        .map(|(q, (a, da))| (a * q + da * sign) * inv_sqrt2)
        .collect();
    let out = WaveFunction::from_parts(grid, amps);
    let weight = out.norm_sq();
    (out, weight)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `F`, kernel `e^{i s t} / sqrt(2 pi)`.
    Forward,
    /// `F^dag`, kernel `e^{-i s t} / sqrt(2 pi)`.
    Inverse,
}

/// Optical Fourier transform, evaluated on the same (symmetric) grid.
pub fn fourier(psi: &WaveFunction, direction: Direction) -> Result<WaveFunction> {
    let grid = *psi.grid();
    if !grid.is_symmetric() {
        return Err(Error::AsymmetricGrid);
    }
    let sign = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => -1.0,
    };
    let amps = spectral::continuous_ft(psi.amps(), grid.q_min(), grid.spacing(), sign);
    Ok(WaveFunction::from_parts(grid, amps))
}

/// Weyl translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Translation {
    /// `X(s) = e^{-i s p}`: `psi(q) -> psi(q - s)`.
    X,
    /// `Z(s) = e^{i s q}`: `psi(q) -> e^{i s q} psi(q)`.
    Z,
}

pub fn displace(psi: &WaveFunction, kind: Translation, s: f64) -> Result<WaveFunction> {
    match kind {
        Translation::Z => Ok(psi.map_q(|q| Complex64::from_polar(1.0, s * q))),
        Translation::X => {
            let grid = *psi.grid();
            let amps = spectral::shift(psi.amps(), grid.spacing(), s);
            let out = WaveFunction::from_parts(grid, amps);
            if out.edge_ratio() > EDGE_TOLERANCE.max(psi.edge_ratio() * 10.0) {
                return Err(Error::GridTooNarrow {
                    edge: out.edge_ratio(),
                    peak: 1.0,
                });
            }
            Ok(out)
        }
    }
}

/// `<a|b>` with trapezoid weights.
pub fn inner(a: &WaveFunction, b: &WaveFunction) -> Result<Complex64> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = a.grid();
    let last = grid.len() - 1;
    let sum: Complex64 = a
        .amps()
        .iter()
        .zip(b.amps())
        .enumerate()
        .map(|(i, (x, y))| {
            let w = if i == 0 || i == last { 0.5 } else { 1.0 };
            x.conj() * y * w
        })
        .sum();
    Ok(sum * grid.spacing())
}
