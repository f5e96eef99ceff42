//! Target q-diagonal unitaries, their truncated Taylor factorization, and the
//! single-step effective transformations realized by the two protocols.
//!
//! Both protocols produce, per step, an operator of the form
//! `A(q) (q - lambda)` with a Gaussian envelope `A(q) = exp(-(q - c)^2 / w)`.
//! Chaining one step per root of the truncated Taylor polynomial reproduces
//! the polynomial up to the product of envelopes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::states::{SqueezedParams, WaveFunction};

/// Largest polynomial degree handed to the companion-matrix root finder.
pub const MAX_PLAN_DEGREE: usize = 24;

const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;

/// `U(t) = exp(-i t P(q))` for a real polynomial `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitary {
    /// Ascending coefficients of `P`.
    pub hamiltonian_coeffs: Vec<f64>,
    pub time: f64,
}

impl DiagonalUnitary {
    pub fn new(hamiltonian_coeffs: Vec<f64>, time: f64) -> Result<Self> {
        let u = DiagonalUnitary {
            hamiltonian_coeffs,
            time,
        };
        if u.degree() < 1 {
            return Err(Error::InvalidParameter("hamiltonian must have degree >= 1".into()));
        }
        if !time.is_finite() || u.hamiltonian_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite hamiltonian".into()));
        }
        Ok(u)
    }

    /// Cubic phase gate `exp(i nu q^3)`.
    pub fn cubic_phase(nu: f64) -> Self {
        DiagonalUnitary {
            hamiltonian_coeffs: vec![0.0, 0.0, 0.0, -1.0],
            time: nu,
        }
    }

    pub fn degree(&self) -> usize {
        self.hamiltonian_coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn hamiltonian(&self, q: f64) -> f64 {
        self.hamiltonian_coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c)
    }

    pub fn eval(&self, q: f64) -> Complex64 {
        Complex64::from_polar(1.0, -self.time * self.hamiltonian(q))
    }

    /// Ascending coefficients of `sum_{j<=n} (-i t P(q))^j / j!`.
    pub fn taylor_coeffs(&self, order_n: usize) -> Vec<Complex64> {
        let gen: Vec<Complex64> = self
            .hamiltonian_coeffs
            .iter()
            .map(|&c| Complex64::new(0.0, -self.time * c))
            .collect();
        let mut total = vec![Complex64::new(1.0, 0.0)];
        let mut term = total.clone();
        for j in 1..=order_n {
            term = poly_mul(&term, &gen);
            term.iter_mut().for_each(|c| *c /= j as f64);
            if total.len() < term.len() {
                total.resize(term.len(), Complex64::new(0.0, 0.0));
            }
            for (t, c) in total.iter_mut().zip(&term) {
                *t += c;
            }
        }
        while total.len() > 1 && total.last().is_some_and(|c| c.norm() == 0.0) {
            total.pop();
        }
        total
    }

    pub fn taylor_eval(&self, order_n: usize, q: f64) -> Complex64 {
        poly_eval(&self.taylor_coeffs(order_n), Complex64::new(q, 0.0))
    }
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// `leading_coeff * prod_j (q - roots[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPlan {
    pub roots: Vec<Complex64>,
    pub leading_coeff: Complex64,
    pub order_n: usize,
    pub degree_l: usize,
}

impl MonomialPlan {
    /// Plan from explicit roots, for hand-built monomial products.
    pub fn from_roots(roots: Vec<Complex64>, leading_coeff: Complex64) -> Self {
        let degree_l = roots.len();
        MonomialPlan {
            roots,
            leading_coeff,
            order_n: 0,
            degree_l,
        }
    }

    pub fn eval(&self, q: f64) -> Complex64 {
        self.roots.iter().fold(self.leading_coeff, |acc, r| acc * (q - r))
    }
}

/// Chebyshev nodes on `[-5, 5]` used to certify factorizations.
fn check_points() -> impl Iterator<Item = f64> {
    (0..20).map(|i| 5.0 * ((2 * i + 1) as f64 * std::f64::consts::PI / 40.0).cos())
}

/// Factor the order-`n` Taylor polynomial of `u` into monomials.
///
/// Roots come from the eigenvalues of the companion matrix, followed by a
/// couple of Newton steps on the original polynomial. They are sorted by
/// imaginary part, then real part.
pub fn taylor_factorize(u: &DiagonalUnitary, order_n: usize) -> Result<MonomialPlan> {
    if order_n < 1 {
        return Err(Error::InvalidParameter("Taylor order must be >= 1".into()));
    }
    let coeffs = u.taylor_coeffs(order_n);
    let degree = coeffs.len() - 1;
    if degree > MAX_PLAN_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "plan degree {degree} exceeds {MAX_PLAN_DEGREE}"
        )));
    }
    let leading = coeffs[degree];
    let mut roots = polynomial_roots(&coeffs);
    roots.sort_by(|a, b| {
        let key = |z: &Complex64| (z.im * 1e9).round();
        key(a).total_cmp(&key(b)).then(a.re.total_cmp(&b.re))
    });
    let plan = MonomialPlan {
        roots,
        leading_coeff: leading,
        order_n,
        degree_l: degree,
    };
    let scale = check_points()
        .map(|q| poly_eval(&coeffs, Complex64::new(q, 0.0)).norm())
        .fold(0.0, f64::max);
    let residual = check_points()
        .map(|q| (plan.eval(q) - poly_eval(&coeffs, Complex64::new(q, 0.0))).norm())
        .fold(0.0, f64::max)
        / scale;
    if !(residual < RECONSTRUCTION_TOLERANCE) {
        return Err(Error::IllConditioned { residual });
    }
    Ok(plan)
}

/// Roots of `sum_i coeffs[i] z^i` from the companion matrix spectrum.
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[degree];
    let mut companion = DMatrix::<Complex64>::zeros(degree, degree);
    for i in 1..degree {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..degree {
        companion[(i, degree - 1)] = -coeffs[i] / lead;
    }
    let eig = companion
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    let deriv: Vec<Complex64> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect();
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..3 {
                let d = poly_eval(&deriv, z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = poly_eval(coeffs, z) / d;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

/// Pointwise multiplication by `f(q)`; not normalized.
pub fn apply_diagonal(psi: &WaveFunction, f: impl Fn(f64) -> Complex64) -> WaveFunction {
    psi.map_q(f)
}

/// The two measurement-based protocols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// Photon-subtracted squeezed ancilla, CZ, homodyne `p` measurement.
    PhotonSubtracted,
    /// Squeezed ancilla, CZ, single-photon projection on the ancilla.
    SinglePhotonCounter,
}

fn method1_denominator(k: f64) -> Result<f64> {
    let d = k * k - 2.0;
    if d.abs() <= 1e-6 {
        return Err(Error::SingularAncilla { k });
    }
    Ok(d)
}

/// Monomial root realized by a photon-subtracted ancilla and homodyne outcome `m`.
pub fn lambda_method1(ancilla: &SqueezedParams, m: f64) -> Result<Complex64> {
    let k2 = ancilla.k * ancilla.k;
    let d = method1_denominator(ancilla.k)?;
    Ok(Complex64::new(-(2.0 / d) * ancilla.q0() - m, -(k2 / d) * ancilla.p0()))
}

/// Root realized when the ancilla is photon-added instead of photon-subtracted.
pub fn lambda_method1_added(ancilla: &SqueezedParams, m: f64) -> Complex64 {
    let k2 = ancilla.k * ancilla.k;
    Complex64::new(2.0 * ancilla.q0() / (k2 + 2.0) - m, k2 * ancilla.p0() / (k2 + 2.0))
}

/// Ancilla displacement placing the Method-1 root at `target_lambda` for outcome `target_m`.
pub fn solve_ancilla_method1(target_lambda: Complex64, k: f64, target_m: f64) -> Result<SqueezedParams> {
    let d = method1_denominator(k)?;
    let q0 = -d * (target_lambda.re + target_m) / 2.0;
    let p0 = -(d / (k * k)) * target_lambda.im;
    SqueezedParams::from_quadratures(q0, p0, k)
}

/// Monomial root realized by the single-photon-counter step.
pub fn lambda_method2(ancilla: &SqueezedParams) -> Complex64 {
    Complex64::new(-ancilla.p0(), 2.0 * ancilla.q0() / (ancilla.k * ancilla.k))
}

pub fn solve_ancilla_method2(target_lambda: Complex64, k: f64) -> Result<SqueezedParams> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    SqueezedParams::from_quadratures(0.5 * k * k * target_lambda.im, -target_lambda.re, k)
}

/// Slope of the output phase `e^{i c q}` left by the Method-2 step; the circuit
/// undoes it with `Z^dag(c)`.
pub fn method2_phase_slope(ancilla: &SqueezedParams) -> f64 {
    2.0 * ancilla.q0() / (2.0 + ancilla.k * ancilla.k)
}

/// Closed-form single step `exp(-(q - c)^2 / w) (q - lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveBlock {
    pub method: Protocol,
    pub ancilla: SqueezedParams,
    pub homodyne_m: Option<f64>,
    pub lambda: Complex64,
    pub envelope_center: f64,
    pub envelope_width_sq: f64,
}

impl EffectiveBlock {
    pub fn photon_subtracted(ancilla: SqueezedParams, m: f64) -> Result<Self> {
        Ok(EffectiveBlock {
            method: Protocol::PhotonSubtracted,
            ancilla,
            homodyne_m: Some(m),
            lambda: lambda_method1(&ancilla, m)?,
            envelope_center: ancilla.q0() - m,
            envelope_width_sq: ancilla.k * ancilla.k,
        })
    }

    pub fn single_photon(ancilla: SqueezedParams) -> Self {
        let k2 = ancilla.k * ancilla.k;
        EffectiveBlock {
            method: Protocol::SinglePhotonCounter,
            ancilla,
            homodyne_m: None,
            lambda: lambda_method2(&ancilla),
            envelope_center: -ancilla.p0(),
            envelope_width_sq: (4.0 + 2.0 * k2) / k2,
        }
    }

    pub fn k(&self) -> f64 {
        self.ancilla.k
    }

    pub fn envelope(&self, q: f64) -> f64 {
        (-(q - self.envelope_center).powi(2) / self.envelope_width_sq).exp()
    }

    pub fn factor(&self, q: f64) -> Complex64 {
        (q - self.lambda) * self.envelope(q)
    }
}

/// Applies the block and normalizes; the pre-normalization squared norm is
/// returned as the weight.
///
/// The envelope is rescaled to peak at 1 inside the grid before it is applied,
/// so a centre far outside the box (strong squeezing) does not underflow the
/// state. The weight is scaled back and may still underflow to zero.
pub fn apply_effective_block(psi: &WaveFunction, block: &EffectiveBlock) -> Result<(WaveFunction, f64)> {
    let g = psi.grid();
    let c = block.envelope_center;
    let w = block.envelope_width_sq;
    let gap = c.clamp(g.q_min(), g.q_max()) - c;
    let log_peak = -gap * gap / w;
    let (out, weight) =
        apply_diagonal(psi, |q| (q - block.lambda) * (-(q - c).powi(2) / w - log_peak).exp()).normalized()?;
    Ok((out, weight * (2.0 * log_peak).exp()))
}
