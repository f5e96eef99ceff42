//! FFT plumbing shared by the grid operators.
//!
//! Every routine treats the sampled amplitudes as one period of a band-limited
//! signal. States are expected to vanish at the grid edges, so the periodic
//! extension never matters in practice.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(len)
        } else {
            p.plan_fft_forward(len)
        }
    })
}

pub(crate) fn fft_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), false).process(buf);
}

/// Unnormalized inverse; callers divide by the length.
pub(crate) fn ifft_in_place(buf: &mut [Complex64]) {
    plan(buf.len(), true).process(buf);
}

/// Angular wavenumbers matching the FFT output ordering. The Nyquist bin is
/// mapped to zero so that derivatives of real signals stay real.
pub(crate) fn wavenumbers(n: usize, dq: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (n as f64 * dq);
    (0..n)
        .map(|j| {
            if 2 * j == n {
                0.0
            } else if j < n / 2 {
                j as f64 * scale
            } else {
                (j as f64 - n as f64) * scale
            }
        })
        .collect()
}

pub(crate) fn derivative(amps: &[Complex64], dq: f64) -> Vec<Complex64> {
    let n = amps.len();
    let mut buf = amps.to_vec();
    fft_in_place(&mut buf);
    for (c, k) in buf.iter_mut().zip(wavenumbers(n, dq)) {
        *c *= Complex64::new(0.0, k);
    }
    ifft_in_place(&mut buf);
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv);
    buf
}

/// Spectrum of `amps`, kept around so repeated shifts cost one inverse FFT each.
#[derive(Debug, Clone)]
pub(crate) struct Spectrum {
    coeffs: Vec<Complex64>,
    wavenumbers: Vec<f64>,
}

impl Spectrum {
    pub(crate) fn new(amps: &[Complex64], dq: f64) -> Self {
        let mut coeffs = amps.to_vec();
        fft_in_place(&mut coeffs);
        Spectrum {
            coeffs,
            wavenumbers: wavenumbers(amps.len(), dq),
        }
    }

    /// Samples of `f(q - s)` on the original nodes.
    pub(crate) fn shifted(&self, s: f64) -> Vec<Complex64> {
        let n = self.coeffs.len();
        let mut buf: Vec<Complex64> = self
            .coeffs
            .iter()
            .zip(&self.wavenumbers)
            .map(|(c, &k)| c * Complex64::from_polar(1.0, -k * s))
            .collect();
        ifft_in_place(&mut buf);
        let inv = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= inv);
        buf
    }
}

pub(crate) fn shift(amps: &[Complex64], dq: f64, s: f64) -> Vec<Complex64> {
    Spectrum::new(amps, dq).shifted(s)
}

/// Continuous Fourier integral sampled back on the same nodes:
///
/// `out[j] = dq / sqrt(2 pi) * sum_i amps[i] * exp(sign * i * t_j * s_i)`
///
/// with `s_i = t_i = q_min + i * dq`. The node products are split with the
/// chirp identity `ij = (i^2 + j^2 - (j - i)^2) / 2`, which turns the sum into a
/// convolution evaluated by FFT in O(N log N).
pub(crate) fn continuous_ft(amps: &[Complex64], q_min: f64, dq: f64, sign: f64) -> Vec<Complex64> {
    let n = amps.len();
    let m = (2 * n).next_power_of_two();
    let a = q_min;
    let d2 = dq * dq;

    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for (i, (xi, ai)) in x.iter_mut().zip(amps).enumerate() {
        let fi = i as f64;
        *xi = ai * Complex64::from_polar(1.0, sign * (a * dq * fi + 0.5 * d2 * fi * fi));
    }
    let mut h = vec![Complex64::new(0.0, 0.0); m];
    for d in 0..n {
        let fd = d as f64;
        let c = Complex64::from_polar(1.0, -sign * 0.5 * d2 * fd * fd);
        h[d] = c;
        if d > 0 {
            h[m - d] = c;
        }
    }
    fft_in_place(&mut x);
    fft_in_place(&mut h);
    for (xi, hi) in x.iter_mut().zip(&h) {
        *xi *= hi;
    }
    ifft_in_place(&mut x);

    let scale = dq / (2.0 * PI).sqrt() / m as f64;
    (0..n)
        .map(|j| {
            let fj = j as f64;
            let outer = Complex64::from_polar(1.0, sign * (a * a + a * dq * fj + 0.5 * d2 * fj * fj));
            x[j] * outer * scale
        })
        .collect()
}
