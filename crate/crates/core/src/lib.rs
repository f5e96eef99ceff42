//! Grid simulation of measurement-based polynomial gates on a single optical mode.
//!
//! A gate `exp(-i t P(q))` is approximated by its truncated Taylor polynomial,
//! factored into monomials `(q - lambda_j)`. Each monomial is applied by one
//! step of either protocol:
//!
//! * [`method1`]: photon-subtracted squeezed ancilla, CZ coupling and a
//!   homodyne measurement of `p` on the input mode;
//! * [`method2`]: squeezed ancilla, CZ coupling and a single-photon projection
//!   on the ancilla.
//!
//! Closed-form effective steps live in [`gates`]; [`oracle`] re-derives them by
//! brute-force two-mode simulation. [`analysis`] holds fidelities, Wigner
//! functions and the input sweeps.

pub mod analysis;
pub mod error;
pub mod gates;
pub mod method1;
pub mod method2;
pub mod moments;
pub mod oracle;
mod par;
pub mod quadrature;
mod spectral;
pub mod states;

pub use error::{Error, Result};
pub use num_complex::Complex64;
