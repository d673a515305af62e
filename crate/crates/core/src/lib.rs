//! Dynamics of N qubits coupled to a single-mode resonator whose coupling is
//! switched on and off as a square wave, keeping the counter-rotating terms of
//! the interaction.
//!
//! Three independent routes to the qubit excitation probability live here:
//!
//! * [`propagator`]: exact piecewise propagation. The Hamiltonian is constant
//!   on every half-period, so each segment is an exact matrix exponential.
//! * [`engine`]: order-by-order perturbation theory carried out in closed
//!   form. Every coefficient is a piecewise [`ExpPoly`], the function class
//!   produced by residue inversion of the Laplace-domain recursion.
//! * [`closedform`]: closed-form second-order solutions for two qubits and at
//!   most one photon, kept as an oracle and as the source of the resonance
//!   (parametric divergence) predictions.
//!
//! Units: angular frequencies in rad/ns, time in ns, ħ = 1.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closedform;
pub mod engine;
mod error;
pub mod exppoly;
pub mod hilbert;
pub mod linalg;
pub mod model;
pub mod propagator;

pub use error::{Error, ResonanceKind, Result};
pub use exppoly::ExpPoly;
pub use hilbert::{BasisState, Space, StateVector};
pub use model::{CouplingSchedule, SystemParams};

pub use num_complex::Complex64;
