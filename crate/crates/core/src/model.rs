//! Physical parameters, the square-wave coupling schedule and the
//! Tavis-Cummings Hamiltonian with counter-rotating terms.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::hilbert::{BasisState, Space};
use crate::{Error, Result};

/// ω₀, ω_c (rad/ns), the effective coupling δ·g₀ (rad/ns) and the truncated
/// space the dynamics run in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega0: f64,
    omega_c: f64,
    g_eff: f64,
    space: Space,
}

impl SystemParams {
    pub fn new(omega0: f64, omega_c: f64, g_eff: f64, n_qubits: usize, n_max: usize) -> Result<Self> {
        let space = Space::new(n_qubits, n_max)?;
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParameter { name: "omega0", reason: "must be finite and > 0" });
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidParameter { name: "omega_c", reason: "must be finite and > 0" });
        }
        if !(g_eff.is_finite() && g_eff >= 0.0) {
            return Err(Error::InvalidParameter { name: "g_eff", reason: "must be finite and >= 0" });
        }
        if g_eff >= omega0 || g_eff >= omega_c {
            return Err(Error::InvalidParameter {
                name: "g_eff",
                reason: "must be smaller than both omega0 and omega_c",
            });
        }
        Ok(SystemParams { omega0, omega_c, g_eff, space })
    }

    /// Same as [`new`](Self::new) with ordinary frequencies in GHz, converted
    /// to rad/ns by a factor 2π.
    pub fn from_ghz(omega0_ghz: f64, omega_c_ghz: f64, g_eff_ghz: f64, n_qubits: usize, n_max: usize) -> Result<Self> {
        Self::new(2.0 * PI * omega0_ghz, 2.0 * PI * omega_c_ghz, 2.0 * PI * g_eff_ghz, n_qubits, n_max)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn g_eff(&self) -> f64 {
        self.g_eff
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n_qubits(&self) -> usize {
        self.space.n_qubits()
    }

    pub fn n_max(&self) -> usize {
        self.space.n_max()
    }

    /// Copy of these parameters on a different photon cutoff.
    pub fn with_n_max(&self, n_max: usize) -> Self {
        SystemParams { space: Space::new(self.n_qubits(), n_max).expect("qubit count already validated"), ..*self }
    }

    pub fn with_g_eff(&self, g_eff: f64) -> Result<Self> {
        Self::new(self.omega0, self.omega_c, g_eff, self.n_qubits(), self.n_max())
    }

    /// Unperturbed energy ω_c·n + ω₀·(x̄·1̄).
    pub fn energy(&self, state: &BasisState) -> f64 {
        self.omega_c * state.photons() as f64 + self.omega0 * state.excitations() as f64
    }

    /// Diagonal of H₀ in canonical order.
    pub fn energies(&self) -> Vec<f64> {
        self.space.enumerate().iter().map(|b| self.energy(b)).collect()
    }

    /// Square wave with amplitude `g_eff` and the given period.
    pub fn schedule(&self, period: f64) -> Result<CouplingSchedule> {
        CouplingSchedule::new(self.g_eff, period)
    }

    /// Square wave with amplitude `g_eff` switching at `ratio · ω₀`.
    pub fn schedule_for_ratio(&self, ratio: f64) -> Result<CouplingSchedule> {
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::InvalidParameter { name: "switch_ratio", reason: "must be finite and > 0" });
        }
        CouplingSchedule::from_switch_freq(self.g_eff, ratio * self.omega0)
    }
}

/// One half-period of the switching grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    /// Coupling is `g0` when true, zero otherwise.
    pub on: bool,
}

impl Segment {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Square-wave coupling: `g0` on `[k·T, (k+½)·T)` and zero on
/// `[(k+½)·T, (k+1)·T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSchedule {
    g0: f64,
    period: f64,
}

impl CouplingSchedule {
    pub fn new(g0: f64, period: f64) -> Result<Self> {
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidParameter { name: "period", reason: "must be finite and > 0" });
        }
        if !(g0.is_finite() && g0 >= 0.0) {
            return Err(Error::InvalidParameter { name: "g0", reason: "must be finite and >= 0" });
        }
        Ok(CouplingSchedule { g0, period })
    }

    /// Schedule with switching (angular) frequency ϖ_s, i.e. `T = 2π/ϖ_s`.
    pub fn from_switch_freq(g0: f64, switch_freq: f64) -> Result<Self> {
        if !(switch_freq.is_finite() && switch_freq > 0.0) {
            return Err(Error::InvalidParameter { name: "switch_freq", reason: "must be finite and > 0" });
        }
        Self::new(g0, 2.0 * PI / switch_freq)
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn switch_freq(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn half_period(&self) -> f64 {
        0.5 * self.period
    }

    /// Whether the coupling is on at `t` (right-continuous at switches).
    pub fn is_on(&self, t: f64) -> Result<bool> {
        if t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        Ok(Float::floor(t / self.half_period()) as u64 % 2 == 0)
    }

    pub fn coupling_at(&self, t: f64) -> Result<f64> {
        Ok(if self.is_on(t)? { self.g0 } else { 0.0 })
    }

    /// Half-period segments covering `[0, t_final]`; the last one is cut at
    /// `t_final`.
    pub fn segments(&self, t_final: f64) -> Vec<Segment> {
        let half = self.half_period();
        let mut out = Vec::new();
        let mut k = 0u64;
        loop {
            let start = k as f64 * half;
            if start >= t_final && k > 0 {
                break;
            }
            let end = ((k + 1) as f64 * half).min(t_final);
            out.push(Segment { start, end, on: k % 2 == 0 });
            if end >= t_final {
                break;
            }
            k += 1;
        }
        out
    }

    /// Laplace transform of the schedule, `g0 / (s·(1 + e^{−sT/2}))`.
    ///
    /// Poles: `s = 0` and `s = 2πi(2k+1)/T`.
    pub fn laplace_coupling(&self, s: Complex64) -> Result<Complex64> {
        if s.re == 0.0 && s.im == 0.0 {
            return Err(Error::LaplacePole("s = 0"));
        }
        let denom = Complex64::new(1.0, 0.0) + (-s * self.half_period()).exp();
        if denom.norm() <= 1e-12 {
            return Err(Error::LaplacePole("s = 2*pi*i*(2k+1)/T_s"));
        }
        Ok(Complex64::new(self.g0, 0.0) / (s * denom))
    }

    /// Partial sum of the step-function series for the transform,
    /// `g0/(2s)·{1 + Σ_{k<terms} [e^{−kTs} − 2e^{−(2k+1)Ts/2} + e^{−(k+1)Ts}]}`.
    pub fn laplace_coupling_series(&self, s: Complex64, terms: usize) -> Complex64 {
        let t = self.period;
        let one = Complex64::new(1.0, 0.0);
        let mut sum = one;
        for k in 0..terms {
            let k = k as f64;
            sum += (-s * (k * t)).exp() - (-s * ((2.0 * k + 1.0) * 0.5 * t)).exp() * 2.0 + (-s * ((k + 1.0) * t)).exp();
        }
        sum * self.g0 / (s * 2.0)
    }
}

/// One nonzero entry of the unit-strength interaction operator
/// `Σ_l (σ⁺_l a + σ⁻_l a† + σ⁺_l a† + σ⁻_l a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTerm {
    pub row: usize,
    pub col: usize,
    /// √n or √(n+1).
    pub amplitude: f64,
}

/// All matrix elements of the interaction operator within the truncated
/// space, listed column by column. Elements leaving the space are dropped.
pub fn coupling_terms(space: Space) -> Vec<CouplingTerm> {
    let mut out = Vec::new();
    for (col, state) in space.enumerate().iter().enumerate() {
        for q in 0..space.n_qubits() {
            let n = state.photons();
            // photon down (σ⁺a or σ⁻a), then photon up (σ⁻a† or σ⁺a†)
            if n > 0 {
                let target = state.with_flipped(q, n - 1);
                out.push(CouplingTerm {
                    row: space.raw_index(target.packed_bits(), n - 1),
                    col,
                    amplitude: Float::sqrt(n as f64),
                });
            }
            if n < space.n_max() {
                let target = state.with_flipped(q, n + 1);
                out.push(CouplingTerm {
                    row: space.raw_index(target.packed_bits(), n + 1),
                    col,
                    amplitude: Float::sqrt((n + 1) as f64),
                });
            }
        }
    }
    out
}

/// Number of raising elements out of `state` that the cutoff removes.
pub fn dropped_raising_terms(space: Space, state: &BasisState) -> usize {
    if state.photons() >= space.n_max() {
        space.n_qubits()
    } else {
        0
    }
}

/// `H₀ + c·V` in the canonical basis for an instantaneous coupling `c`.
/// Real symmetric by construction.
pub fn hamiltonian_matrix(params: &SystemParams, coupling_value: f64) -> DMatrix<f64> {
    let space = params.space();
    let dim = space.dim();
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(params.energies()));
    if coupling_value != 0.0 {
        for term in coupling_terms(space) {
            h[(term.row, term.col)] += coupling_value * term.amplitude;
        }
    }
    debug_assert_eq!(h.nrows(), dim);
    h
}
