//! Exact propagation of the Schrödinger equation for the switched coupling.
//!
//! The Hamiltonian only takes two values (coupling on, coupling off), each
//! constant over a half-period. Both are diagonalized once; every step runs
//! from one switching instant to the next, so no step straddles a jump.
//! Samples are branched off the state at the preceding switching instant and
//! never feed back into the stepping.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::hilbert::StateVector;
use crate::linalg::{self, Eigensystem};
use crate::model::{hamiltonian_matrix, CouplingSchedule, SystemParams};
use crate::{Error, Result};

/// Report threshold for [`convergence_check`].
pub const CONVERGENCE_TOL: f64 = 1e-4;

/// `e^{−iH·dt}|ψ⟩` for a constant real-symmetric `H`.
pub fn evolve_segment(h: &DMatrix<f64>, dt: f64, state: &StateVector) -> Result<StateVector> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidParameter { name: "dt", reason: "must be >= 0" });
    }
    if h.nrows() != state.space().dim() {
        return Err(Error::DimensionMismatch { expected: state.space().dim(), got: h.nrows() });
    }
    let eig = Eigensystem::new(h)?;
    if dt == 0.0 {
        return Ok(state.clone());
    }
    StateVector::new(state.space(), eig.evolve(dt, state.amplitudes()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: StateVector,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub params: SystemParams,
    pub schedule: CouplingSchedule,
    pub sample_dt: f64,
    pub t_final: f64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    pub fn excitation_probabilities(&self, qubit: usize) -> Result<Vec<f64>> {
        self.samples.iter().map(|s| s.state.excitation_probability(qubit)).collect()
    }

    pub fn final_state(&self) -> &StateVector {
        &self.samples.last().expect("trajectory has at least one sample").state
    }

    /// Largest `|‖ψ‖ − 1|` over all samples.
    pub fn max_norm_drift(&self) -> f64 {
        self.samples.iter().map(|s| (s.state.norm() - 1.0).abs()).fold(0.0, f64::max)
    }
}

/// Sample times `k·sample_dt` for `k = 0, 1, …` up to `t_final`.
pub fn sample_times(t_final: f64, sample_dt: f64) -> Vec<f64> {
    let n = Float::floor(t_final / sample_dt * (1.0 + 1e-12)) as usize;
    (0..=n).map(|k| k as f64 * sample_dt).collect()
}

fn check_grid(t_final: f64, sample_dt: f64) -> Result<()> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidParameter { name: "t_final", reason: "must be finite and > 0" });
    }
    if !(sample_dt.is_finite() && sample_dt > 0.0) {
        return Err(Error::InvalidParameter { name: "sample_dt", reason: "must be finite and > 0" });
    }
    Ok(())
}

/// The two segment Hamiltonians, diagonalized, plus their half-period
/// propagators.
struct SegmentPropagators {
    on: Eigensystem,
    off: Eigensystem,
    on_half: DMatrix<Complex64>,
    off_half: DMatrix<Complex64>,
    half: f64,
}

impl SegmentPropagators {
    fn new(params: &SystemParams, schedule: &CouplingSchedule) -> Result<Self> {
        let on = Eigensystem::new(&hamiltonian_matrix(params, schedule.g0()))?;
        let off = Eigensystem::new(&hamiltonian_matrix(params, 0.0))?;
        let half = schedule.half_period();
        Ok(SegmentPropagators { on_half: on.unitary(half), off_half: off.unitary(half), on, off, half })
    }

    fn advance(&self, on: bool, dt: f64, psi: &[Complex64]) -> Vec<Complex64> {
        if dt == 0.0 {
            return psi.to_vec();
        }
        let (eig, full) = if on { (&self.on, &self.on_half) } else { (&self.off, &self.off_half) };
        // (k+1)·h − k·h is h only up to rounding
        if (dt - self.half).abs() <= 1e-12 * self.half {
            linalg::apply(full, psi)
        } else {
            eig.evolve(dt, psi)
        }
    }
}

/// Evolves `|gg…g, 0⟩` over `[0, t_final]`, sampling every `sample_dt`.
pub fn propagate(
    params: &SystemParams,
    schedule: &CouplingSchedule,
    t_final: f64,
    sample_dt: f64,
) -> Result<Trajectory> {
    propagate_from(params, schedule, StateVector::ground(params.space()), t_final, sample_dt)
}

pub fn propagate_from(
    params: &SystemParams,
    schedule: &CouplingSchedule,
    initial: StateVector,
    t_final: f64,
    sample_dt: f64,
) -> Result<Trajectory> {
    check_grid(t_final, sample_dt)?;
    let space = params.space();
    if initial.space() != space {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: initial.space().dim() });
    }
    let props = SegmentPropagators::new(params, schedule)?;
    let times = sample_times(t_final, sample_dt);
    let mut samples = Vec::with_capacity(times.len());
    let mut next_sample = 0;
    let mut psi = initial.into_amplitudes();
    let segments = schedule.segments(t_final);
    let last = segments.len() - 1;
    for (i, seg) in segments.iter().enumerate() {
        while next_sample < times.len() {
            let t = times[next_sample];
            let inside = t < seg.end || (i == last && t <= t_final * (1.0 + 1e-12));
            if !inside {
                break;
            }
            let amps = props.advance(seg.on, (t - seg.start).max(0.0), &psi);
            samples.push(Sample { t, state: StateVector::new(space, amps)? });
            next_sample += 1;
        }
        psi = props.advance(seg.on, seg.duration(), &psi);
    }
    Ok(Trajectory { samples, params: *params, schedule: *schedule, sample_dt, t_final })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub n_max: usize,
    /// `sup_t |P(n_max) − P(n_max + 1)|`.
    pub sup_diff: f64,
    pub converged: bool,
}

/// Compares the excitation probability of `qubit` at cutoffs `n_max` and
/// `n_max + 1`.
pub fn convergence_check(
    params: &SystemParams,
    schedule: &CouplingSchedule,
    t_final: f64,
    sample_dt: f64,
    n_max: usize,
    qubit: usize,
) -> Result<ConvergenceReport> {
    if n_max < 1 {
        return Err(Error::InvalidParameter { name: "n_max", reason: "convergence check needs n_max >= 1" });
    }
    let lo = propagate(&params.with_n_max(n_max), schedule, t_final, sample_dt)?.excitation_probabilities(qubit)?;
    let hi = propagate(&params.with_n_max(n_max + 1), schedule, t_final, sample_dt)?.excitation_probabilities(qubit)?;
    let sup_diff = lo.iter().zip(&hi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(ConvergenceReport { n_max, sup_diff, converged: sup_diff <= CONVERGENCE_TOL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Space;
    use alloc::vec;

    fn device(n_max: usize) -> SystemParams {
        SystemParams::from_ghz(5.439, 4.343, 0.050, 2, n_max).unwrap()
    }

    #[test]
    fn zero_step_is_identity() {
        let p = device(1);
        let h = hamiltonian_matrix(&p, 0.3);
        let psi = StateVector::basis(p.space(), 3);
        assert_eq!(evolve_segment(&h, 0.0, &psi).unwrap(), psi);
    }

    #[test]
    fn diagonal_phases() {
        let p = device(1);
        let h = hamiltonian_matrix(&p, 0.0);
        let amp = 1.0 / 8f64.sqrt();
        let psi = StateVector::new(p.space(), vec![Complex64::new(amp, 0.0); 8]).unwrap();
        let dt = 0.123;
        let out = evolve_segment(&h, dt, &psi).unwrap();
        for (k, e) in p.energies().iter().enumerate() {
            let want = Complex64::new(0.0, -e * dt).exp() * amp;
            assert!((out[k] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn two_level_rabi() {
        let g = 0.8;
        let h = DMatrix::from_row_slice(2, 2, &[0.0, g, g, 0.0]);
        let space = Space::new(1, 0).unwrap();
        let dt = 1.3;
        let out = evolve_segment(&h, dt, &StateVector::basis(space, 0)).unwrap();
        assert!((out[0] - Complex64::new((g * dt).cos(), 0.0)).norm() < 1e-14);
        assert!((out[1] - Complex64::new(0.0, -(g * dt).sin())).norm() < 1e-14);
    }

    #[test]
    fn negative_dt_rejected() {
        let p = device(1);
        let h = hamiltonian_matrix(&p, 0.3);
        assert!(evolve_segment(&h, -1.0, &StateVector::ground(p.space())).is_err());
    }

    #[test]
    fn no_coupling_stays_ground() {
        let p = device(2).with_g_eff(0.0).unwrap();
        let s = p.schedule_for_ratio(20.0).unwrap();
        let traj = propagate(&p, &s, 2.0, 0.05).unwrap();
        for sample in &traj.samples {
            assert_eq!(sample.state.excitation_probability(0).unwrap(), 0.0);
            assert_eq!(sample.state.photon_expectation(), 0.0);
        }
    }

    #[test]
    fn sample_grid() {
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let traj = propagate(&p, &s, 1.0, 0.1).unwrap();
        assert_eq!(traj.samples.len(), 11);
        assert_eq!(traj.samples[0].state, StateVector::ground(p.space()));
        assert!((traj.samples[10].t - 1.0).abs() < 1e-12);
        assert!(propagate(&p, &s, 0.0, 0.1).is_err());
        assert!(propagate(&p, &s, 1.0, 0.0).is_err());
    }

    #[test]
    fn norm_preserved_device_parameters() {
        let p = device(2);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let traj = propagate(&p, &s, 10.0, 0.05).unwrap();
        assert!(traj.max_norm_drift() < 1e-9);
    }

    #[test]
    fn convergence_zero_coupling() {
        let p = device(1).with_g_eff(0.0).unwrap();
        let s = p.schedule_for_ratio(20.0).unwrap();
        let r = convergence_check(&p, &s, 1.0, 0.1, 1, 0).unwrap();
        assert_eq!(r.sup_diff, 0.0);
        assert!(r.converged);
        assert!(convergence_check(&p, &s, 1.0, 0.1, 0, 0).is_err());
    }
}
