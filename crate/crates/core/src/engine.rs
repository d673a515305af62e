//! Order-by-order perturbation theory for the switched coupling.
//!
//! The Laplace-domain recursion
//!
//! ```text
//! i·s·A⁽ʲ⁾_S − α⁽ʲ⁾_S(0) = E_S·A⁽ʲ⁾_S + G(s) ∗ Σ V_{S,S'} A⁽ʲ⁻¹⁾_{S'}
//! ```
//!
//! is the transform of `i·dα⁽ʲ⁾_S/dt = E_S·α⁽ʲ⁾_S + g(t)·Σ V_{S,S'} α⁽ʲ⁻¹⁾_{S'}`,
//! since the convolution of transforms is the transform of the product
//! `g(t)·α(t)`. On each half-period `g` is constant and the solution is
//!
//! ```text
//! α(t) = e^{−iE t}·[ α(a)·e^{iE a} − i·g·∫ₐᵗ e^{iEτ}·src(τ) dτ ]
//! ```
//!
//! which stays inside [`ExpPoly`], the class that residue inversion of the
//! Laplace expressions produces. Each coefficient is stored as one `ExpPoly`
//! per segment, matched continuously at the switching instants.
//!
//! Order 0 starts in a basis state with `α⁽⁰⁾(t) = e^{−iE t}` (so the ground
//! state is the constant 1) and every higher order vanishes at `t = 0`. The
//! expansion parameter is absorbed into the coupling (δ = 1, g₀ = g_eff).
//! Truncated states are never renormalized.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use crate::exppoly::ExpPoly;
use crate::hilbert::StateVector;
use crate::model::{coupling_terms, dropped_raising_terms, CouplingSchedule, Segment, SystemParams};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A coefficient α⁽ʲ⁾_S(t): one [`ExpPoly`] per switching segment.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Piecewise {
    pieces: Vec<ExpPoly>,
}

impl Piecewise {
    pub fn pieces(&self) -> &[ExpPoly] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(ExpPoly::is_empty)
    }
}

/// All coefficients of one order, indexed like the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderTable {
    coeffs: Vec<Piecewise>,
    dropped: usize,
}

impl OrderTable {
    pub fn coefficient(&self, state: usize) -> &Piecewise {
        &self.coeffs[state]
    }

    pub fn coefficients(&self) -> &[Piecewise] {
        &self.coeffs
    }

    /// Basis indices with a nonzero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, _)| k).collect()
    }

    /// Raising couplings out of the cutoff that were discarded while
    /// building this order.
    pub fn dropped_couplings(&self) -> usize {
        self.dropped
    }
}

#[derive(Debug, Clone)]
pub struct PerturbativeSolution {
    params: SystemParams,
    schedule: CouplingSchedule,
    t_final: f64,
    segments: Vec<Segment>,
    orders: Vec<OrderTable>,
}

/// Order 0 from the basis state `initial`.
pub fn zeroth_order(
    params: &SystemParams,
    schedule: &CouplingSchedule,
    t_final: f64,
    initial: usize,
) -> Result<PerturbativeSolution> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidParameter { name: "t_final", reason: "must be finite and > 0" });
    }
    let space = params.space();
    if initial >= space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: initial + 1 });
    }
    let segments = schedule.segments(t_final);
    let energy = params.energy(&space.state(initial));
    let free = ExpPoly::exp(Complex64::new(1.0, 0.0), -I * energy);
    let coeffs = (0..space.dim())
        .map(|k| Piecewise {
            pieces: if k == initial {
                alloc::vec![free.clone(); segments.len()]
            } else {
                alloc::vec![ExpPoly::zero(); segments.len()]
            },
        })
        .collect();
    Ok(PerturbativeSolution {
        params: *params,
        schedule: *schedule,
        t_final,
        segments,
        orders: alloc::vec![OrderTable { coeffs, dropped: 0 }],
    })
}

/// Runs the recursion from `|gg…g, 0⟩` up to order `j_max`.
pub fn run_to_order(
    params: &SystemParams,
    schedule: &CouplingSchedule,
    j_max: usize,
    t_final: f64,
) -> Result<PerturbativeSolution> {
    let mut sol = zeroth_order(params, schedule, t_final, params.space().ground_index())?;
    sol.extend_to(j_max);
    Ok(sol)
}

impl PerturbativeSolution {
    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn schedule(&self) -> &CouplingSchedule {
        &self.schedule
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Highest order computed.
    pub fn max_order(&self) -> usize {
        self.orders.len() - 1
    }

    pub fn order(&self, j: usize) -> &OrderTable {
        &self.orders[j]
    }

    /// Total dropped raising couplings over all orders.
    pub fn dropped_couplings(&self) -> usize {
        self.orders.iter().map(|o| o.dropped).sum()
    }

    /// Builds the next order from the highest one present, without storing it.
    pub fn next_order(&self) -> OrderTable {
        let prev = self.orders.last().expect("order 0 always present");
        let space = self.params.space();
        let dim = space.dim();
        let g0 = self.schedule.g0();
        let energies = self.params.energies();

        let mut incoming: Vec<Vec<(usize, f64)>> = alloc::vec![Vec::new(); dim];
        for term in coupling_terms(space) {
            incoming[term.row].push((term.col, term.amplitude));
        }

        let states = space.enumerate();
        let dropped = prev
            .coeffs
            .iter()
            .zip(&states)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, s)| dropped_raising_terms(space, s))
            .sum();

        let coeffs = (0..dim)
            .map(|target| {
                let energy = energies[target];
                let mut value = Complex64::zero();
                let mut pieces = Vec::with_capacity(self.segments.len());
                for (k, seg) in self.segments.iter().enumerate() {
                    // constant that carries α(a) into this segment
                    let carried = value * (I * energy * seg.start).exp();
                    let mut terms: Vec<_> = Vec::new();
                    if seg.on && g0 != 0.0 {
                        for &(source, amp) in &incoming[target] {
                            let src = &prev.coeffs[source].pieces[k];
                            terms.extend(
                                src.terms().iter().map(|t| crate::exppoly::Term { coeff: t.coeff * amp, ..*t }),
                            );
                        }
                    }
                    let piece = if terms.is_empty() {
                        ExpPoly::exp(carried, -I * energy)
                    } else {
                        let driven =
                            ExpPoly::from_terms(terms).mul_exp(I * energy).integrate_from(seg.start).scale(-I * g0);
                        driven.add(&ExpPoly::constant(carried)).mul_exp(-I * energy)
                    };
                    value = piece.eval(seg.end);
                    pieces.push(piece);
                }
                Piecewise { pieces }
            })
            .collect();
        OrderTable { coeffs, dropped }
    }

    /// Appends orders until `max_order() == j_max`. Existing orders are
    /// never touched.
    pub fn extend_to(&mut self, j_max: usize) {
        while self.max_order() < j_max {
            let next = self.next_order();
            self.orders.push(next);
        }
    }

    fn segment_index(&self, t: f64) -> Result<usize> {
        if !(t >= 0.0 && t <= self.t_final * (1.0 + 1e-12)) {
            return Err(Error::TimeOutOfRange { t, t_final: self.t_final });
        }
        let k = self.segments.partition_point(|s| s.end <= t);
        Ok(k.min(self.segments.len() - 1))
    }

    /// α⁽ʲ⁾_state(t).
    pub fn amplitude(&self, order: usize, state: usize, t: f64) -> Result<Complex64> {
        let k = self.segment_index(t)?;
        Ok(self.orders[order].coeffs[state].pieces[k].eval(t))
    }

    /// Order-`order` contribution ψ⁽ʲ⁾(t).
    pub fn order_state(&self, order: usize, t: f64) -> Result<StateVector> {
        let k = self.segment_index(t)?;
        let amps = self.orders[order].coeffs.iter().map(|c| c.pieces[k].eval(t)).collect();
        StateVector::new(self.params.space(), amps)
    }

    /// Σ_{j ≤ max_order} ψ⁽ʲ⁾(t), not renormalized.
    pub fn state_at(&self, t: f64) -> Result<StateVector> {
        let k = self.segment_index(t)?;
        let dim = self.params.space().dim();
        let amps = (0..dim).map(|s| self.orders.iter().map(|o| o.coeffs[s].pieces[k].eval(t)).sum()).collect();
        StateVector::new(self.params.space(), amps)
    }

    /// Excitation probability of `qubit` from the truncated wavefunction.
    pub fn excitation_probability(&self, qubit: usize, t: f64) -> Result<f64> {
        self.state_at(t)?.excitation_probability(qubit)
    }
}

/// [`PerturbativeSolution::excitation_probability`] as a free function.
pub fn pert_excitation_probability(sol: &PerturbativeSolution, qubit: usize, t: f64) -> Result<f64> {
    sol.excitation_probability(qubit, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::Float;

    fn device(n_max: usize) -> SystemParams {
        SystemParams::from_ghz(5.439, 4.343, 0.050, 2, n_max).unwrap()
    }

    #[test]
    fn order_zero_is_ground() {
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 0, 3.0).unwrap();
        for t in [0.0, 0.77, 3.0] {
            assert_eq!(sol.amplitude(0, 0, t).unwrap(), Complex64::new(1.0, 0.0));
            for k in 1..8 {
                assert_eq!(sol.amplitude(0, k, t).unwrap(), Complex64::zero());
            }
            assert_eq!(sol.state_at(t).unwrap().norm(), 1.0);
            assert_eq!(sol.excitation_probability(0, t).unwrap(), 0.0);
        }
    }

    #[test]
    fn excited_initial_state_rotates() {
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let ge1 = p.space().index_of_label("ge", 1).unwrap();
        let sol = zeroth_order(&p, &s, 1.0, ge1).unwrap();
        let e = p.omega0() + p.omega_c();
        let want = Complex64::new(0.0, -e * 0.4).exp();
        assert!((sol.amplitude(0, ge1, 0.4).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn first_order_selection() {
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 1, 2.0).unwrap();
        let sp = p.space();
        let want = vec![sp.index_of_label("ge", 1).unwrap(), sp.index_of_label("eg", 1).unwrap()];
        assert_eq!(sol.order(1).support(), want);
    }

    #[test]
    fn first_order_first_segment_closed_form() {
        // i·α' = Ω·α + g₀ with α(0) = 0  ⇒  α = (g₀/Ω)(e^{−iΩt} − 1)
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 1, 1.0).unwrap();
        let ge1 = p.space().index_of_label("ge", 1).unwrap();
        let omega = p.omega0() + p.omega_c();
        let g0 = p.g_eff();
        for frac in [0.0, 0.1, 0.3, 0.49] {
            let t = frac * s.period();
            let want = (Complex64::new(0.0, -omega * t).exp() - 1.0) * (g0 / omega);
            assert!((sol.amplitude(1, ge1, t).unwrap() - want).norm() < 1e-15);
        }
    }

    #[test]
    fn no_drive_no_corrections() {
        let p = device(2).with_g_eff(0.0).unwrap();
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 3, 1.0).unwrap();
        for j in 1..=3 {
            assert!(sol.order(j).support().is_empty());
        }
        assert_eq!(sol.excitation_probability(0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn second_order_support() {
        let p = device(2);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 2, 1.0).unwrap();
        let sp = p.space();
        let mut want = vec![
            sp.index_of_label("gg", 0).unwrap(),
            sp.index_of_label("ee", 0).unwrap(),
            sp.index_of_label("gg", 2).unwrap(),
            sp.index_of_label("ee", 2).unwrap(),
        ];
        want.sort();
        assert_eq!(sol.order(2).support(), want);
        assert_eq!(sol.dropped_couplings(), 0);
    }

    #[test]
    fn truncation_is_counted() {
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 2, 1.0).unwrap();
        // ge,1 and eg,1 each lose two raising couplings at order 2
        assert_eq!(sol.order(1).dropped_couplings(), 0);
        assert_eq!(sol.order(2).dropped_couplings(), 4);
    }

    #[test]
    fn lower_orders_not_rewritten() {
        let p = device(2);
        let s = p.schedule_for_ratio(7.0).unwrap();
        let one = run_to_order(&p, &s, 1, 1.5).unwrap();
        let two = run_to_order(&p, &s, 2, 1.5).unwrap();
        assert_eq!(one.order(1), two.order(1));
    }

    #[test]
    fn vanishes_at_start_and_is_continuous() {
        let p = device(2);
        let s = p.schedule_for_ratio(3.3).unwrap();
        let sol = run_to_order(&p, &s, 3, 2.0).unwrap();
        for j in 1..=3 {
            for c in sol.order(j).coefficients() {
                let pieces = c.pieces();
                assert!(pieces[0].eval(0.0).norm() < 1e-15);
                for (k, seg) in sol.segments().iter().enumerate().skip(1) {
                    let jump = pieces[k - 1].eval(seg.start) - pieces[k].eval(seg.start);
                    assert!(jump.norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn time_range_checked() {
        let p = device(1);
        let s = p.schedule_for_ratio(20.0).unwrap();
        let sol = run_to_order(&p, &s, 1, 1.0).unwrap();
        assert!(matches!(sol.amplitude(1, 0, 1.5), Err(Error::TimeOutOfRange { .. })));
        assert!(matches!(sol.amplitude(1, 0, -0.1), Err(Error::TimeOutOfRange { .. })));
        assert!(sol.amplitude(1, 0, 1.0).is_ok());
    }

    #[test]
    fn order_scaling_in_coupling() {
        let p = device(2);
        let p2 = p.with_g_eff(2.0 * p.g_eff()).unwrap();
        let ratio = 6.5;
        let a = run_to_order(&p, &p.schedule_for_ratio(ratio).unwrap(), 2, 1.2).unwrap();
        let b = run_to_order(&p2, &p2.schedule_for_ratio(ratio).unwrap(), 2, 1.2).unwrap();
        for t in [0.013, 0.41, 0.9, 1.17] {
            for j in 1..=2 {
                let factor = Float::powi(2.0, j as i32);
                for s in a.order(j).support() {
                    let x = a.amplitude(j, s, t).unwrap() * factor;
                    let y = b.amplitude(j, s, t).unwrap();
                    assert!((x - y).norm() <= 1e-10 * y.norm().max(1e-300));
                }
            }
        }
    }
}
