//! Closed-form first- and second-order amplitudes for two qubits and at most
//! one photon.
//!
//! The expressions keep only the residues at `s = 0` and at the
//! free-evolution poles and drop those of the switching factor
//! `1/(1 + e^{−sT/2})`, so at finite period they differ from the segment-wise
//! solution of [`crate::engine`] (the first-order amplitude
//! does not even vanish at `t = 0`). They agree in the fast-switching limit.
//! The tangent and secant factors blow up when the switching frequency hits
//! `2ω₀`, `ω₀ + ω_c` or `|ω_c − ω₀|` (or an odd-harmonic alias of one), which
//! is where the truncated expansion diverges.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math resolves to std inherent methods when std is linked
use num_traits::Float;

use crate::hilbert::{Space, StateVector};
use crate::model::{CouplingSchedule, SystemParams};
use crate::{Error, ResonanceKind, Result};

/// Default relative guard band around each vanishing denominator.
pub const RESONANCE_GUARD: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormParams {
    omega0: f64,
    omega_c: f64,
    g_eff: f64,
    period: f64,
    guard: f64,
}

impl ClosedFormParams {
    pub fn new(omega0: f64, omega_c: f64, g_eff: f64, period: f64) -> Result<Self> {
        for (name, v) in [("omega0", omega0), ("omega_c", omega_c), ("period", period)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter { name, reason: "must be finite and > 0" });
            }
        }
        if !(g_eff.is_finite() && g_eff >= 0.0) {
            return Err(Error::InvalidParameter { name: "g_eff", reason: "must be finite and >= 0" });
        }
        Ok(ClosedFormParams { omega0, omega_c, g_eff, period, guard: RESONANCE_GUARD })
    }

    pub fn from_switch_freq(omega0: f64, omega_c: f64, g_eff: f64, switch_freq: f64) -> Result<Self> {
        if !(switch_freq.is_finite() && switch_freq > 0.0) {
            return Err(Error::InvalidParameter { name: "switch_freq", reason: "must be finite and > 0" });
        }
        Self::new(omega0, omega_c, g_eff, 2.0 * PI / switch_freq)
    }

    /// Expansion parameter and bare amplitude given separately; only their
    /// product enters.
    pub fn with_split_coupling(omega0: f64, omega_c: f64, delta: f64, g0: f64, period: f64) -> Result<Self> {
        Self::new(omega0, omega_c, delta * g0, period)
    }

    pub fn from_system(params: &SystemParams, schedule: &CouplingSchedule) -> Result<Self> {
        Self::new(params.omega0(), params.omega_c(), schedule.g0(), schedule.period())
    }

    pub fn with_guard(self, guard: f64) -> Self {
        ClosedFormParams { guard, ..self }
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn switch_freq(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Ω = ω₀ + ω_c.
    pub fn omega_sum(&self) -> f64 {
        self.omega0 + self.omega_c
    }

    /// Argument of the tangent whose pole marks resonance `kind`, as a
    /// function of the switching frequency:
    /// `T·ω₀/2`, `T·Ω/4` or `T·(ω_c − ω₀)/4` with `T = 2π/ϖ`.
    pub fn tangent_argument(&self, kind: ResonanceKind, switch_freq: f64) -> f64 {
        let period = 2.0 * PI / switch_freq;
        match kind {
            ResonanceKind::TwoQubit => period * self.omega0 / 2.0,
            ResonanceKind::Sum => period * self.omega_sum() / 4.0,
            ResonanceKind::Difference => period * (self.omega_c - self.omega0) / 4.0,
        }
    }

    /// The cosine underneath the tangent/secant for `kind`; it changes sign
    /// exactly at each pole.
    pub fn denominator(&self, kind: ResonanceKind, switch_freq: f64) -> f64 {
        self.tangent_argument(kind, switch_freq).cos()
    }

    fn guard(&self, kind: ResonanceKind) -> Result<()> {
        let x = self.tangent_argument(kind, self.switch_freq());
        // near a pole cos(x) ≈ ±(x − x_pole), so this is a relative band on ϖ
        if x.cos().abs() < self.guard * x.abs() {
            return Err(Error::Resonance { kind, switch_freq: self.switch_freq() });
        }
        Ok(())
    }

    fn guard_degenerate(&self) -> Result<()> {
        if (self.omega0 - self.omega_c).abs() < self.guard * self.omega0.max(self.omega_c) {
            return Err(Error::DegenerateFrequencies);
        }
        Ok(())
    }

    fn tan_sum(&self) -> f64 {
        (self.period * self.omega_sum() / 4.0).tan()
    }

    /// α⁽¹⁾_{ge,1}(t) = g₀/(2Ω)·(−1 + 2e^{−iΩt}/(1 + e^{iTΩ/2})).
    pub fn alpha1_ge1(&self, t: f64) -> Result<Complex64> {
        self.guard(ResonanceKind::Sum)?;
        let w = self.omega_sum();
        let one = Complex64::new(1.0, 0.0);
        let ratio = (-I * w * t).exp() * 2.0 / (one + (I * 0.5 * self.period * w).exp());
        Ok((ratio - one) * (self.g_eff / (2.0 * w)))
    }

    /// Identical to [`alpha1_ge1`](Self::alpha1_ge1) by qubit exchange symmetry.
    pub fn alpha1_eg1(&self, t: f64) -> Result<Complex64> {
        self.alpha1_ge1(t)
    }

    /// Second-order ground-state correction:
    /// `g₀²·[i(2t + T)Ω − 2i(1 + e^{−iΩt})·tan(TΩ/4) + 2e^{−iΩt} − 2sec²(TΩ/4)] / (4Ω²)`.
    pub fn alpha2_gg0(&self, t: f64) -> Result<Complex64> {
        self.guard(ResonanceKind::Sum)?;
        let w = self.omega_sum();
        let tan_s = self.tan_sum();
        let sec2 = 1.0 / (self.period * w / 4.0).cos().powi(2);
        let phase = (-I * w * t).exp();
        let one = Complex64::new(1.0, 0.0);
        let bracket = I * (2.0 * t + self.period) * w - I * 2.0 * (one + phase) * tan_s + phase * 2.0 - sec2 * 2.0;
        Ok(bracket * (self.g_eff * self.g_eff / (4.0 * w * w)))
    }

    /// Second-order doubly excited amplitude:
    ///
    /// ```text
    /// g₀²/4 · [ 2i·e^{−iΩt}(tan(TΩ/4) + i)/(ω₀² − ω_c²)
    ///         + e^{−2iω₀t}(2ω₀·tan(T(ω_c−ω₀)/4)(tan(TΩ/4) + i) − 2iω_c·tan(Tω₀/2) + ω₀ + ω_c)
    ///             / (ω₀(ω₀ − ω_c)(ω₀ + ω_c))
    ///         + 1/(ω₀² + ω₀ω_c) ]
    /// ```
    pub fn alpha2_ee0(&self, t: f64) -> Result<Complex64> {
        self.guard_degenerate()?;
        self.guard(ResonanceKind::Sum)?;
        self.guard(ResonanceKind::TwoQubit)?;
        self.guard(ResonanceKind::Difference)?;
        let (w0, wc, tp) = (self.omega0, self.omega_c, self.period);
        let w = w0 + wc;
        let tan_s = Complex64::new(self.tan_sum(), 0.0);
        let tan_d = (tp * (wc - w0) / 4.0).tan();
        let tan_q = (tp * w0 / 2.0).tan();
        let first = I * 2.0 * (-I * w * t).exp() * (tan_s + I) / (w0 * w0 - wc * wc);
        let second = (-I * 2.0 * w0 * t).exp() * ((tan_s + I) * (2.0 * w0 * tan_d) - I * 2.0 * wc * tan_q + w)
            / (w0 * (w0 - wc) * w);
        let third = Complex64::new(1.0 / (w0 * w0 + w0 * wc), 0.0);
        Ok((first + second + third) * (self.g_eff * self.g_eff / 4.0))
    }

    /// Truncated wavefunction through second order on the two-qubit,
    /// `n_max = 1` basis. Not normalized.
    pub fn state(&self, t: f64) -> Result<StateVector> {
        let space = Space::new(2, 1)?;
        let a1 = self.alpha1_ge1(t)?;
        let mut psi = StateVector::zeros(space);
        psi[space.index_of_label("gg", 0)?] = Complex64::new(1.0, 0.0) + self.alpha2_gg0(t)?;
        psi[space.index_of_label("ge", 1)?] = a1;
        psi[space.index_of_label("eg", 1)?] = self.alpha1_eg1(t)?;
        psi[space.index_of_label("ee", 0)?] = self.alpha2_ee0(t)?;
        Ok(psi)
    }

    /// Primary divergence frequencies `2ω₀`, `ω₀ + ω_c`, `|ω_c − ω₀|`.
    pub fn divergence_locations(&self) -> Vec<Divergence> {
        let diff = (self.omega_c - self.omega0).abs();
        alloc::vec![
            Divergence { kind: ResonanceKind::TwoQubit, switch_freq: 2.0 * self.omega0, degenerate: false },
            Divergence { kind: ResonanceKind::Sum, switch_freq: self.omega_sum(), degenerate: false },
            Divergence { kind: ResonanceKind::Difference, switch_freq: diff, degenerate: diff == 0.0 },
        ]
    }

    /// Locates every sign change of the three denominators over
    /// `[lo, hi]` (`samples` log-spaced points) and bisects each to full
    /// precision. Sorted by frequency.
    pub fn scan_denominator_poles(&self, lo: f64, hi: f64, samples: usize) -> Vec<Divergence> {
        assert!(lo > 0.0 && hi > lo && samples >= 2);
        let grid: Vec<f64> = (0..samples).map(|k| lo * (hi / lo).powf(k as f64 / (samples - 1) as f64)).collect();
        let mut out = Vec::new();
        for kind in [ResonanceKind::TwoQubit, ResonanceKind::Sum, ResonanceKind::Difference] {
            let f = |x: f64| self.denominator(kind, x);
            for w in grid.windows(2) {
                let (mut a, mut b) = (w[0], w[1]);
                let (mut fa, fb) = (f(a), f(b));
                if fa == 0.0 {
                    out.push(Divergence { kind, switch_freq: a, degenerate: false });
                    continue;
                }
                if fa.signum() == fb.signum() || fb == 0.0 {
                    continue;
                }
                for _ in 0..200 {
                    let m = 0.5 * (a + b);
                    if m <= a || m >= b {
                        break;
                    }
                    let fm = f(m);
                    if fm == 0.0 {
                        a = m;
                        b = m;
                        break;
                    }
                    if fm.signum() == fa.signum() {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                out.push(Divergence { kind, switch_freq: 0.5 * (a + b), degenerate: false });
            }
        }
        out.sort_by(|x, y| x.switch_freq.total_cmp(&y.switch_freq));
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Divergence {
    pub kind: ResonanceKind,
    pub switch_freq: f64,
    /// The difference resonance collapses to zero when ω₀ = ω_c.
    pub degenerate: bool,
}
