//! Qubit ⊗ photon basis and observables on state vectors.
//!
//! Canonical order: photon number ascending, then the qubit bit string read as
//! a binary integer ascending. The first qubit label is the most significant
//! bit, so for two qubits the order is `gg,0  ge,0  eg,0  ee,0  gg,1 …`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

/// Largest supported qubit count (bit strings are packed in a `u32`).
pub const MAX_QUBITS: usize = 16;

/// Truncated Hilbert space: `n_qubits` two-level systems and a cavity mode
/// holding at most `n_max` photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    n_qubits: usize,
    n_max: usize,
}

impl Space {
    pub fn new(n_qubits: usize, n_max: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::NoQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        Ok(Space { n_qubits, n_max })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn qubit_block(&self) -> usize {
        1 << self.n_qubits
    }

    /// `2^N · (n_max + 1)`.
    pub fn dim(&self) -> usize {
        self.qubit_block() * (self.n_max + 1)
    }

    /// All basis states in canonical order.
    pub fn enumerate(&self) -> Vec<BasisState> {
        (0..self.dim()).map(|k| self.state(k)).collect()
    }

    /// Basis state at canonical position `k`. Panics if `k >= dim()`.
    pub fn state(&self, k: usize) -> BasisState {
        assert!(k < self.dim(), "basis index {k} out of range");
        BasisState { bits: (k % self.qubit_block()) as u32, photons: k / self.qubit_block(), n_qubits: self.n_qubits }
    }

    pub fn index_of(&self, state: &BasisState) -> Result<usize> {
        if state.n_qubits != self.n_qubits {
            return Err(Error::BitLength { expected: self.n_qubits, got: state.n_qubits });
        }
        if state.photons > self.n_max {
            return Err(Error::PhotonsOutOfRange { photons: state.photons, n_max: self.n_max });
        }
        Ok(self.raw_index(state.bits, state.photons))
    }

    /// Index from a bit sequence (`true` = excited) and a photon number.
    pub fn index_of_bits(&self, bits: &[bool], photons: usize) -> Result<usize> {
        self.index_of(&BasisState::from_bits(bits, photons)?)
    }

    /// Index from a label such as `"ge"` and a photon number.
    pub fn index_of_label(&self, label: &str, photons: usize) -> Result<usize> {
        self.index_of(&BasisState::parse(label, photons)?)
    }

    pub(crate) fn raw_index(&self, bits: u32, photons: usize) -> usize {
        photons * self.qubit_block() + bits as usize
    }

    /// Index of `|gg…g, 0⟩`.
    pub fn ground_index(&self) -> usize {
        0
    }

    pub(crate) fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex { index: qubit, n_qubits: self.n_qubits });
        }
        Ok(())
    }
}

/// One configuration `|x₀x₁…, n⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    // qubit 0 is the most significant of the n_qubits low bits
    bits: u32,
    photons: usize,
    n_qubits: usize,
}

impl BasisState {
    pub fn from_bits(bits: &[bool], photons: usize) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::NoQubits);
        }
        if bits.len() > MAX_QUBITS {
            return Err(Error::TooManyQubits(bits.len()));
        }
        let packed = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        Ok(BasisState { bits: packed, photons, n_qubits: bits.len() })
    }

    /// Parses a label of `g`/`e` characters, e.g. `"ge"`.
    pub fn parse(label: &str, photons: usize) -> Result<Self> {
        let bits = label
            .chars()
            .map(|c| match c {
                'g' | '0' => Ok(false),
                'e' | '1' => Ok(true),
                other => Err(Error::BadQubitLabel(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bits(&bits, photons)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn photons(&self) -> usize {
        self.photons
    }

    /// Whether qubit `q` is excited.
    pub fn bit(&self, q: usize) -> bool {
        assert!(q < self.n_qubits);
        (self.bits >> (self.n_qubits - 1 - q)) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.n_qubits).map(|q| self.bit(q)).collect()
    }

    /// Number of excited qubits, x̄·1̄.
    pub fn excitations(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn label(&self) -> String {
        (0..self.n_qubits).map(|q| if self.bit(q) { 'e' } else { 'g' }).collect()
    }

    pub(crate) fn packed_bits(&self) -> u32 {
        self.bits
    }

    pub(crate) fn with_flipped(&self, q: usize, photons: usize) -> BasisState {
        BasisState { bits: self.bits ^ (1 << (self.n_qubits - 1 - q)), photons, n_qubits: self.n_qubits }
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩", self.label(), self.photons)
    }
}

/// Complex amplitudes over a [`Space`] in canonical order.
///
/// Physical states are normalized; truncated perturbative states are not, and
/// no operation here renormalizes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: Space,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(space: Space, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: amplitudes.len() });
        }
        Ok(StateVector { space, amplitudes })
    }

    pub fn zeros(space: Space) -> Self {
        StateVector { space, amplitudes: alloc::vec![Complex64::new(0.0, 0.0); space.dim()] }
    }

    /// The basis state at `index` with unit amplitude.
    pub fn basis(space: Space, index: usize) -> Self {
        let mut v = Self::zeros(space);
        v.amplitudes[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn ground(space: Space) -> Self {
        Self::basis(space, space.ground_index())
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        num_traits::Float::sqrt(self.norm_sqr())
    }

    /// Total weight on basis states where qubit `qubit` is excited.
    pub fn excitation_probability(&self, qubit: usize) -> Result<f64> {
        self.space.check_qubit(qubit)?;
        let n = self.space.n_qubits();
        let mask = 1u32 << (n - 1 - qubit);
        let block = self.space.qubit_block();
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(k, _)| (k % block) as u32 & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// ⟨a†a⟩ (unnormalized states are not rescaled).
    pub fn photon_expectation(&self) -> f64 {
        let block = self.space.qubit_block();
        self.amplitudes.iter().enumerate().map(|(k, a)| (k / block) as f64 * a.norm_sqr()).sum()
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.amplitudes[k]
    }
}

impl IndexMut<usize> for StateVector {
    fn index_mut(&mut self, k: usize) -> &mut Complex64 {
        &mut self.amplitudes[k]
    }
}
