//! Real-symmetric eigendecomposition and the propagators built from it.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_traits::Zero;

use crate::{Error, Result};

/// Largest tolerated `|H − Hᵀ|` entry, relative to `max(1, max|H|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

const EIGEN_EPS: f64 = f64::EPSILON;
const EIGEN_MAX_ITER: usize = 10_000;

/// `H = V·diag(E)·Vᵀ` for a real-symmetric `H`.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl Eigensystem {
    pub fn new(h: &DMatrix<f64>) -> Result<Self> {
        if h.nrows() != h.ncols() {
            return Err(Error::DimensionMismatch { expected: h.nrows(), got: h.ncols() });
        }
        let scale = h.amax().max(1.0);
        let asym = (h - h.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::NotHermitian(asym));
        }
        let eig = SymmetricEigen::try_new(h.clone(), EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::EigenFailure)?;
        Ok(Eigensystem { values: eig.eigenvalues, vectors: eig.eigenvectors })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.values
    }

    /// `e^{−iH·dt}·ψ`; negative `dt` runs backwards.
    pub fn evolve(&self, dt: f64, psi: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(psi.len(), n);
        let v = &self.vectors;
        let mut coeffs: Vec<Complex64> =
            (0..n).map(|k| (0..n).map(|r| psi[r] * v[(r, k)]).sum::<Complex64>()).collect();
        for (c, e) in coeffs.iter_mut().zip(self.values.iter()) {
            *c *= Complex64::new(0.0, -e * dt).exp();
        }
        (0..n).map(|r| (0..n).map(|k| coeffs[k] * v[(r, k)]).sum()).collect()
    }

    /// Dense `e^{−iH·dt}`.
    pub fn unitary(&self, dt: f64) -> DMatrix<Complex64> {
        let n = self.dim();
        let phases: Vec<Complex64> = self.values.iter().map(|e| Complex64::new(0.0, -e * dt).exp()).collect();
        DMatrix::from_fn(n, n, |r, c| (0..n).map(|k| phases[k] * (self.vectors[(r, k)] * self.vectors[(c, k)])).sum())
    }
}

/// `U·ψ` for a dense complex matrix.
pub fn apply(u: &DMatrix<Complex64>, psi: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(u.ncols(), psi.len());
    (0..u.nrows()).map(|r| psi.iter().enumerate().fold(Complex64::zero(), |acc, (c, p)| acc + u[(r, c)] * p)).collect()
}

/// `⟨ψ|H|ψ⟩` for real-symmetric `H`.
pub fn expectation(h: &DMatrix<f64>, psi: &[Complex64]) -> f64 {
    let mut acc = Complex64::zero();
    for r in 0..h.nrows() {
        for c in 0..h.ncols() {
            acc += psi[r].conj() * psi[c] * h[(r, c)];
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_asymmetric() {
        let h = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0 + 1e-9, 0.0]);
        assert!(matches!(Eigensystem::new(&h), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn unitary_matches_evolve() {
        let h = DMatrix::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.2, -0.5, 0.7, 0.0, 0.7, 2.0]);
        let eig = Eigensystem::new(&h).unwrap();
        let psi = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0)];
        let a = eig.evolve(0.37, &psi);
        let b = apply(&eig.unitary(0.37), &psi);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }
}
