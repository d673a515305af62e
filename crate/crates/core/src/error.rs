use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which family of switching frequencies makes a closed-form denominator vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResonanceKind {
    /// ϖ_s → 2ω₀ (and its odd-harmonic aliases 2ω₀/(2m+1)).
    TwoQubit,
    /// ϖ_s → ω₀ + ω_c.
    Sum,
    /// ϖ_s → |ω_c − ω₀|.
    Difference,
}

impl fmt::Display for ResonanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ResonanceKind::TwoQubit => "2*omega0",
            ResonanceKind::Sum => "omega0+omega_c",
            ResonanceKind::Difference => "|omega_c-omega0|",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit count must be at least 1")]
    NoQubits,
    #[error("qubit count {0} exceeds the supported maximum of {max}", max = crate::hilbert::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("bit string has length {got}, expected {expected}")]
    BitLength { expected: usize, got: usize },
    #[error("invalid qubit label {0:?} (expected 'g' or 'e')")]
    BadQubitLabel(char),
    #[error("photon number {photons} exceeds cutoff n_max = {n_max}")]
    PhotonsOutOfRange { photons: usize, n_max: usize },
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitIndex { index: usize, n_qubits: usize },
    #[error("state has {got} amplitudes, space dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("negative time {0}")]
    NegativeTime(f64),
    #[error("time {t} outside solution range [0, {t_final}]")]
    TimeOutOfRange { t: f64, t_final: f64 },
    #[error("Laplace-domain coupling evaluated on a pole ({0})")]
    LaplacePole(&'static str),
    #[error("matrix is not symmetric: |H - H^T| = {0:e}")]
    NotHermitian(f64),
    #[error("symmetric eigensolver did not converge")]
    EigenFailure,
    #[error("switching frequency {switch_freq} rad/ns inside the guard band of the {kind} resonance")]
    Resonance { kind: ResonanceKind, switch_freq: f64 },
    #[error("omega0 == omega_c makes the closed-form second-order amplitude singular")]
    DegenerateFrequencies,
}
