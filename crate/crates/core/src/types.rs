//! Register layout, value types and tolerances shared by every other module.
//!
//! The four-qubit register is ordered `(a, b, A, B)`, most significant first,
//! so a ket `|n_a n_b⟩_ab |n_A n_B⟩_AB` lives at `8 n_a + 4 n_b + 2 n_A + n_B`.
//! Everything that touches a 16-amplitude vector goes through [`basis_index`].

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for identities that hold exactly in closed form.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for oracle-vs-closed-form comparisons.
pub const ORACLE_TOL: f64 = 1e-9;
/// Reduced-density eigenvalues above this (but below zero) are roundoff.
pub const PSD_CLAMP: f64 = -1e-10;
/// Post-selection probabilities below this are treated as impossible.
pub const IMPOSSIBLE_PROB: f64 = 1e-15;

/// A single qubit occupation, `0` or `1`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn value(self) -> usize {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

/// Position of `|n_a n_b n_A n_B⟩` in a [`PureState16`].
pub fn basis_index(n_a: Bit, n_b: Bit, n_big_a: Bit, n_big_b: Bit) -> usize {
    8 * n_a.value() + 4 * n_b.value() + 2 * n_big_a.value() + n_big_b.value()
}

/// Inverse of [`basis_index`]: occupations `(n_a, n_b, n_A, n_B)`.
pub fn basis_bits(index: usize) -> (Bit, Bit, Bit, Bit) {
    assert!(index < 16, "basis index {index} out of range");
    (
        Bit::from_bool(index & 8 != 0),
        Bit::from_bool(index & 4 != 0),
        Bit::from_bool(index & 2 != 0),
        Bit::from_bool(index & 1 != 0),
    )
}

/// Total number of excitations in basis state `index`.
pub fn excitation_number(index: usize) -> u32 {
    (index as u32 & 0xf).count_ones()
}

/// Initial amplitudes of `α₀|11⟩ + β₀|00⟩` on `ab` and the coupling rate.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SystemParams {
    alpha0: C64,
    beta0: C64,
    g: f64,
}

impl SystemParams {
    pub fn new(alpha0: C64, beta0: C64, g: f64) -> Result<Self> {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::InvalidCoupling(g));
        }
        let norm_sqr = alpha0.norm_sqr() + beta0.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(SystemParams { alpha0, beta0, g })
    }

    /// Real, non-negative amplitudes.
    pub fn from_moduli(alpha0: f64, beta0: f64, g: f64) -> Result<Self> {
        if alpha0 < 0.0 || beta0 < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "amplitude moduli must be non-negative, got ({alpha0}, {beta0})"
            )));
        }
        Self::new(C64::new(alpha0, 0.0), C64::new(beta0, 0.0), g)
    }

    pub fn alpha0(&self) -> C64 {
        self.alpha0
    }

    pub fn beta0(&self) -> C64 {
        self.beta0
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Same amplitudes with a different coupling rate.
    pub fn with_g(&self, g: f64) -> Result<Self> {
        Self::new(self.alpha0, self.beta0, g)
    }

    /// `2|α₀||β₀|`, the concurrence of the initial `ab` state.
    pub fn c0(&self) -> f64 {
        2.0 * self.alpha0.norm() * self.beta0.norm()
    }

    /// The full initial register `(α₀|11⟩ + β₀|00⟩)_ab |00⟩_AB`.
    pub fn initial_state(&self) -> PureState16 {
        let mut amps = [C64::new(0.0, 0.0); 16];
        amps[basis_index(Bit::One, Bit::One, Bit::Zero, Bit::Zero)] = self.alpha0;
        amps[basis_index(Bit::Zero, Bit::Zero, Bit::Zero, Bit::Zero)] = self.beta0;
        PureState16::from_amplitudes_unchecked(amps)
    }
}

/// State vector of the four-qubit register.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PureState16 {
    amplitudes: [C64; 16],
}

impl PureState16 {
    /// Validated constructor: rejects vectors whose norm is off by more than [`EXACT_TOL`].
    pub fn new(amplitudes: [C64; 16]) -> Result<Self> {
        let state = Self::from_amplitudes_unchecked(amplitudes);
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// No normalization check; used for intermediate projected vectors.
    pub fn from_amplitudes_unchecked(amplitudes: [C64; 16]) -> Self {
        PureState16 { amplitudes }
    }

    pub fn basis(index: usize) -> Self {
        let mut amps = [C64::new(0.0, 0.0); 16];
        amps[index] = C64::new(1.0, 0.0);
        PureState16 { amplitudes: amps }
    }

    pub fn amplitudes(&self) -> &[C64; 16] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n_a: Bit, n_b: Bit, n_big_a: Bit, n_big_b: Bit) -> C64 {
        self.amplitudes[basis_index(n_a, n_b, n_big_a, n_big_b)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &PureState16) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| x.conj() * y)
            .sum()
    }

    /// `|⟨self|other⟩|²`; insensitive to global phase.
    pub fn fidelity(&self, other: &PureState16) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Largest amplitude-wise difference after removing the relative global phase.
    pub fn max_deviation_up_to_phase(&self, other: &PureState16) -> f64 {
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| (x * phase - y).norm())
            .fold(0.0, f64::max)
    }

    /// `⟨ψ|N̂|ψ⟩` for the total excitation number.
    pub fn mean_excitation(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(k, z)| excitation_number(k) as f64 * z.norm_sqr())
            .sum()
    }

    /// Factor out the `ab` pair from a state with no excitation in `AB`.
    ///
    /// Fails if any amplitude with `n_A + n_B > 0` exceeds `tol` in modulus.
    pub fn ab_factor(&self, tol: f64) -> Result<TwoQubitPure> {
        let mut ab = [C64::new(0.0, 0.0); 4];
        for (k, z) in self.amplitudes.iter().enumerate() {
            let (na, nb, nba, nbb) = basis_bits(k);
            if nba == Bit::Zero && nbb == Bit::Zero {
                ab[2 * na.value() + nb.value()] = *z;
            } else if z.norm() > tol {
                return Err(Error::NotFactorizable);
            }
        }
        TwoQubitPure::new(ab)
    }
}

/// Two-qubit pure state, index `2 n₁ + n₂`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TwoQubitPure {
    amplitudes: [C64; 4],
}

impl TwoQubitPure {
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(TwoQubitPure { amplitudes })
    }

    #[cfg(test)]
    pub(crate) fn from_amplitudes_unchecked(amplitudes: [C64; 4]) -> Self {
        TwoQubitPure { amplitudes }
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n1: Bit, n2: Bit) -> C64 {
        self.amplitudes[2 * n1.value() + n2.value()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn fidelity(&self, other: &TwoQubitPure) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<C64>()
            .norm_sqr()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> TwoQubitDensity {
        let v = &self.amplitudes;
        let m = Matrix4::from_fn(|i, j| v[i] * v[j].conj());
        TwoQubitDensity { entries: m }
    }
}

/// Two-qubit density matrix; Hermitian, unit trace and PSD up to tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitDensity {
    entries: Matrix4<C64>,
}

impl TwoQubitDensity {
    pub fn new(entries: Matrix4<C64>) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                let dev = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if dev > EXACT_TOL {
                    return Err(Error::NotHermitian { deviation: dev });
                }
            }
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > EXACT_TOL || trace.im.abs() > EXACT_TOL {
            return Err(Error::BadTrace { trace: trace.re });
        }
        let min_eig = hermitian_eigenvalues(&entries)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_CLAMP {
            return Err(Error::NotPositive {
                eigenvalue: min_eig,
            });
        }
        Ok(TwoQubitDensity { entries })
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitDensity {
            entries: Matrix4::identity() * C64::new(0.25, 0.0),
        }
    }

    pub fn entries(&self) -> &Matrix4<C64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Matrix4<C64>) -> Result<Self> {
        Self::new(u * self.entries * u.adjoint())
    }

    /// True when only the diagonal and anti-diagonal are populated.
    pub fn is_x_form(&self, tol: f64) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || i + j == 3 || self.entries[(i, j)].norm() <= tol))
    }
}

pub(crate) fn hermitian_eigenvalues(m: &Matrix4<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().copied().collect()
}

/// Result of post-selecting `n` null outcomes on `AB`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ZenoOutcome {
    pub ab_state: TwoQubitPure,
    pub survival_probability: f64,
    pub concurrence: f64,
    pub n_measurements: u32,
    pub tau: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn basis_index_examples() {
        use Bit::*;
        assert_eq!(basis_index(Zero, Zero, Zero, Zero), 0);
        assert_eq!(basis_index(One, One, Zero, Zero), 12);
        assert_eq!(basis_index(One, Zero, Zero, One), 9);
    }

    #[test]
    fn basis_index_is_bijective() {
        let mut seen = HashSet::new();
        for a in Bit::ALL {
            for b in Bit::ALL {
                for ba in Bit::ALL {
                    for bb in Bit::ALL {
                        let k = basis_index(a, b, ba, bb);
                        assert!(k < 16);
                        assert_eq!(basis_bits(k), (a, b, ba, bb));
                        assert!(seen.insert(k));
                    }
                }
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn params_reject_bad_norm_and_coupling() {
        assert!(matches!(
            SystemParams::from_moduli(0.9, 0.9, 1.0),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            SystemParams::from_moduli(0.8f64.sqrt(), 0.2f64.sqrt(), 0.0),
            Err(Error::InvalidCoupling(_))
        ));
        assert!(SystemParams::from_moduli(0.8f64.sqrt(), 0.2f64.sqrt(), -1.0).is_err());
        assert!(SystemParams::from_moduli(0.8f64.sqrt(), 0.2f64.sqrt(), f64::NAN).is_err());
        let p = SystemParams::from_moduli(0.8f64.sqrt(), 0.2f64.sqrt(), 2.0).unwrap();
        assert!((p.c0() - 0.8).abs() < EXACT_TOL);
    }

    #[test]
    fn density_rejects_invalid_matrices() {
        let mut m = Matrix4::<C64>::identity() * C64::new(0.25, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            TwoQubitDensity::new(m),
            Err(Error::NotHermitian { .. })
        ));

        let m = Matrix4::<C64>::identity() * C64::new(0.5, 0.0);
        assert!(matches!(
            TwoQubitDensity::new(m),
            Err(Error::BadTrace { .. })
        ));

        let m = Matrix4::from_diagonal(&nalgebra::Vector4::new(
            C64::new(1.2, 0.0),
            C64::new(-0.2, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ));
        assert!(matches!(
            TwoQubitDensity::new(m),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn ab_factor_requires_empty_ab_partner() {
        let s = PureState16::basis(basis_index(Bit::One, Bit::Zero, Bit::Zero, Bit::One));
        assert!(matches!(s.ab_factor(1e-12), Err(Error::NotFactorizable)));
        let s = PureState16::basis(12);
        let ab = s.ab_factor(1e-12).unwrap();
        assert_eq!(ab.amplitude(Bit::One, Bit::One), C64::new(1.0, 0.0));
    }
}
