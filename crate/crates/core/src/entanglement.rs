//! Two-qubit concurrence for pure and mixed states.

use nalgebra::Matrix4;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::types::{TwoQubitDensity, TwoQubitPure, PSD_CLAMP};

const PURE_NORM_TOL: f64 = 1e-9;

/// `2|a₀₀a₁₁ − a₀₁a₁₀|`.
pub fn pure_concurrence(state: &TwoQubitPure) -> Result<f64> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > PURE_NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let a = state.amplitudes();
    let c = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
    Ok(c.clamp(0.0, 1.0))
}

/// `σ_y ⊗ σ_y` in the `2 n₁ + n₂` basis.
fn sigma_yy() -> Matrix4<C64> {
    let z = C64::new(0.0, 0.0);
    let p = C64::new(1.0, 0.0);
    let m = C64::new(-1.0, 0.0);
    Matrix4::new(
        z, z, z, m, //
        z, z, p, z, //
        z, p, z, z, //
        m, z, z, z,
    )
}

/// Eigenvalues of `ρ` at or below this are roundoff and count as zero.
const EIGEN_FLOOR: f64 = 1e-14;

/// Square root of a Hermitian PSD matrix. Eigenvalues in `[PSD_CLAMP, EIGEN_FLOOR]`
/// are set to zero; anything below [`PSD_CLAMP`] is rejected.
fn psd_sqrt(rho: &Matrix4<C64>) -> Result<Matrix4<C64>> {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut diag = Matrix4::<C64>::zeros();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < PSD_CLAMP {
            return Err(Error::NotPositive { eigenvalue: lambda });
        }
        if lambda > EIGEN_FLOOR {
            diag[(k, k)] = C64::new(lambda.sqrt(), 0.0);
        }
    }
    let v = eig.eigenvectors;
    Ok(v * diag * v.adjoint())
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The `λᵢ` are the square roots of the spectrum of `ρ ρ̃`, with
/// `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`. That spectrum equals the spectrum of the
/// Hermitian similar matrix `√ρ ρ̃ √ρ = T T†` with `T = √ρ (σ_y⊗σ_y) √ρ*`, so
/// the `λᵢ` are read off as the singular values of `T`. This avoids taking
/// square roots of roundoff-level eigenvalues on rank-deficient states.
pub fn wootters_concurrence(rho: &TwoQubitDensity) -> Result<f64> {
    let s = psd_sqrt(rho.entries())?;
    let t = s * sigma_yy() * s.conjugate();
    let mut lambdas: Vec<f64> = t.singular_values().iter().copied().collect();
    lambdas.sort_by(|x, y| y.total_cmp(x));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.clamp(0.0, 1.0))
}

/// Closed-form concurrence of an X-form density matrix:
/// `2 max(0, |ρ₀₃| − √(ρ₁₁ρ₂₂), |ρ₁₂| − √(ρ₀₀ρ₃₃))`.
///
/// Only valid when [`TwoQubitDensity::is_x_form`] holds.
pub fn x_state_concurrence(rho: &TwoQubitDensity) -> f64 {
    let d = |k: usize| rho.get(k, k).re.max(0.0);
    let outer = rho.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    let inner = rho.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    (2.0 * outer.max(inner).max(0.0)).min(1.0)
}
