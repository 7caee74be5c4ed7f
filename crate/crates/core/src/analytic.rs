//! Closed-form dynamics of `(α₀|11⟩ + β₀|00⟩)_ab |00⟩_AB` under the double
//! Jaynes-Cummings exchange coupling, with and without null-result
//! measurements on `AB`.
//!
//! Every quantity depends on the amplitudes only through their moduli and on
//! `(g, t)` only through the product `gt`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;

use crate::entanglement::pure_concurrence;
use crate::error::{Error, Result};
use crate::types::{
    basis_index, Bit, PureState16, SystemParams, TwoQubitPure, ZenoOutcome, IMPOSSIBLE_PROB,
};

/// `a(t) = cos(gt)`, `b(t) = sin(gt)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct EvolutionCoefficients {
    pub a: f64,
    pub b: f64,
    pub t: f64,
}

impl EvolutionCoefficients {
    pub fn at(g: f64, t: f64) -> Self {
        let (b, a) = (g * t).sin_cos();
        EvolutionCoefficients { a, b, t }
    }
}

/// Which root of `2|α₀||β₀| = C₀` the initial state sits on.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `|α₀| ≥ |β₀|`
    Plus,
    /// `|α₀| ≤ |β₀|`
    Minus,
}

impl Branch {
    /// Branch of an explicit parameter set; ties resolve to `Plus`.
    pub fn of(params: &SystemParams) -> Self {
        if params.alpha0().norm() >= params.beta0().norm() {
            Branch::Plus
        } else {
            Branch::Minus
        }
    }

    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Default total time of a Zeno sequence: the swap time `π/(2g)`.
pub fn swap_time(g: f64) -> f64 {
    FRAC_PI_2 / g
}

fn check_c0(c0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&c0) {
        return Err(Error::InvalidArgument(format!(
            "initial concurrence {c0} outside [0, 1]"
        )));
    }
    Ok((1.0 - c0 * c0).max(0.0).sqrt())
}

/// Free evolution of the initial register:
/// `α₀a²|1100⟩ + β₀|0000⟩ − iα₀ab(|1001⟩ + |0110⟩) − α₀b²|0011⟩`.
pub fn evolved_state(params: &SystemParams, t: f64) -> PureState16 {
    use Bit::{One, Zero};
    let EvolutionCoefficients { a, b, .. } = EvolutionCoefficients::at(params.g(), t);
    let alpha = params.alpha0();
    let mut amps = [C64::new(0.0, 0.0); 16];
    amps[basis_index(One, One, Zero, Zero)] = alpha * (a * a);
    amps[basis_index(Zero, Zero, Zero, Zero)] = params.beta0();
    let cross = -C64::i() * alpha * (a * b);
    amps[basis_index(One, Zero, Zero, One)] = cross;
    amps[basis_index(Zero, One, One, Zero)] = cross;
    amps[basis_index(Zero, Zero, One, One)] = -alpha * (b * b);
    PureState16::from_amplitudes_unchecked(amps)
}

/// `cos^{2N}(gτ)`, the factor the `|11⟩` amplitude picks up after `N` null results.
pub fn damping_factor(n: u32, g: f64, tau: f64) -> f64 {
    (g * tau).cos().powi(2).powf(n as f64)
}

/// Post-selected `ab` state after `n` null results spaced `total_time / n` apart.
pub fn zeno_state(params: &SystemParams, n: u32, total_time: f64) -> Result<ZenoOutcome> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of measurements must be at least 1".into(),
        ));
    }
    if !(total_time > 0.0 && total_time.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "total time must be positive, got {total_time}"
        )));
    }
    let tau = total_time / n as f64;
    let x = damping_factor(n, params.g(), tau);
    let alpha = params.alpha0() * x;
    let beta = params.beta0();
    let survival = alpha.norm_sqr() + beta.norm_sqr();
    if survival < IMPOSSIBLE_PROB {
        return Err(Error::ImpossibleOutcome {
            probability: survival,
        });
    }
    let norm = survival.sqrt();
    let zero = C64::new(0.0, 0.0);
    let ab_state = TwoQubitPure::new([beta / norm, zero, zero, alpha / norm])?;
    let concurrence = pure_concurrence(&ab_state)?;
    Ok(ZenoOutcome {
        ab_state,
        survival_probability: survival,
        concurrence,
        n_measurements: n,
        tau,
    })
}

/// `2|α₀||β₀|x / (|α₀|²x² + |β₀|²)` with `x = cos^{2N}(gτ)`.
pub fn concurrence_after_n(params: &SystemParams, n: u32, tau: f64) -> f64 {
    let x = damping_factor(n, params.g(), tau);
    let (ma, mb) = (params.alpha0().norm(), params.beta0().norm());
    let den = ma * ma * x * x + mb * mb;
    if den == 0.0 {
        return 0.0;
    }
    (2.0 * ma * mb * x / den).clamp(0.0, 1.0)
}

/// `|α₀|` recovered from `C₀` on the given branch.
pub fn alpha_from_c0(c0: f64, branch: Branch) -> Result<f64> {
    let s = check_c0(c0)?;
    Ok((0.5 + branch.sign() * 0.5 * s).max(0.0).sqrt())
}

/// Real, non-negative parameters on `branch` with initial concurrence `c0`.
pub fn params_from_c0(c0: f64, branch: Branch, g: f64) -> Result<SystemParams> {
    let s = check_c0(c0)?;
    let alpha = (0.5 + branch.sign() * 0.5 * s).max(0.0).sqrt();
    let beta = (0.5 - branch.sign() * 0.5 * s).max(0.0).sqrt();
    SystemParams::from_moduli(alpha, beta, g)
}

/// `2C₀x / (1 + x² ∓ √(1−C₀²)(1 − x²))`, `x = cos^{2N}(gτ)`, upper sign on `Plus`.
pub fn concurrence_branch(c0: f64, n: u32, tau: f64, g: f64, branch: Branch) -> Result<f64> {
    let s = check_c0(c0)?;
    if n == 0 {
        return Err(Error::InvalidArgument(
            "number of measurements must be at least 1".into(),
        ));
    }
    let x = damping_factor(n, g, tau);
    let den = 1.0 + x * x - branch.sign() * s * (1.0 - x * x);
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * c0 * x / den).clamp(0.0, 1.0))
}

/// `Λ±(t) = √(1±s) cos²(gt) (√(1∓s) − √(1±s) sin²(gt))`, `s = √(1−C₀²)`.
pub fn lambda(c0: f64, t: f64, g: f64, branch: Branch) -> Result<f64> {
    let s = check_c0(c0)?;
    let sign = branch.sign();
    let up = (1.0 + sign * s).sqrt();
    let down = (1.0 - sign * s).max(0.0).sqrt();
    let (sin, cos) = (g * t).sin_cos();
    Ok(up * cos * cos * (down - up * sin * sin))
}

/// Concurrence of the freely evolving `ab` pair, `max(0, Λ±(t))`.
pub fn free_concurrence(c0: f64, t: f64, g: f64, branch: Branch) -> Result<f64> {
    Ok(lambda(c0, t, g, branch)?.clamp(0.0, 1.0))
}

/// Time at which the freely evolving `ab` concurrence (Plus branch) first hits zero.
///
/// `c0 = 1` gives no death before the swap time and is reported as
/// [`Error::NoSuddenDeath`].
pub fn sudden_death_time(c0: f64, g: f64) -> Result<f64> {
    if !(g.is_finite() && g > 0.0) {
        return Err(Error::InvalidCoupling(g));
    }
    if c0 == 1.0 {
        return Err(Error::NoSuddenDeath(c0));
    }
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "sudden death needs an initial concurrence in (0, 1), got {c0}"
        )));
    }
    let s = (1.0 - c0 * c0).sqrt();
    let ratio = ((1.0 - s) / (1.0 + s)).powf(0.25);
    Ok(ratio.asin() / g)
}

/// Time at which one null-result measurement leaves `ab` in a Bell state,
/// `(1/g) arccos(√(|β₀|/|α₀|))`.
pub fn bell_prep_time(params: &SystemParams) -> Result<f64> {
    let (ma, mb) = (params.alpha0().norm(), params.beta0().norm());
    if mb == 0.0 {
        return Err(Error::InvalidArgument(
            "β₀ = 0 has no Bell preparation time".into(),
        ));
    }
    if ma <= mb {
        return Err(Error::InvalidArgument(format!(
            "Bell preparation needs |α₀| > |β₀|, got |α₀| = {ma}, |β₀| = {mb}"
        )));
    }
    Ok((mb / ma).sqrt().acos() / params.g())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

    fn p80() -> SystemParams {
        SystemParams::from_moduli(0.8f64.sqrt(), 0.2f64.sqrt(), 1.0).unwrap()
    }

    fn bell_params() -> SystemParams {
        SystemParams::from_moduli(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 1.0).unwrap()
    }

    #[test]
    fn evolved_state_examples() {
        let s = evolved_state(&bell_params(), 0.0);
        for (k, z) in s.amplitudes().iter().enumerate() {
            let expected = if k == 0 || k == 12 {
                FRAC_1_SQRT_2
            } else {
                0.0
            };
            assert_abs_diff_eq!(z.re, expected, epsilon = 1e-15);
            assert_eq!(z.im, 0.0);
        }

        let s = evolved_state(&bell_params(), FRAC_PI_2);
        assert_abs_diff_eq!(s.amplitudes()[3].re, -FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitudes()[0].re, FRAC_1_SQRT_2, epsilon = 1e-12);
        for k in [6, 9, 12] {
            assert!(s.amplitudes()[k].norm() < 1e-12);
        }

        let s = evolved_state(&p80(), FRAC_PI_4);
        assert_abs_diff_eq!(s.amplitudes()[12].re, 0.2f64.sqrt(), epsilon = 1e-12);
        for t in [0.0, 0.3, 1.1, 2.5] {
            assert_abs_diff_eq!(evolved_state(&p80(), t).norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn coefficients_unit_circle() {
        for t in [0.0, 0.1, 0.7, 3.0, 11.0] {
            let c = EvolutionCoefficients::at(1.3, t);
            assert_abs_diff_eq!(c.a * c.a + c.b * c.b, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zeno_state_examples() {
        let out = zeno_state(&p80(), 1, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(out.survival_probability, 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(out.concurrence, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            out.ab_state.amplitude(Bit::Zero, Bit::Zero).norm(),
            1.0,
            epsilon = 1e-12
        );

        let out = zeno_state(&p80(), 2, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(out.survival_probability, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(out.concurrence, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(out.tau, FRAC_PI_4, epsilon = 1e-15);

        for params in [p80(), bell_params()] {
            let out = zeno_state(&params, 1_000_000, FRAC_PI_2).unwrap();
            assert!((out.concurrence - params.c0()).abs() < 1e-3);
        }
    }

    #[test]
    fn zeno_state_errors() {
        assert!(matches!(
            zeno_state(&p80(), 0, FRAC_PI_2),
            Err(Error::InvalidArgument(_))
        ));
        let excited = SystemParams::from_moduli(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            zeno_state(&excited, 1, FRAC_PI_2),
            Err(Error::ImpossibleOutcome { .. })
        ));
    }

    #[test]
    fn concurrence_after_n_examples() {
        assert_abs_diff_eq!(
            concurrence_after_n(&p80(), 2, FRAC_PI_4),
            0.8,
            epsilon = 1e-12
        );
        // hand evaluation: x = cos⁸(π/8) = ((2+√2)/4)⁴
        let x = ((2.0 + 2f64.sqrt()) / 4.0).powi(4);
        let expected = 0.8 * x / (0.8 * x * x + 0.2);
        assert_abs_diff_eq!(
            concurrence_after_n(&p80(), 4, PI / 8.0),
            expected,
            epsilon = 1e-12
        );
        assert!((expected - 0.9982).abs() < 1e-3);
        for n in [1, 3, 50] {
            assert_abs_diff_eq!(
                concurrence_after_n(&bell_params(), n, 0.0),
                1.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn alpha_from_c0_examples() {
        for b in [Branch::Plus, Branch::Minus] {
            assert_abs_diff_eq!(
                alpha_from_c0(1.0, b).unwrap(),
                FRAC_1_SQRT_2,
                epsilon = 1e-15
            );
        }
        assert_eq!(alpha_from_c0(0.0, Branch::Plus).unwrap(), 1.0);
        let a = alpha_from_c0(0.8, Branch::Plus).unwrap();
        assert_abs_diff_eq!(a, 0.8f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(2.0 * a * (1.0 - a * a).sqrt(), 0.8, epsilon = 1e-12);
        assert!(alpha_from_c0(1.1, Branch::Plus).is_err());
        assert!(alpha_from_c0(-0.1, Branch::Minus).is_err());
    }

    #[test]
    fn concurrence_branch_examples() {
        let c = concurrence_branch(0.8, 2, FRAC_PI_4, 1.0, Branch::Plus).unwrap();
        assert_abs_diff_eq!(c, 0.8, epsilon = 1e-12);
        for c0 in [0.1, 0.5, 0.8, 1.0] {
            for b in [Branch::Plus, Branch::Minus] {
                assert_abs_diff_eq!(
                    concurrence_branch(c0, 1, FRAC_PI_2, 1.0, b).unwrap(),
                    0.0,
                    epsilon = 1e-15
                );
            }
        }
        for n in [1, 2, 7, 40] {
            for tau in [0.0, 0.2, 0.9] {
                let p = concurrence_branch(1.0, n, tau, 1.0, Branch::Plus).unwrap();
                let m = concurrence_branch(1.0, n, tau, 1.0, Branch::Minus).unwrap();
                assert_eq!(p, m);
            }
        }
        assert!(concurrence_branch(0.5, 0, 0.1, 1.0, Branch::Plus).is_err());
    }

    #[test]
    fn free_concurrence_examples() {
        for c0 in [0.0, 0.3, 0.8, 1.0] {
            for b in [Branch::Plus, Branch::Minus] {
                assert_abs_diff_eq!(
                    free_concurrence(c0, 0.0, 1.0, b).unwrap(),
                    c0,
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    free_concurrence(c0, FRAC_PI_2, 1.0, b).unwrap(),
                    0.0,
                    epsilon = 1e-12
                );
            }
        }
        assert_abs_diff_eq!(
            free_concurrence(0.8, FRAC_PI_4, 1.0, Branch::Plus).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn sudden_death_examples() {
        let t = sudden_death_time(0.8, 1.0).unwrap();
        assert_abs_diff_eq!(t, FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(
            free_concurrence(0.8, t, 1.0, Branch::Plus).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            lambda(0.8, t, 1.0, Branch::Plus).unwrap(),
            0.0,
            epsilon = 1e-12
        );

        let near = sudden_death_time(1.0 - 1e-12, 1.0).unwrap();
        assert!(near < FRAC_PI_2 && FRAC_PI_2 - near < 1e-2);
        assert!(sudden_death_time(0.999, 1.0).unwrap() < sudden_death_time(0.9999, 1.0).unwrap());

        assert!(matches!(
            sudden_death_time(1.0, 1.0),
            Err(Error::NoSuddenDeath(_))
        ));
        assert!(matches!(
            sudden_death_time(0.0, 1.0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(sudden_death_time(1.2, 1.0).is_err());
        assert!(sudden_death_time(0.5, 0.0).is_err());
    }

    #[test]
    fn bell_prep_examples() {
        assert_abs_diff_eq!(bell_prep_time(&p80()).unwrap(), FRAC_PI_4, epsilon = 1e-12);
        let t = bell_prep_time(&p80()).unwrap();
        let c = concurrence_after_n(&p80(), 1, t);
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-12);
        assert!(bell_prep_time(&bell_params()).is_err());
        let product = SystemParams::from_moduli(1.0, 0.0, 1.0).unwrap();
        assert!(bell_prep_time(&product).is_err());
        let minus = params_from_c0(0.6, Branch::Minus, 1.0).unwrap();
        assert!(bell_prep_time(&minus).is_err());
    }

    #[test]
    fn bell_prep_time_scales_with_g() {
        let p = p80().with_g(2.0).unwrap();
        assert_abs_diff_eq!(
            bell_prep_time(&p).unwrap(),
            FRAC_PI_4 / 2.0,
            epsilon = 1e-12
        );
    }
}
