//! Oracle-vs-closed-form checks and property checks, with max deviations.
//!
//! [`run_validate`] is what the `validate` subcommand executes. The oracle
//! side is configurable so that a deliberately broken Hamiltonian or a
//! coarse integrator can be shown to trip the relevant checks.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::analytic::{
    bell_prep_time, concurrence_after_n, concurrence_branch, evolved_state, free_concurrence,
    params_from_c0, sudden_death_time, zeno_state, Branch,
};
use crate::entanglement::{pure_concurrence, wootters_concurrence, x_state_concurrence};
use crate::error::Result;
use crate::oracle::{
    build_hamiltonian, project_null_ab, reduce_to_ab, EvolutionMethod, Hamiltonian16, Oracle,
    DEFAULT_RK4_STEP,
};
use crate::types::{
    PureState16, SystemParams, TwoQubitDensity, TwoQubitPure, EXACT_TOL, ORACLE_TOL,
};

/// Oracle configuration under test. Analytic checks ignore it.
#[derive(Clone, Debug)]
pub struct ValidationConfig {
    pub hamiltonian: Hamiltonian16,
    pub method: EvolutionMethod,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        ValidationConfig {
            hamiltonian: build_hamiltonian(1.0),
            method: EvolutionMethod::Eigen,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_deviation.is_finite() && self.max_deviation <= self.tolerance
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4} {:<40} max deviation {:.3e} (tolerance {:.1e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_deviation,
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

pub const CHECK_HERMITIAN: &str = "hamiltonian-hermitian";
pub const CHECK_EXCITATION_COMMUTATOR: &str = "hamiltonian-conserves-excitations";
pub const CHECK_SWAP: &str = "swap-fidelity";
pub const CHECK_ORACLE_ANALYTIC: &str = "oracle-vs-analytic-evolution";
pub const CHECK_RK4_EIGEN: &str = "rk4-vs-eigen";
pub const CHECK_UNITARITY: &str = "unitarity";
pub const CHECK_EXCITATION: &str = "excitation-conservation";
pub const CHECK_COMPOSITION: &str = "composition";
pub const CHECK_IDEMPOTENCE: &str = "projector-idempotence";
pub const CHECK_ZENO: &str = "zeno-protocol-vs-analytic";
pub const CHECK_FREE_WOOTTERS: &str = "free-concurrence-vs-wootters";
pub const CHECK_X_STATE: &str = "x-state-vs-wootters";
pub const CHECK_PURE_WOOTTERS: &str = "pure-vs-wootters";
pub const CHECK_LOCAL_UNITARY: &str = "local-unitary-invariance";
pub const CHECK_BRANCH: &str = "branch-consistency";
pub const CHECK_FREEZING: &str = "freezing-limit";
pub const CHECK_FREEZING_MONOTONE: &str = "freezing-monotone";
pub const CHECK_MINUS_BOUND: &str = "minus-branch-bound";
pub const CHECK_ENHANCEMENT: &str = "plus-branch-enhancement";
pub const CHECK_SUDDEN_DEATH: &str = "sudden-death-plateau";
pub const CHECK_PHASE: &str = "phase-invariance";
pub const CHECK_G_SCALING: &str = "g-scaling";
pub const CHECK_BELL_PREP: &str = "bell-preparation";

/// Initial concurrences used by grid checks.
pub fn c0_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

/// Parameter sets spanning both branches, a Bell state and complex phases.
pub fn parameter_sets() -> Vec<SystemParams> {
    let mut sets: Vec<SystemParams> = [
        (0.8, Branch::Plus),
        (0.5, Branch::Plus),
        (0.3, Branch::Minus),
        (1.0, Branch::Plus),
    ]
    .iter()
    .map(|&(c0, b)| params_from_c0(c0, b, 1.0).unwrap())
    .collect();
    let a = 0.9f64.sqrt();
    let b = 0.1f64.sqrt();
    sets.push(SystemParams::new(C64::from_polar(a, 0.7), C64::from_polar(b, -1.9), 1.0).unwrap());
    sets
}

/// `k`-th point of a deterministic low-discrepancy sequence in `[0,1)^d`.
fn weyl(k: usize, d: usize) -> f64 {
    // generalized golden ratio for 8 dimensions
    let phi = 1.0f64 + 1.0 / 8.0;
    let mut x = phi;
    for _ in 0..30 {
        x = (1.0 + x).powf(1.0 / 9.0);
    }
    let alpha = 1.0 / x.powi(d as i32 + 1);
    (0.5 + alpha * k as f64).fract()
}

/// Deterministic pseudo-random pure two-qubit states.
pub fn sample_pure_states(count: usize) -> Vec<TwoQubitPure> {
    (0..count)
        .map(|k| {
            let mut amps = [C64::new(0.0, 0.0); 4];
            for (i, z) in amps.iter_mut().enumerate() {
                *z = C64::new(
                    2.0 * weyl(k + 1, 2 * i) - 1.0,
                    2.0 * weyl(k + 1, 2 * i + 1) - 1.0,
                );
            }
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in amps.iter_mut() {
                *z /= norm;
            }
            TwoQubitPure::new(amps).unwrap()
        })
        .collect()
}

/// `e^{iφ} Rz(α) Ry(β) Rz(γ)`.
pub fn single_qubit_unitary(phi: f64, alpha: f64, beta: f64, gamma: f64) -> Matrix2<C64> {
    let rz = |t: f64| {
        Matrix2::new(
            C64::from_polar(1.0, -t / 2.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(1.0, t / 2.0),
        )
    };
    let (s, c) = (beta / 2.0).sin_cos();
    let ry = Matrix2::new(
        C64::new(c, 0.0),
        C64::new(-s, 0.0),
        C64::new(s, 0.0),
        C64::new(c, 0.0),
    );
    rz(alpha) * ry * rz(gamma) * C64::from_polar(1.0, phi)
}

pub fn kron(u: &Matrix2<C64>, v: &Matrix2<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| u[(i / 2, j / 2)] * v[(i % 2, j % 2)])
}

fn max_of<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().fold(0.0, |m, x| {
        if x.is_nan() || m.is_nan() {
            f64::NAN
        } else {
            m.max(x)
        }
    })
}

fn check(name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<f64>) -> CheckResult {
    let max_deviation = f().unwrap_or(f64::INFINITY);
    CheckResult {
        name,
        max_deviation,
        tolerance,
    }
}

/// Run every check against the given oracle configuration.
pub fn run_validate(config: &ValidationConfig) -> ValidationReport {
    let oracle = Oracle::new(config.hamiltonian.clone(), config.method);
    let g = 1.0;
    let mut checks = Vec::new();

    checks.push(check(CHECK_HERMITIAN, 1e-14, || {
        Ok(config.hamiltonian.hermiticity_defect())
    }));
    checks.push(check(CHECK_EXCITATION_COMMUTATOR, 1e-14, || {
        Ok(config.hamiltonian.excitation_commutator_defect())
    }));

    // target: β₀|0000⟩ − α₀|0011⟩
    checks.push(check(CHECK_SWAP, ORACLE_TOL, || {
        let mut worst: f64 = 0.0;
        for p in parameter_sets() {
            let swapped = oracle.evolve(&p.initial_state(), FRAC_PI_2 / g);
            let mut target = [C64::new(0.0, 0.0); 16];
            target[0] = p.beta0();
            target[3] = -p.alpha0();
            let target = PureState16::new(target)?;
            worst = worst.max(1.0 - swapped.fidelity(&target));
        }
        Ok(worst)
    }));

    let times: Vec<f64> = (0..20).map(|k| FRAC_PI_2 * k as f64 / 19.0).collect();
    checks.push(check(CHECK_ORACLE_ANALYTIC, ORACLE_TOL, || {
        let mut worst: f64 = 0.0;
        for p in parameter_sets() {
            let psi0 = p.initial_state();
            for &t in &times {
                let d = oracle
                    .evolve(&psi0, t)
                    .max_deviation_up_to_phase(&evolved_state(&p, t));
                worst = worst.max(d);
            }
        }
        Ok(worst)
    }));

    checks.push(check(CHECK_RK4_EIGEN, 1e-10, || {
        let exact = Oracle::new(config.hamiltonian.clone(), EvolutionMethod::Eigen);
        let rk = Oracle::new(
            config.hamiltonian.clone(),
            EvolutionMethod::Rk4 {
                max_step: DEFAULT_RK4_STEP / g,
            },
        );
        let psi0 = parameter_sets()[0].initial_state();
        Ok(max_of([0.3, 1.0, FRAC_PI_2].iter().map(|&t| {
            exact
                .evolve(&psi0, t)
                .max_deviation_up_to_phase(&rk.evolve(&psi0, t))
        })))
    }));

    let long_times: Vec<f64> = (0..=20).map(|k| 10.0 / g * k as f64 / 20.0).collect();
    checks.push(check(CHECK_UNITARITY, 1e-10, || {
        let mut worst: f64 = 0.0;
        for p in parameter_sets() {
            for &t in &long_times {
                worst =
                    worst.max((oracle.evolve(&p.initial_state(), t).norm_sqr().sqrt() - 1.0).abs());
            }
        }
        Ok(worst)
    }));
    checks.push(check(CHECK_EXCITATION, ORACLE_TOL, || {
        let mut worst: f64 = 0.0;
        for p in parameter_sets() {
            let psi0 = p.initial_state();
            let n0 = psi0.mean_excitation();
            for &t in &long_times {
                worst = worst.max((oracle.evolve(&psi0, t).mean_excitation() - n0).abs());
            }
        }
        Ok(worst)
    }));
    checks.push(check(CHECK_COMPOSITION, ORACLE_TOL, || {
        let mut worst: f64 = 0.0;
        for p in parameter_sets() {
            let psi0 = p.initial_state();
            for &(t1, t2) in &[(0.3, 0.9), (1.0, 0.5708), (2.2, 3.1)] {
                let joint = oracle.evolve(&psi0, t1 + t2);
                let split = oracle.evolve(&oracle.evolve(&psi0, t1), t2);
                worst = worst.max(joint.max_deviation_up_to_phase(&split));
            }
        }
        Ok(worst)
    }));
    checks.push(check(CHECK_IDEMPOTENCE, EXACT_TOL, || {
        let mut worst: f64 = 0.0;
        for p in parameter_sets() {
            for &t in &times[..19] {
                let (once, _) = project_null_ab(&oracle.evolve(&p.initial_state(), t))?;
                let (twice, prob) = project_null_ab(&once)?;
                worst = worst
                    .max((prob - 1.0).abs())
                    .max(once.max_deviation_up_to_phase(&twice));
            }
        }
        Ok(worst)
    }));

    checks.push(check(CHECK_ZENO, ORACLE_TOL, || {
        let cases: Vec<(f64, u32)> = [0.2, 0.5, 0.8]
            .iter()
            .flat_map(|&c0| (1..=64).map(move |n| (c0, n)))
            .collect();
        let devs = cases
            .par_iter()
            .map(|&(c0, n)| -> Result<f64> {
                let p = params_from_c0(c0, Branch::Plus, g)?;
                let total = FRAC_PI_2 / g;
                let sim = oracle.run_zeno_protocol(&p, n, total)?;
                let exact = zeno_state(&p, n, total)?;
                let closed = concurrence_after_n(&p, n, total / n as f64);
                Ok(max_of([
                    (sim.survival_probability - exact.survival_probability).abs(),
                    (sim.concurrence - exact.concurrence).abs(),
                    (sim.concurrence - closed).abs(),
                    1.0 - sim.ab_state.fidelity(&exact.ab_state),
                ]))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(max_of(devs))
    }));

    let gts: Vec<f64> = (0..201).map(|k| FRAC_PI_2 * (k as f64 / 200.0)).collect();
    let surface_grid: Vec<(f64, Branch, f64)> = c0_grid()
        .into_iter()
        .flat_map(|c0| {
            let gts = &gts;
            [Branch::Plus, Branch::Minus]
                .into_iter()
                .flat_map(move |b| gts.iter().map(move |&gt| (c0, b, gt)))
        })
        .collect();
    let reduced: Result<Vec<(f64, Branch, f64, TwoQubitDensity)>> = surface_grid
        .par_iter()
        .map(|&(c0, b, gt)| {
            let p = params_from_c0(c0, b, g)?;
            let rho = reduce_to_ab(&oracle.evolve(&p.initial_state(), gt / g))?;
            Ok((c0, b, gt, rho))
        })
        .collect();
    checks.push(check(CHECK_FREE_WOOTTERS, 1e-8, || {
        let reduced = reduced.as_ref().map_err(clone_err)?;
        let devs = reduced
            .par_iter()
            .map(|(c0, b, gt, rho)| {
                Ok((wootters_concurrence(rho)? - free_concurrence(*c0, gt / g, g, *b)?).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(max_of(devs))
    }));
    checks.push(check(CHECK_X_STATE, 1e-10, || {
        let reduced = reduced.as_ref().map_err(clone_err)?;
        let devs = reduced
            .par_iter()
            .map(|(_, _, _, rho)| {
                if !rho.is_x_form(1e-12) {
                    return Ok(f64::INFINITY);
                }
                Ok((wootters_concurrence(rho)? - x_state_concurrence(rho)).abs())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(max_of(devs))
    }));

    checks.push(check(CHECK_PURE_WOOTTERS, ORACLE_TOL, || {
        let devs = sample_pure_states(1000)
            .par_iter()
            .map(|s| Ok((wootters_concurrence(&s.density())? - pure_concurrence(s)?).abs()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(max_of(devs))
    }));

    checks.push(check(CHECK_LOCAL_UNITARY, ORACLE_TOL, || {
        let mut states: Vec<TwoQubitDensity> = sample_pure_states(40)
            .iter()
            .zip(sample_pure_states(80).iter().skip(40))
            .map(|(x, y)| {
                let m = x.density().entries() * C64::new(0.6, 0.0)
                    + y.density().entries() * C64::new(0.4, 0.0);
                TwoQubitDensity::new(m)
            })
            .collect::<Result<_>>()?;
        if let Ok(r) = reduced.as_ref() {
            states.extend(r.iter().step_by(37).map(|x| x.3.clone()));
        }
        let mut worst: f64 = 0.0;
        for (k, rho) in states.iter().enumerate() {
            let angle = |d: usize| 2.0 * PI * weyl(k + 7, d);
            let u = single_qubit_unitary(angle(0), angle(1), angle(2), angle(3));
            let v = single_qubit_unitary(angle(4), angle(5), angle(6), angle(7));
            let rotated = rho.conjugate_by(&kron(&u, &v))?;
            worst = worst.max((wootters_concurrence(&rotated)? - wootters_concurrence(rho)?).abs());
        }
        Ok(worst)
    }));

    checks.push(check(CHECK_BRANCH, EXACT_TOL, || {
        let mut worst: f64 = 0.0;
        for c0 in c0_grid() {
            for b in [Branch::Plus, Branch::Minus] {
                let p = params_from_c0(c0, b, g)?;
                for n in 1..=50u32 {
                    for tau in [FRAC_PI_2 / (g * n as f64), 0.05, 0.4] {
                        let d = (concurrence_branch(c0, n, tau, g, b)?
                            - concurrence_after_n(&p, n, tau))
                        .abs();
                        worst = worst.max(d);
                    }
                }
            }
        }
        Ok(worst)
    }));

    let freeze_ns = [1_000u32, 10_000, 100_000, 1_000_000];
    let freeze_c0 = [0.2, 0.5, 0.8];
    checks.push(check(CHECK_FREEZING, 1e-3, || {
        let mut worst: f64 = 0.0;
        for c0 in freeze_c0 {
            for b in [Branch::Plus, Branch::Minus] {
                let n = 1_000_000u32;
                let c = concurrence_branch(c0, n, FRAC_PI_2 / (g * n as f64), g, b)?;
                worst = worst.max((c - c0).abs());
            }
        }
        Ok(worst)
    }));
    // reported as the largest increase of |C_N − C₀| between successive decades
    checks.push(check(CHECK_FREEZING_MONOTONE, 0.0, || {
        let mut worst: f64 = 0.0;
        for c0 in freeze_c0 {
            for b in [Branch::Plus, Branch::Minus] {
                let devs = freeze_ns
                    .iter()
                    .map(|&n| {
                        Ok(
                            (concurrence_branch(c0, n, FRAC_PI_2 / (g * n as f64), g, b)? - c0)
                                .abs(),
                        )
                    })
                    .collect::<Result<Vec<f64>>>()?;
                for w in devs.windows(2) {
                    worst = worst.max(w[1] - w[0]);
                }
            }
        }
        Ok(worst)
    }));
    checks.push(check(CHECK_MINUS_BOUND, EXACT_TOL, || {
        let mut worst: f64 = 0.0;
        for c0 in c0_grid() {
            for n in 1..=10_000u32 {
                let c = concurrence_branch(c0, n, FRAC_PI_2 / (g * n as f64), g, Branch::Minus)?;
                worst = worst.max(c - c0);
            }
        }
        Ok(worst)
    }));
    // deviation is 0 when some N ≤ 10⁴ exceeds c0, otherwise the shortfall
    checks.push(check(CHECK_ENHANCEMENT, 0.0, || {
        let mut worst: f64 = 0.0;
        for c0 in c0_grid() {
            let mut best = f64::NEG_INFINITY;
            for n in 1..=10_000u32 {
                let c = concurrence_branch(c0, n, FRAC_PI_2 / (g * n as f64), g, Branch::Plus)?;
                best = best.max(c - c0);
                if best > 0.0 {
                    break;
                }
            }
            worst = worst.max(if best > 0.0 {
                0.0
            } else {
                -best + f64::MIN_POSITIVE
            });
        }
        Ok(worst)
    }));
    checks.push(check(CHECK_SUDDEN_DEATH, 0.0, || {
        let mut worst: f64 = 0.0;
        for c0 in c0_grid() {
            let t_sd = sudden_death_time(c0, g)?;
            let end = FRAC_PI_2 / g;
            for k in 0..=200 {
                let t = t_sd + (end - t_sd) * k as f64 / 200.0;
                worst = worst.max(free_concurrence(c0, t, g, Branch::Plus)?);
            }
        }
        Ok(worst)
    }));

    checks.push(check(CHECK_PHASE, EXACT_TOL, || {
        let mut worst: f64 = 0.0;
        for c0 in [0.3, 0.8] {
            let real = params_from_c0(c0, Branch::Plus, g)?;
            for (pa, pb) in [(0.4, 0.0), (0.0, 2.1), (-1.3, 2.9)] {
                let rotated = SystemParams::new(
                    real.alpha0() * C64::from_polar(1.0, pa),
                    real.beta0() * C64::from_polar(1.0, pb),
                    g,
                )?;
                for n in [1u32, 2, 5, 30] {
                    let x = zeno_state(&real, n, FRAC_PI_2)?;
                    let y = zeno_state(&rotated, n, FRAC_PI_2)?;
                    worst = worst
                        .max((x.concurrence - y.concurrence).abs())
                        .max((x.survival_probability - y.survival_probability).abs())
                        .max(
                            (concurrence_after_n(&real, n, 0.3)
                                - concurrence_after_n(&rotated, n, 0.3))
                            .abs(),
                        );
                }
                worst = worst.max((bell_prep_time(&real)? - bell_prep_time(&rotated)?).abs());
                for t in [0.2, 0.9, 1.3] {
                    let cr = wootters_concurrence(&reduce_to_ab(&evolved_state(&real, t))?)?;
                    let cp = wootters_concurrence(&reduce_to_ab(&evolved_state(&rotated, t))?)?;
                    worst = worst.max((cr - cp).abs());
                }
            }
        }
        Ok(worst)
    }));

    checks.push(check(CHECK_G_SCALING, EXACT_TOL, || {
        let mut worst: f64 = 0.0;
        let p1 = params_from_c0(0.8, Branch::Plus, 1.0)?;
        let p2 = p1.with_g(2.0)?;
        for &t in &[0.1, 0.5, 1.2] {
            let h = t / 2.0;
            worst = worst
                .max(
                    (free_concurrence(0.8, t, 1.0, Branch::Plus)?
                        - free_concurrence(0.8, h, 2.0, Branch::Plus)?)
                    .abs(),
                )
                .max(
                    (concurrence_branch(0.8, 3, t, 1.0, Branch::Minus)?
                        - concurrence_branch(0.8, 3, h, 2.0, Branch::Minus)?)
                    .abs(),
                )
                .max((concurrence_after_n(&p1, 4, t) - concurrence_after_n(&p2, 4, h)).abs())
                .max(evolved_state(&p1, t).max_deviation_up_to_phase(&evolved_state(&p2, h)));
            let (z1, z2) = (zeno_state(&p1, 3, t)?, zeno_state(&p2, 3, h)?);
            worst = worst.max((z1.survival_probability - z2.survival_probability).abs());
        }
        worst =
            worst.max((sudden_death_time(0.8, 1.0)? - 2.0 * sudden_death_time(0.8, 2.0)?).abs());
        worst = worst.max((bell_prep_time(&p1)? - 2.0 * bell_prep_time(&p2)?).abs());
        Ok(worst)
    }));

    checks.push(check(CHECK_BELL_PREP, ORACLE_TOL, || {
        let mut worst: f64 = 0.0;
        for (a2, b2) in [(0.8, 0.2), (0.9, 0.1)] {
            let p = SystemParams::from_moduli(f64::sqrt(a2), f64::sqrt(b2), g)?;
            let t = bell_prep_time(&p)?;
            let out = oracle.run_zeno_protocol(&p, 1, t)?;
            worst = worst
                .max((out.concurrence - 1.0).abs())
                .max((out.survival_probability - 2.0 * b2).abs());
        }
        Ok(worst)
    }));

    ValidationReport { checks }
}

fn clone_err(e: &crate::error::Error) -> crate::error::Error {
    crate::error::Error::InvalidArgument(e.to_string())
}
