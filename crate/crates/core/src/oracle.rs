//! Brute-force state-vector simulator for the 2+2 qubit register.
//!
//! Nothing here uses the closed forms in [`crate::analytic`]: the Hamiltonian
//! is assembled from ladder operators, propagated numerically, and measured
//! by an explicit projector. The two paths are compared in tests and by the
//! `validate` command.

use nalgebra::{Matrix4, SMatrix, SVector};
use num_complex::Complex64 as C64;

use crate::entanglement::pure_concurrence;
use crate::error::{Error, Result};
use crate::types::{
    basis_bits, basis_index, excitation_number, Bit, PureState16, SystemParams, TwoQubitDensity,
    ZenoOutcome, IMPOSSIBLE_PROB,
};

pub type Matrix16 = SMatrix<C64, 16, 16>;
type Vector16 = SVector<C64, 16>;

/// Default RK4 step in units of `1/g`.
pub const DEFAULT_RK4_STEP: f64 = 1e-4;

/// Qubit slots of the register, in basis-index order.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Qubit {
    SmallA,
    SmallB,
    BigA,
    BigB,
}

impl Qubit {
    fn mask(self) -> usize {
        match self {
            Qubit::SmallA => 8,
            Qubit::SmallB => 4,
            Qubit::BigA => 2,
            Qubit::BigB => 1,
        }
    }
}

/// `σ₊` on one qubit of the register, as a 16×16 matrix.
fn raising(q: Qubit) -> Matrix16 {
    let mut m = Matrix16::zeros();
    for k in 0..16 {
        if k & q.mask() == 0 {
            m[(k | q.mask(), k)] = C64::new(1.0, 0.0);
        }
    }
    m
}

/// Exchange term `σ₊ˣσ₋ʸ + σ₋ˣσ₊ʸ`.
fn exchange(x: Qubit, y: Qubit) -> Matrix16 {
    let up_x = raising(x);
    let up_y = raising(y);
    up_x * up_y.adjoint() + up_x.adjoint() * up_y
}

/// Total excitation number operator (diagonal).
pub fn number_operator() -> Matrix16 {
    Matrix16::from_fn(|i, j| {
        if i == j {
            C64::new(excitation_number(i) as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `H = g_aA (σ₊ᵃσ₋ᴬ + h.c.) + g_bB (σ₊ᵇσ₋ᴮ + h.c.)`, `ħ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian16 {
    entries: Matrix16,
}

impl Hamiltonian16 {
    /// Independent couplings for the `a–A` and `b–B` pairs.
    pub fn with_pair_couplings(g_aa: f64, g_bb: f64) -> Self {
        let h = exchange(Qubit::SmallA, Qubit::BigA) * C64::new(g_aa, 0.0)
            + exchange(Qubit::SmallB, Qubit::BigB) * C64::new(g_bb, 0.0);
        Hamiltonian16 { entries: h }
    }

    pub fn entries(&self) -> &Matrix16 {
        &self.entries
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (self.entries - self.entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest element of `[H, N̂]`.
    pub fn excitation_commutator_defect(&self) -> f64 {
        let n = number_operator();
        (self.entries * n - n * self.entries)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// Equal-coupling double Jaynes-Cummings Hamiltonian.
pub fn build_hamiltonian(g: f64) -> Hamiltonian16 {
    Hamiltonian16::with_pair_couplings(g, g)
}

/// How `exp(−iHt)` is applied.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum EvolutionMethod {
    /// Exact, via the eigendecomposition of `H`.
    Eigen,
    /// Classical fourth-order Runge-Kutta with at most this step (in time units).
    ///
    /// Global amplitude error scales as `t (‖H‖ step)⁴`; `1e-4/g` keeps it
    /// near roundoff over the swap time.
    Rk4 { max_step: f64 },
}

/// Propagator for a fixed Hamiltonian.
#[derive(Clone, Debug)]
pub struct Oracle {
    hamiltonian: Hamiltonian16,
    method: EvolutionMethod,
    eigenvalues: SVector<f64, 16>,
    eigenvectors: Matrix16,
}

impl Oracle {
    pub fn new(hamiltonian: Hamiltonian16, method: EvolutionMethod) -> Self {
        let h = hamiltonian.entries;
        let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
        let eig = sym.symmetric_eigen();
        Oracle {
            hamiltonian,
            method,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }

    /// Exact propagation for the equal-coupling Hamiltonian at rate `g`.
    pub fn exact(g: f64) -> Self {
        Self::new(build_hamiltonian(g), EvolutionMethod::Eigen)
    }

    pub fn hamiltonian(&self) -> &Hamiltonian16 {
        &self.hamiltonian
    }

    pub fn method(&self) -> EvolutionMethod {
        self.method
    }

    /// `exp(−iHt)` as a matrix (eigen route).
    pub fn propagator(&self, t: f64) -> Matrix16 {
        let v = &self.eigenvectors;
        let phases = Matrix16::from_fn(|i, j| {
            if i == j {
                C64::from_polar(1.0, -self.eigenvalues[i] * t)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        v * phases * v.adjoint()
    }

    /// `exp(−iHt)|state⟩`.
    pub fn evolve(&self, state: &PureState16, t: f64) -> PureState16 {
        let psi = Vector16::from_column_slice(state.amplitudes());
        let out = match self.method {
            EvolutionMethod::Eigen => {
                let v = &self.eigenvectors;
                let mut coeffs = v.adjoint() * psi;
                for (k, c) in coeffs.iter_mut().enumerate() {
                    *c *= C64::from_polar(1.0, -self.eigenvalues[k] * t);
                }
                v * coeffs
            }
            EvolutionMethod::Rk4 { max_step } => self.rk4(psi, t, max_step),
        };
        let mut amps = [C64::new(0.0, 0.0); 16];
        amps.copy_from_slice(out.as_slice());
        PureState16::from_amplitudes_unchecked(amps)
    }

    /// RK4 with `ceil(t / max_step)` equal steps. For `dψ/dt = −iHψ` one step is
    /// the fixed matrix `Σ_{k≤4} (−iH dt)^k / k!`, so the step count is applied by
    /// repeated squaring; the truncation error is that of stepping one by one.
    fn rk4(&self, psi: Vector16, t: f64, max_step: f64) -> Vector16 {
        if t == 0.0 {
            return psi;
        }
        let steps = (t.abs() / max_step).ceil().max(1.0) as u64;
        let dt = t / steps as f64;
        let a = self.hamiltonian.entries * C64::new(0.0, -dt);
        let mut step = Matrix16::identity();
        let mut term = Matrix16::identity();
        for k in 1..=4 {
            term = term * a / C64::new(k as f64, 0.0);
            step += term;
        }
        let mut acc = Matrix16::identity();
        let mut base = step;
        let mut remaining = steps;
        while remaining > 0 {
            if remaining & 1 == 1 {
                acc = base * acc;
            }
            base = base * base;
            remaining >>= 1;
        }
        acc * psi
    }

    /// Alternate `n` free evolutions of `total_time / n` with null-result
    /// projections on `AB`, starting from the initial register of `params`.
    pub fn run_zeno_protocol(
        &self,
        params: &SystemParams,
        n: u32,
        total_time: f64,
    ) -> Result<ZenoOutcome> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "number of measurements must be at least 1".into(),
            ));
        }
        let tau = total_time / n as f64;
        let mut state = params.initial_state();
        let mut survival = 1.0;
        for _ in 0..n {
            let evolved = self.evolve(&state, tau);
            let (projected, p) = project_null_ab(&evolved)?;
            survival *= p;
            state = projected;
        }
        if survival < IMPOSSIBLE_PROB {
            return Err(Error::ImpossibleOutcome {
                probability: survival,
            });
        }
        let ab_state = state.ab_factor(0.0)?;
        let concurrence = pure_concurrence(&ab_state)?;
        Ok(ZenoOutcome {
            ab_state,
            survival_probability: survival,
            concurrence,
            n_measurements: n,
            tau,
        })
    }
}

/// `exp(−iHt)|state⟩` by exact diagonalization.
pub fn evolve(state: &PureState16, h: &Hamiltonian16, t: f64) -> PureState16 {
    Oracle::new(h.clone(), EvolutionMethod::Eigen).evolve(state, t)
}

/// Project onto `n_A = n_B = 0` and renormalize.
///
/// Returns the post-measurement state and the probability of the null
/// outcome, or [`Error::ImpossibleOutcome`] when that probability underflows.
pub fn project_null_ab(state: &PureState16) -> Result<(PureState16, f64)> {
    let mut amps = [C64::new(0.0, 0.0); 16];
    let mut prob = 0.0;
    for (k, z) in state.amplitudes().iter().enumerate() {
        let (_, _, big_a, big_b) = basis_bits(k);
        if big_a == Bit::Zero && big_b == Bit::Zero {
            amps[k] = *z;
            prob += z.norm_sqr();
        }
    }
    if prob < IMPOSSIBLE_PROB {
        return Err(Error::ImpossibleOutcome { probability: prob });
    }
    let norm = prob.sqrt();
    for z in amps.iter_mut() {
        *z /= norm;
    }
    Ok((PureState16::from_amplitudes_unchecked(amps), prob))
}

/// Null-result measurements at spacing `total_time / n` with exact propagation.
pub fn run_zeno_protocol(params: &SystemParams, n: u32, total_time: f64) -> Result<ZenoOutcome> {
    Oracle::exact(params.g()).run_zeno_protocol(params, n, total_time)
}

/// Partial trace over `A` and `B`.
pub fn reduce_to_ab(state: &PureState16) -> Result<TwoQubitDensity> {
    let amps = state.amplitudes();
    let norm_sqr = state.norm_sqr();
    let mut rho = Matrix4::<C64>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = C64::new(0.0, 0.0);
            for env in 0..4 {
                let row = basis_index(bit(i, 2), bit(i, 1), bit(env, 2), bit(env, 1));
                let col = basis_index(bit(j, 2), bit(j, 1), bit(env, 2), bit(env, 1));
                acc += amps[row] * amps[col].conj();
            }
            rho[(i, j)] = acc / norm_sqr;
        }
    }
    TwoQubitDensity::new(rho)
}

fn bit(index: usize, mask: usize) -> Bit {
    Bit::from_bool(index & mask != 0)
}
