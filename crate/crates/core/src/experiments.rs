//! Parameter sweeps and their CSV encoding.
//!
//! Rows are computed in parallel and always emitted in grid order, so the
//! same [`SweepSpec`] produces byte-identical output.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::analytic::{
    bell_prep_time, concurrence_after_n, concurrence_branch, free_concurrence, params_from_c0,
    Branch,
};
use crate::entanglement::{pure_concurrence, wootters_concurrence};
use crate::error::{Error, Result};
use crate::oracle::{project_null_ab, reduce_to_ab, Oracle};
use crate::types::SystemParams;

/// Default measurement-count range `N = 1..=100`.
pub const DEFAULT_N_MAX: u32 = 100;
/// Default number of `gt` samples on `[0, π/2]`.
pub const DEFAULT_TIME_POINTS: usize = 201;
/// Default initial-concurrence grid `0.1, 0.2, …, 0.9`.
pub fn default_c0_grid() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Experiment {
    ZenoSweep,
    FreeEvolution,
    SingleMeasurement,
    BellPrep,
    Validate,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Experiment::ZenoSweep => "zeno-sweep",
            Experiment::FreeEvolution => "free-evolution",
            Experiment::SingleMeasurement => "single-measurement",
            Experiment::BellPrep => "bell-prep",
            Experiment::Validate => "validate",
        };
        f.write_str(s)
    }
}

/// How the initial `ab` states of a sweep are specified.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialStates {
    /// One or more initial concurrences on a single branch.
    Concurrences { c0: Vec<f64>, branch: Branch },
    /// Explicit real amplitude moduli.
    Amplitudes { alpha0: f64, beta0: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub experiment: Experiment,
    pub initial: InitialStates,
    pub n_max: u32,
    pub time_points: usize,
    pub g: f64,
    pub output: Output,
}

impl SweepSpec {
    pub fn new(experiment: Experiment, initial: InitialStates) -> Self {
        SweepSpec {
            experiment,
            initial,
            n_max: DEFAULT_N_MAX,
            time_points: DEFAULT_TIME_POINTS,
            g: 1.0,
            output: Output::Stdout,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g > 0.0) {
            return Err(Error::InvalidCoupling(self.g));
        }
        if self.n_max < 1 {
            return Err(Error::InvalidArgument("n-max must be at least 1".into()));
        }
        if self.time_points < 2 {
            return Err(Error::InvalidArgument(
                "time-points must be at least 2".into(),
            ));
        }
        if let InitialStates::Concurrences { c0, .. } = &self.initial {
            if c0.is_empty() {
                return Err(Error::InvalidArgument(
                    "initial concurrence grid is empty".into(),
                ));
            }
            if let Some(bad) = c0.iter().find(|c| !(**c > 0.0 && **c <= 1.0)) {
                return Err(Error::InvalidArgument(format!(
                    "initial concurrence {bad} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Parameter sets of the sweep, one per grid entry.
    pub fn parameter_sets(&self) -> Result<Vec<SystemParams>> {
        match &self.initial {
            InitialStates::Concurrences { c0, branch } => c0
                .iter()
                .map(|&c| params_from_c0(c, *branch, self.g))
                .collect(),
            InitialStates::Amplitudes { alpha0, beta0 } => {
                Ok(vec![SystemParams::from_moduli(*alpha0, *beta0, self.g)?])
            }
        }
    }

    /// Branch of the initial states; explicit amplitudes decide it themselves.
    pub fn branch(&self) -> Result<Branch> {
        match &self.initial {
            InitialStates::Concurrences { branch, .. } => Ok(*branch),
            InitialStates::Amplitudes { .. } => Ok(Branch::of(&self.parameter_sets()?[0])),
        }
    }

    /// `gt` samples, uniform on `[0, π/2]` with both endpoints exact.
    pub fn gt_grid(&self) -> Vec<f64> {
        let last = (self.time_points - 1) as f64;
        (0..self.time_points)
            .map(|k| FRAC_PI_2 * (k as f64 / last))
            .collect()
    }
}

/// Decimal float with 17 significant digits; negative zero prints as zero.
pub fn format_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// One CSV record.
pub trait CsvRow {
    fn fields(&self) -> Vec<String>;
}

pub fn write_csv<R: CsvRow, W: Write>(header: &[&str], rows: &[R], mut out: W) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.fields().join(","))?;
    }
    out.flush()
}

/// Write rows to the sweep's output target, attaching the path to I/O errors.
pub fn emit<R: CsvRow>(header: &[&str], rows: &[R], output: &Output) -> Result<()> {
    match output {
        Output::Stdout => {
            let stdout = io::stdout();
            write_csv(header, rows, stdout.lock()).map_err(|source| Error::Io {
                path: "-".into(),
                source,
            })
        }
        Output::File(path) => {
            let io_err = |source| Error::Io {
                path: path.clone(),
                source,
            };
            let file = File::create(path).map_err(io_err)?;
            write_csv(header, rows, BufWriter::new(file)).map_err(io_err)
        }
    }
}

/// Concurrence after `N` null results for both branches.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ZenoRow {
    pub n: u32,
    pub c_minus: f64,
    pub c_plus: f64,
}

impl ZenoRow {
    pub const HEADER: &'static [&'static str] = &["N", "C_N_minus", "C_N_plus"];
}

impl CsvRow for ZenoRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.n.to_string(),
            format_float(self.c_minus),
            format_float(self.c_plus),
        ]
    }
}

/// Concurrence-vs-time row carrying the closed form and the oracle value.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TimeRow {
    pub gt: f64,
    pub c0: f64,
    pub analytic: f64,
    pub oracle: f64,
}

impl TimeRow {
    pub fn deviation(&self) -> f64 {
        (self.analytic - self.oracle).abs()
    }

    fn fields(&self) -> Vec<String> {
        [self.gt, self.c0, self.analytic, self.oracle]
            .iter()
            .map(|&x| format_float(x))
            .collect()
    }
}

/// Free-evolution row.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FreeEvolutionRow(pub TimeRow);

impl FreeEvolutionRow {
    pub fn header(branch: Branch) -> &'static [&'static str] {
        match branch {
            Branch::Plus => &["gt", "c0", "C_f_plus", "C_f_oracle"],
            Branch::Minus => &["gt", "c0", "C_f_minus", "C_f_oracle"],
        }
    }
}

impl CsvRow for FreeEvolutionRow {
    fn fields(&self) -> Vec<String> {
        self.0.fields()
    }
}

/// Single-measurement row.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SingleMeasurementRow(pub TimeRow);

impl SingleMeasurementRow {
    pub const HEADER: &'static [&'static str] = &["gt", "c0", "C_1_plus", "C_1_oracle"];
}

impl CsvRow for SingleMeasurementRow {
    fn fields(&self) -> Vec<String> {
        self.0.fields()
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BellPrepReport {
    pub t_star: f64,
    pub survival_probability: f64,
    pub final_concurrence: f64,
}

impl BellPrepReport {
    pub const HEADER: &'static [&'static str] =
        &["t_star", "survival_probability", "final_concurrence"];
}

impl CsvRow for BellPrepReport {
    fn fields(&self) -> Vec<String> {
        [
            self.t_star,
            self.survival_probability,
            self.final_concurrence,
        ]
        .iter()
        .map(|&x| format_float(x))
        .collect()
    }
}

fn expect(spec: &SweepSpec, experiment: Experiment) -> Result<()> {
    if spec.experiment != experiment {
        return Err(Error::InvalidArgument(format!(
            "sweep is configured for {}, not {experiment}",
            spec.experiment
        )));
    }
    spec.validate()
}

/// `C_N^±` for `N = 1..=n_max` at `τ = π/(2gN)`.
pub fn run_zeno_sweep(spec: &SweepSpec) -> Result<Vec<ZenoRow>> {
    expect(spec, Experiment::ZenoSweep)?;
    let c0 = match &spec.initial {
        InitialStates::Concurrences { c0, .. } if c0.len() == 1 => c0[0],
        InitialStates::Concurrences { .. } => {
            return Err(Error::InvalidArgument(
                "zeno-sweep takes a single initial concurrence".into(),
            ))
        }
        InitialStates::Amplitudes { .. } => spec.parameter_sets()?[0].c0(),
    };
    let g = spec.g;
    (1..=spec.n_max)
        .into_par_iter()
        .map(|n| {
            let tau = FRAC_PI_2 / (g * n as f64);
            Ok(ZenoRow {
                n,
                c_minus: concurrence_branch(c0, n, tau, g, Branch::Minus)?,
                c_plus: concurrence_branch(c0, n, tau, g, Branch::Plus)?,
            })
        })
        .collect()
}

fn time_grid_rows<F>(spec: &SweepSpec, point: F) -> Result<Vec<TimeRow>>
where
    F: Fn(&Oracle, &SystemParams, f64) -> Result<TimeRow> + Sync,
{
    let params = spec.parameter_sets()?;
    let gts = spec.gt_grid();
    let oracle = Oracle::exact(spec.g);
    let points: Vec<(SystemParams, f64)> = params
        .iter()
        .flat_map(|p| gts.iter().map(move |&gt| (*p, gt)))
        .collect();
    points
        .par_iter()
        .map(|(p, gt)| point(&oracle, p, *gt))
        .collect()
}

/// Free-evolution `ab` concurrence, closed form next to
/// Wootters on the oracle's reduced state.
pub fn run_free_evolution(spec: &SweepSpec) -> Result<Vec<FreeEvolutionRow>> {
    expect(spec, Experiment::FreeEvolution)?;
    let branch = spec.branch()?;
    let rows = time_grid_rows(spec, |oracle, params, gt| {
        let t = gt / params.g();
        let c0 = params.c0();
        let analytic = free_concurrence(c0, t, params.g(), branch)?;
        let rho = reduce_to_ab(&oracle.evolve(&params.initial_state(), t))?;
        Ok(TimeRow {
            gt,
            c0,
            analytic,
            oracle: wootters_concurrence(&rho)?,
        })
    })?;
    Ok(rows.into_iter().map(FreeEvolutionRow).collect())
}

/// One null-result measurement at time `t` on a freely evolving register.
pub fn single_measurement(oracle: &Oracle, params: &SystemParams, t: f64) -> Result<(f64, f64)> {
    let (projected, p) = project_null_ab(&oracle.evolve(&params.initial_state(), t))?;
    let ab = projected.ab_factor(0.0)?;
    Ok((pure_concurrence(&ab)?, p))
}

/// `ab` concurrence after a single null-result measurement at `gt`.
pub fn run_single_measurement(spec: &SweepSpec) -> Result<Vec<SingleMeasurementRow>> {
    expect(spec, Experiment::SingleMeasurement)?;
    if spec.branch()? != Branch::Plus {
        return Err(Error::InvalidArgument(
            "single-measurement sweeps require |alpha0| >= |beta0| (plus branch)".into(),
        ));
    }
    let rows = time_grid_rows(spec, |oracle, params, gt| {
        let t = gt / params.g();
        let analytic = concurrence_after_n(params, 1, t);
        let (oracle_c, _) = single_measurement(oracle, params, t)?;
        Ok(TimeRow {
            gt,
            c0: params.c0(),
            analytic,
            oracle: oracle_c,
        })
    })?;
    Ok(rows.into_iter().map(SingleMeasurementRow).collect())
}

/// Evolve to the Bell-preparation time and post-select one null result.
pub fn run_bell_prep(params: &SystemParams) -> Result<BellPrepReport> {
    let t_star = bell_prep_time(params)?;
    let outcome = Oracle::exact(params.g()).run_zeno_protocol(params, 1, t_star)?;
    Ok(BellPrepReport {
        t_star,
        survival_probability: outcome.survival_probability,
        final_concurrence: outcome.concurrence,
    })
}
