use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jc_zeno::analytic::params_from_c0;
use jc_zeno::experiments::{
    default_c0_grid, emit, run_bell_prep, run_free_evolution, run_single_measurement,
    run_zeno_sweep, BellPrepReport, Experiment, FreeEvolutionRow, InitialStates, Output,
    SingleMeasurementRow, SweepSpec, ZenoRow, DEFAULT_N_MAX, DEFAULT_TIME_POINTS,
};
use jc_zeno::validate::{run_validate, ValidationConfig};
use jc_zeno::{Branch, Error, SystemParams};

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_IO: u8 = 3;

/// Initial concurrence used by `zeno-sweep` when none is given.
const DEFAULT_ZENO_C0: f64 = 0.8;

#[derive(Parser, Debug)]
#[command(
    name = "jc-zeno",
    version,
    about = "Null-result measurement sweeps on a double Jaynes-Cummings register"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Concurrence after N null results at spacing π/(2gN), both branches.
    ZenoSweep(SweepArgs),
    /// Free-evolution ab concurrence over gt ∈ [0, π/2], closed form and oracle.
    FreeEvolution(SweepArgs),
    /// ab concurrence after one null result at gt ∈ [0, π/2], closed form and oracle.
    SingleMeasurement(SweepArgs),
    /// One null result at the Bell-preparation time.
    BellPrep(SweepArgs),
    /// Run the oracle-vs-closed-form and property checks.
    Validate {
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Initial concurrence(s), comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["alpha0", "beta0"])]
    c0: Vec<f64>,
    /// Modulus of the |11⟩ amplitude.
    #[arg(long, requires = "beta0")]
    alpha0: Option<f64>,
    /// Modulus of the |00⟩ amplitude.
    #[arg(long, requires = "alpha0")]
    beta0: Option<f64>,
    #[arg(long, value_enum, default_value = "plus")]
    branch: BranchArg,
    #[arg(long, default_value_t = DEFAULT_N_MAX)]
    n_max: u32,
    #[arg(long, default_value_t = DEFAULT_TIME_POINTS)]
    time_points: usize,
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    /// Output path, or `-` for standard output.
    #[arg(long, default_value = "-")]
    out: String,
}

fn output(path: &str) -> Output {
    if path == "-" {
        Output::Stdout
    } else {
        Output::File(PathBuf::from(path))
    }
}

impl SweepArgs {
    fn spec(&self, experiment: Experiment) -> SweepSpec {
        let initial = match (self.alpha0, self.beta0) {
            (Some(alpha0), Some(beta0)) => InitialStates::Amplitudes { alpha0, beta0 },
            _ => {
                let c0 = if !self.c0.is_empty() {
                    self.c0.clone()
                } else if experiment == Experiment::ZenoSweep || experiment == Experiment::BellPrep
                {
                    vec![DEFAULT_ZENO_C0]
                } else {
                    default_c0_grid()
                };
                InitialStates::Concurrences {
                    c0,
                    branch: self.branch.into(),
                }
            }
        };
        SweepSpec {
            experiment,
            initial,
            n_max: self.n_max,
            time_points: self.time_points,
            g: self.g,
            output: output(&self.out),
        }
    }
}

fn bell_params(spec: &SweepSpec) -> Result<SystemParams, Error> {
    match &spec.initial {
        InitialStates::Amplitudes { alpha0, beta0 } => {
            SystemParams::from_moduli(*alpha0, *beta0, spec.g)
        }
        InitialStates::Concurrences { c0, branch } => match c0.as_slice() {
            [c] => params_from_c0(*c, *branch, spec.g),
            _ => Err(Error::InvalidArgument(
                "bell-prep takes a single initial state".into(),
            )),
        },
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::ZenoSweep(args) => {
            let spec = args.spec(Experiment::ZenoSweep);
            emit(ZenoRow::HEADER, &run_zeno_sweep(&spec)?, &spec.output)?;
        }
        Command::FreeEvolution(args) => {
            let spec = args.spec(Experiment::FreeEvolution);
            let rows = run_free_evolution(&spec)?;
            emit(
                FreeEvolutionRow::header(spec.branch()?),
                &rows,
                &spec.output,
            )?;
        }
        Command::SingleMeasurement(args) => {
            let spec = args.spec(Experiment::SingleMeasurement);
            emit(
                SingleMeasurementRow::HEADER,
                &run_single_measurement(&spec)?,
                &spec.output,
            )?;
        }
        Command::BellPrep(args) => {
            let spec = args.spec(Experiment::BellPrep);
            spec.validate()?;
            let report = run_bell_prep(&bell_params(&spec)?)?;
            emit(BellPrepReport::HEADER, &[report], &spec.output)?;
        }
        Command::Validate { out } => {
            let report = run_validate(&ValidationConfig::default());
            let text = format!("{report}\n");
            match output(&out) {
                Output::Stdout => print!("{text}"),
                Output::File(path) => std::fs::File::create(&path)
                    .and_then(|mut f| f.write_all(text.as_bytes()))
                    .map_err(|source| Error::Io { path, source })?,
            }
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_VALIDATION));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e @ Error::Io { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_IO)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
