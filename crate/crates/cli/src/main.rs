use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use interrogation::evolution::{evolve, CycleConfig, ParticleModel, ThetaMode};
use interrogation::operators::AbsorptionProbability;
use interrogation::oracle::{compare, estimate, TrajectoryConfig, Z_THRESHOLD};
use interrogation::par::Execution;
use interrogation::sweep::{
    self, run_single, run_sweep, SweepSpec, DEFAULT_ABSORPTION_STEPS,
    DEFAULT_GRID_ABSORPTION_STEPS, DEFAULT_MAX_CYCLES,
};
use interrogation::verify::verify;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Quantum interrogation with partially absorbing particles.
#[derive(Parser)]
#[command(name = "qinterrogate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one configuration and print a single CSV record.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        absorption: f64,
        #[arg(long, default_value_t = 24)]
        cycles: u32,
    },
    /// N = 1..cycles at each absorption probability.
    SweepCycles {
        #[command(flatten)]
        common: Common,
        /// Comma-separated absorption probabilities.
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0])]
        absorption: Vec<f64>,
        /// Largest cycle count.
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        cycles: u32,
    },
    /// A over an equally spaced grid of [0, 1] at each cycle count.
    SweepAbsorption {
        #[command(flatten)]
        common: Common,
        /// Comma-separated cycle counts.
        #[arg(long, value_delimiter = ',', default_values_t = [10, 50, 250])]
        cycles: Vec<u32>,
        /// Number of absorption grid points, endpoints included.
        #[arg(long, default_value_t = DEFAULT_ABSORPTION_STEPS)]
        steps: usize,
    },
    /// Full (A, N) grid.
    Grid {
        #[command(flatten)]
        common: Common,
        /// Largest cycle count.
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        cycles: u32,
        /// Number of absorption grid points, endpoints included.
        #[arg(long, default_value_t = DEFAULT_GRID_ABSORPTION_STEPS)]
        steps: usize,
    },
    /// Compare Monte Carlo trajectories with the density-matrix result.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.5)]
        absorption: f64,
        #[arg(long, default_value_t = 50)]
        cycles: u32,
        #[arg(long, default_value_t = 1_000_000)]
        trajectories: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the invariant suite; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "coherent", value_parser = parse_model)]
    model: ParticleModel,
    /// Rotation per cycle: `auto` (π/2N) or radians.
    #[arg(long, default_value = "auto", value_parser = parse_theta)]
    theta: ThetaMode,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_model(s: &str) -> Result<ParticleModel, String> {
    s.parse().map_err(|e: interrogation::Error| e.to_string())
}

fn parse_theta(s: &str) -> Result<ThetaMode, String> {
    s.parse().map_err(|e: interrogation::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Check(String),
    Io(io::Error),
}

impl From<interrogation::Error> for Failure {
    fn from(e: interrogation::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            common,
            absorption,
            cycles,
        } => {
            let config = CycleConfig::new(
                common.theta,
                AbsorptionProbability::new(absorption)?,
                cycles,
                common.model,
            )?;
            let record = run_single(&config)?;
            let mut out = open_output(common.out.as_ref())?;
            sweep::write_csv(&[record], &mut out)?;
            out.flush()?;
        }
        Command::SweepCycles {
            common,
            absorption,
            cycles,
        } => {
            let spec = SweepSpec::Cycles {
                absorptions: absorption,
                n_max: cycles,
            };
            write_sweep(&spec, &common)?;
        }
        Command::SweepAbsorption {
            common,
            cycles,
            steps,
        } => {
            write_sweep(&SweepSpec::Absorption { cycles, steps }, &common)?;
        }
        Command::Grid {
            common,
            cycles,
            steps,
        } => {
            let spec = SweepSpec::Grid {
                n_max: cycles,
                a_steps: steps,
            };
            write_sweep(&spec, &common)?;
        }
        Command::Oracle {
            common,
            absorption,
            cycles,
            trajectories,
            seed,
        } => {
            let cycle = CycleConfig::new(
                common.theta,
                AbsorptionProbability::new(absorption)?,
                cycles,
                common.model,
            )?;
            let config = TrajectoryConfig::new(cycle, trajectories, seed)?;
            let est = estimate(&config);
            let exact = evolve(&cycle).0;
            let z = compare(&est, &exact);
            let mut out = open_output(common.out.as_ref())?;
            sweep::write_oracle_csv(&config, &est, &exact, &z, &mut out)?;
            out.flush()?;
            if z.max_abs() > Z_THRESHOLD {
                return Err(Failure::Check(format!(
                    "max |z| = {:.3} exceeds {Z_THRESHOLD}",
                    z.max_abs()
                )));
            }
        }
        Command::Verify { out } => {
            let report = verify();
            let mut sink = open_output(out.as_ref())?;
            report.write(&mut sink)?;
            sink.flush()?;
            let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
            if !failed.is_empty() {
                return Err(Failure::Check(format!(
                    "failed invariants: {}",
                    failed.join(", ")
                )));
            }
        }
    }
    Ok(())
}

fn write_sweep(spec: &SweepSpec, common: &Common) -> Result<(), Failure> {
    let records = run_sweep(spec, common.model, common.theta, Execution::default())?;
    let mut out = open_output(common.out.as_ref())?;
    sweep::write_csv(&records, &mut out)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
