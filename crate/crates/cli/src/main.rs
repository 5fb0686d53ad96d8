use std::path::PathBuf;
use std::process::ExitCode as ProcessExit;

use clap::{Parser, Subcommand, ValueEnum};
use zeno_ctl::commands::{self, DEFAULT_FIDELITY_POINTS, DEFAULT_STEPS, DEFAULT_SWEEP_POINTS};
use zeno_ctl::output::emit;
use zeno_ctl::verify::{self, Faults};
use zeno_ctl::{CliError, Config};

#[derive(Parser)]
#[command(
    name = "zeno-ctl",
    version,
    about = "Zeno-limit decay rates under measurement and control"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Grid points for `sweep-alpha` and `fidelity`.
    #[arg(long)]
    points: Option<usize>,
    /// Steps per interval for `trajectory`.
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    FlipControlledRateSign,
}

#[derive(Subcommand)]
enum Command {
    /// Free and controlled Zeno-limit rates as JSON.
    Rate(Common),
    /// Optimal control over the polar angle of the initial state (CSV).
    SweepAlpha(Common),
    /// Ensemble-average fidelity with and without optimal control (CSV).
    Fidelity(Common),
    /// Bloch-vector paths over one measurement interval (CSV).
    Trajectory(Common),
    /// Runs the oracle suite; exit 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Deliberately break one computation to confirm the suite notices.
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ZENO_CTL_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::schema(format!("ZENO_CTL_THREADS must be a positive integer, got `{v}`"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::schema(e.to_string()))
}

fn load(common: &Common) -> Result<Config, CliError> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| CliError::schema("--config <path> is required"))?;
    Config::load(path)
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Rate(c) => emit(&commands::rate_json(&load(&c)?)?, c.out.as_deref())?,
        Command::SweepAlpha(c) => {
            let t = commands::sweep_alpha(&load(&c)?, c.points.unwrap_or(DEFAULT_SWEEP_POINTS))?;
            emit(&t.to_csv(), c.out.as_deref())?
        }
        Command::Fidelity(c) => {
            let t = commands::fidelity(&load(&c)?, c.points.unwrap_or(DEFAULT_FIDELITY_POINTS))?;
            emit(&t.to_csv(), c.out.as_deref())?
        }
        Command::Trajectory(c) => {
            let t = commands::trajectory(&load(&c)?, c.steps.unwrap_or(DEFAULT_STEPS))?;
            emit(&t.to_csv(), c.out.as_deref())?
        }
        Command::Verify { common, inject_fault } => {
            let faults = Faults {
                flip_controlled_rate_sign: matches!(inject_fault, Some(Fault::FlipControlledRateSign)),
            };
            let outcomes = verify::run_suite(faults);
            emit(&verify::render(&outcomes), common.out.as_deref())?;
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            if failed > 0 {
                return Err(CliError::Verification { failed });
            }
        }
    }
    Ok(())
}

fn main() -> ProcessExit {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ProcessExit::SUCCESS,
        Err(e) => {
            eprintln!("zeno-ctl: {e}");
            ProcessExit::from(e.exit_code() as u8)
        }
    }
}
