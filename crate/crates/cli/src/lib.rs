//! Command-line front end for the cdice model.

pub mod chart;
mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cdice_core::policy::{PolicyError, Scenario};

use commands::BenchTest;
use config::{FileConfig, Settings};

pub use chart::{render_chart, Band, Chart, ChartError, Series};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NONCONVERGENCE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cdice", version, about = "Climate benchmarks, calibration diagnostics and optimal climate policy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// Flat TOML file with any of the flag names as keys; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Climate preset, e.g. CDICE, DICE-2016, CDICE-HadGEM2-ES.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Years per step.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Run length or decision horizon in years.
    #[arg(long, global = true)]
    horizon: Option<f64>,
    /// Pure rate of time preference per year.
    #[arg(long, global = true)]
    rho: Option<f64>,
    /// nordhaus, howard-sterner or zero.
    #[arg(long, global = true)]
    damage: Option<String>,
    /// Non-CO2 forcing: linear or proportional[:share].
    #[arg(long, global = true)]
    fex: Option<String>,
    /// Reference data root; defaults to $CDICE_DATA_DIR.
    #[arg(long, global = true)]
    data_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// csv, svg or both.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Solver iteration cap for policy runs.
    #[arg(long, global = true)]
    max_iterations: Option<usize>,
}

impl Flags {
    fn as_config(&self) -> FileConfig {
        FileConfig {
            preset: self.preset.clone(),
            dt: self.dt,
            horizon: self.horizon,
            rho: self.rho,
            damage: self.damage.clone(),
            fex: self.fex.clone(),
            data_dir: self.data_dir.clone(),
            out_dir: self.out_dir.clone(),
            format: self.format.clone(),
            max_iterations: self.max_iterations,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run climate benchmark protocols and print a conformance summary.
    Bench {
        #[arg(value_enum)]
        test: BenchChoice,
    },
    /// Solve the business-as-usual or optimal policy problem, or sweep presets and discount rates.
    Policy {
        #[arg(value_enum)]
        mode: PolicyChoice,
    },
    /// Carbon-cycle eigen diagnostics, temperature timescales or a carbon-cycle fit.
    Calibrate {
        #[arg(value_enum)]
        task: CalibrateChoice,
    },
    /// Integrate from the 1850 equilibrium until the atmosphere reaches a target concentration.
    Spinup {
        #[arg(long, default_value_t = 400.0)]
        target_ppm: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchChoice {
    Test1,
    Test2,
    Test3,
    Test4,
    All,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyChoice {
    Bau,
    Optimal,
    Sweep,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CalibrateChoice {
    Eigen,
    Timescales,
    Fit,
}

fn dispatch(command: &Command, s: &Settings) -> anyhow::Result<()> {
    match command {
        Command::Bench { test } => {
            let tests = match test {
                BenchChoice::Test1 => vec![BenchTest::Abrupt4x],
                BenchChoice::Test2 => vec![BenchTest::Ramp1pct],
                BenchChoice::Test3 => vec![BenchTest::Pulse],
                BenchChoice::Test4 => vec![BenchTest::Rcp],
                BenchChoice::All => BenchTest::ALL.to_vec(),
            };
            commands::bench(&tests, s)
        }
        Command::Policy { mode } => match mode {
            PolicyChoice::Bau => commands::policy(Scenario::Bau, s),
            PolicyChoice::Optimal => commands::policy(Scenario::Optimal, s),
            PolicyChoice::Sweep => commands::policy_sweep(s),
        },
        Command::Calibrate { task } => match task {
            CalibrateChoice::Eigen => commands::calibrate_eigen(s),
            CalibrateChoice::Timescales => commands::calibrate_timescales(s),
            CalibrateChoice::Fit => commands::calibrate_fit(s),
        },
        Command::Spinup { target_ppm } => commands::spinup(*target_ppm, s),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let nonconvergent = err
        .chain()
        .any(|e| matches!(e.downcast_ref::<PolicyError>(), Some(PolicyError::NonConvergence { .. })));
    if nonconvergent {
        EXIT_NONCONVERGENCE
    } else {
        EXIT_ERROR
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
        }
    };
    let result = (|| {
        let file = match &cli.flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let settings = Settings::from_config(&file.overlay(cli.flags.as_config()))?;
        dispatch(&cli.command, &settings)
    })();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {:#}", e);
            exit_code(&e)
        }
    }
}
