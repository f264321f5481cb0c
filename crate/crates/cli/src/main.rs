use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cvmdi_cli::commands::distance::DistanceArgs;
use cvmdi_cli::commands::heatmap::{HeatmapArgs, HeatmapMode};
use cvmdi_cli::commands::logneg::LognegArgs;
use cvmdi_cli::commands::{distance, heatmap, logneg, verify};
use cvmdi_cli::config::{FileConfig, Settings};
use cvmdi_cli::{CliError, CliResult};

/// Key-rate simulator for CV-MDI QKD with Gaussian and non-Gaussian
/// (photon added-then-subtracted, photon-replaced) resource states.
#[derive(Parser)]
#[command(name = "cvmdi", version, about)]
struct Cli {
    /// Output directory for CSV files, plots, and manifests.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Config file with key=value lines (gamma, alpha, xi, length_km, threads, out).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (also CVMDI_THREADS); defaults to the available cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the validation battery and write validation_report.txt.
    Verify,
    /// Log-negativity and heralding probability vs transmissivity.
    Logneg(LognegCli),
    /// Secret key rate vs distance with per-point T optimization.
    Distance(DistanceCli),
    /// Heat maps of -log10(SKR) over squeezing x distance or squeezing x noise.
    Heatmap(HeatmapCli),
}

#[derive(Args)]
struct LognegCli {
    /// Initial squeezing in dB.
    #[arg(long)]
    rdb: f64,
    #[arg(long, default_value_t = 0.01)]
    tmin: f64,
    #[arg(long, default_value_t = 0.999)]
    tmax: f64,
    /// Number of transmissivity samples.
    #[arg(long, default_value_t = 200)]
    points: usize,
}

#[derive(Args)]
struct DistanceCli {
    /// Initial squeezing in dB.
    #[arg(long, default_value_t = 1.0)]
    rdb: f64,
    /// Total excess noise in shot-noise units (default from config, 0.004).
    #[arg(long)]
    xi: Option<f64>,
    /// Reconciliation efficiency (default from config, 0.95).
    #[arg(long)]
    gamma: Option<f64>,
    /// Largest distance in km.
    #[arg(long, default_value_t = 80.0)]
    lmax: f64,
    /// Number of distance samples.
    #[arg(long, default_value_t = 161)]
    points: usize,
}

#[derive(Args)]
struct HeatmapCli {
    /// Which second axis to sweep next to the squeezing.
    #[arg(long, value_enum)]
    mode: ModeCli,
    #[arg(long, default_value_t = 0.0)]
    rdb_min: f64,
    #[arg(long, default_value_t = 3.0)]
    rdb_max: f64,
    #[arg(long, default_value_t = 61)]
    rdb_points: usize,
    /// Swept-axis lower bound (default: 0).
    #[arg(long)]
    axis_min: Option<f64>,
    /// Swept-axis upper bound (default: 80 km or 0.04 SNU by mode).
    #[arg(long)]
    axis_max: Option<f64>,
    #[arg(long, default_value_t = 81)]
    axis_points: usize,
    /// Pinned value of the other axis (xi for distance mode, L for noise mode).
    #[arg(long)]
    fixed: Option<f64>,
    /// Reconciliation efficiency (default from config, 0.95).
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeCli {
    Distance,
    Noise,
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let gamma_flag = match &cli.command {
        Command::Distance(d) => d.gamma,
        Command::Heatmap(h) => h.gamma,
        _ => None,
    };
    let settings = Settings::resolve(&file, gamma_flag, cli.out.clone(), cli.threads)?;

    match cli.command {
        Command::Verify => verify::run(&settings),
        Command::Logneg(args) => logneg::run(
            &settings,
            &LognegArgs {
                r_db: args.rdb,
                t_min: args.tmin,
                t_max: args.tmax,
                points: args.points,
            },
        ),
        Command::Distance(args) => distance::run(
            &settings,
            &DistanceArgs {
                r_db: args.rdb,
                xi: args.xi.unwrap_or(settings.xi),
                l_max: args.lmax,
                points: args.points,
            },
        ),
        Command::Heatmap(args) => heatmap::run(
            &settings,
            &HeatmapArgs {
                mode: match args.mode {
                    ModeCli::Distance => HeatmapMode::Distance,
                    ModeCli::Noise => HeatmapMode::Noise,
                },
                r_db_min: args.rdb_min,
                r_db_max: args.rdb_max,
                r_db_points: args.rdb_points,
                axis_min: args.axis_min,
                axis_max: args.axis_max,
                axis_points: args.axis_points,
                fixed: args.fixed,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
