//! `nfsar`: near-field FMCW SAR simulation and reconstruction runner.

use nfsar_cli::{config, emit, error, pipeline};

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use error::CliResult;
use pipeline::RunOptions;

#[derive(Parser)]
#[command(name = "nfsar", version, about = "Near-field FMCW SAR simulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the seed declared in the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output root directory (default: config `output.dir`, else `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Image output format.
    #[arg(long, value_parser = ["raw", "csv", "pgm"])]
    format: Option<String>,
    /// Also compute the backprojection oracle and report the correlation.
    #[arg(long)]
    oracle: bool,
    /// Validate the config and exit without simulating or writing files.
    #[arg(long)]
    dry_run: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a beat cube and write it to disk.
    Simulate(CommonArgs),
    /// Simulate and reconstruct an image.
    Reconstruct(CommonArgs),
    /// Full run: simulate, calibrate, reconstruct, report.
    Pipeline(CommonArgs),
    /// Run the dual-radar position synchronizer and report grid quality.
    Sync(CommonArgs),
    /// Fit phase offset and range bias from a reference-reflector capture.
    Calibrate(CommonArgs),
    /// Check the plane-wave decomposition fidelity over a linear aperture.
    MspCheck(CommonArgs),
}

fn run(args: &CommonArgs, f: impl FnOnce(&config::RunConfig, &RunOptions) -> CliResult<()>) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.config)?;
    let cfg = config::parse_config(&text)?;
    let opts = RunOptions {
        seed: args.seed,
        out: args.out.clone(),
        format: args.format.as_deref().map(emit::Format::parse).transpose()?,
        oracle: args.oracle,
        dry_run: args.dry_run,
    };
    f(&cfg, &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => run(a, pipeline::cmd_simulate),
        Command::Reconstruct(a) => run(a, pipeline::cmd_reconstruct),
        Command::Pipeline(a) => run(a, pipeline::cmd_pipeline),
        Command::Sync(a) => run(a, pipeline::cmd_sync),
        Command::Calibrate(a) => run(a, pipeline::cmd_calibrate),
        Command::MspCheck(a) => run(a, pipeline::cmd_msp_check),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
