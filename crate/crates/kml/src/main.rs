use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kml::config::{self, RawConfig};
use kml::report::{emit_csv, emit_json, write_report};
use kml::suites::run_suite;

#[derive(Parser)]
#[command(name = "kml", about = "Kernel multiplier laboratory suite runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a verification suite and emit a report
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Suite name: rkhs-core, hilbert-multipliers, sip-core, rkbs-core,
    /// banach-multipliers, or all
    #[arg(long)]
    suite: Option<String>,
    /// Master seed; every residual is a deterministic function of it
    #[arg(long)]
    seed: Option<u64>,
    /// Instances per check
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated exponent grid, each in (1, inf)
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    /// Restrict kernel-grid checks to one variant
    #[arg(long)]
    kernel: Option<String>,
    /// Base point count for random fixtures
    #[arg(long)]
    points: Option<usize>,
    /// Feature dimension for Banach models
    #[arg(long)]
    features: Option<usize>,
    /// Override every check's default tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Report destination; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or csv
    #[arg(long)]
    format: Option<String>,
    /// JSON config file; its fields override the flags above
    #[arg(long)]
    config: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let Command::Run(args) = cli.command;
    match run(args) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(args: RunArgs) -> Result<bool, String> {
    if let Ok(threads) = std::env::var("KML_THREADS") {
        let n: usize = threads
            .parse()
            .map_err(|_| format!("KML_THREADS must be a positive integer, got {threads:?}"))?;
        if n == 0 {
            return Err("KML_THREADS must be a positive integer".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| format!("thread pool: {e}"))?;
    }

    let flag_raw = RawConfig {
        degree: None,
        features: args.features,
        format: args.format,
        gamma: None,
        kernel: args.kernel,
        offset: None,
        out: args.out.map(|p| p.to_string_lossy().into_owned()),
        p: args.p,
        points: args.points,
        seed: args.seed,
        suite: args.suite,
        tol: args.tol,
        trials: args.trials,
    };
    let merged = match args.config {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let file_raw: RawConfig =
                serde_json::from_str(&text).map_err(|e| format!("config parse error: {e}"))?;
            config::overlay(flag_raw, file_raw)
        }
        None => flag_raw,
    };
    let cfg = config::finalize(merged)?;

    let report = run_suite(&cfg);
    match &cfg.out {
        Some(path) => write_report(&report, &cfg.format, path)?,
        None => {
            let body = match cfg.format.as_str() {
                "csv" => emit_csv(&report),
                _ => emit_json(&report),
            };
            print!("{body}");
        }
    }
    Ok(report.all_pass())
}
