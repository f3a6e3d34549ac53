use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use ordlab_cli::{canonical_json, parse_config, run, status_of, RunOptions, Status};

/// Compute with left-invariant orders on groups.
#[derive(Parser, Debug)]
#[command(name = "ordlab", version)]
struct Cli {
    /// Task configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Report path; defaults to the config's `output`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized tasks, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Also propagate through products landing in ball(2r).
    #[arg(long)]
    strong_propagation: bool,
    /// Largest ball the group may build.
    #[arg(long, env = "ORDLAB_BALL_CAP", hide = true)]
    ball_cap: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage.code() as u8 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(status_of(&e).code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> anyhow::Result<Status> {
    let text = std::fs::read_to_string(&cli.config)
        .with_context(|| format!("reading {}", cli.config.display()))
        .map_err(|e| ordlab_cli::ConfigError {
            path: ".".into(),
            message: format!("{e:#}"),
        })?;
    let config = parse_config(&text)?;
    if cli.workers > 1 {
        // ignore failure: the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global();
    }
    let opts = RunOptions {
        seed: cli.seed,
        workers: cli.workers.max(1),
        strong_propagation: cli.strong_propagation,
        ball_cap: cli.ball_cap,
    };
    let report = run(&config, &opts)?;
    let json = canonical_json(&report)?;
    match cli.out.as_ref().or(config.output.as_ref()) {
        Some(path) => std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{json}"),
    }
    Ok(report.status())
}
