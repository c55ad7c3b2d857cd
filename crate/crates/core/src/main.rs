use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use conicpart::run::{exit_code, run, Command, RunConfig};
use conicpart::search::{CoverMode, DEFAULT_NODE_BUDGET};

/// Line partitions of the internal points of a conic in PG(2,q).
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// Characteristic of the field.
    #[arg(long)]
    p: u64,
    /// Extension degree; q = p^h.
    #[arg(long, default_value_t = 1)]
    h: u32,
    /// Monic modulus as comma-separated coefficients, constant term first.
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
    /// lemmas, construct, search, classify or full.
    #[arg(long, default_value = "full")]
    command: Command,
    /// exact or cover.
    #[arg(long, default_value = "exact")]
    mode: CoverMode,
    /// Solution size (required in cover mode).
    #[arg(long)]
    size: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = RunConfig {
        p: args.p,
        h: args.h,
        modulus: args.modulus,
        command: args.command,
        mode: args.mode,
        size: args.size,
        out: args.out,
        node_budget: args.node_budget,
        threads: args.threads,
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            log::error!("{e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    for c in report.failures() {
        log::warn!("check {} failed: expected {}, observed {}", c.name, c.expected, c.observed);
    }
    let json = report.to_json();
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                log::error!("cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    ExitCode::from(if report.passed() { 0 } else { 1 })
}
