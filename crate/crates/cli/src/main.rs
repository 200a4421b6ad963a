//! Batch front door for the spectral shift laboratory. Three commands:
//! `run` executes the task list of a config file and writes one JSON report
//! per task plus CSV curves, `tables` dumps the symbolic coefficient tables,
//! `plot` emits plot-ready CSV data. Exit status: 0 all pass, 1 at least
//! one failed check, 2 usage or configuration error. Relative output
//! directories can be rerooted with the `SSF_LAB_OUT` environment variable.

mod config;
mod plot;
mod report;
mod tasks;

use clap::{Parser, Subcommand};
use config::RunConfig;
use plot::PlotKind;
use report::Emitter;
use ssf_core::invariants::{heat_invariant_closed, xn, MAX_HEAT, MAX_XN};
use ssf_core::potential::Potential;
use std::path::PathBuf;
use std::process::ExitCode;
use tasks::TaskError;

#[derive(Parser)]
#[command(name = "ssf-lab", version, about = "spectral shift function laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute the tasks of a config file and write reports.
    Run { config: PathBuf },
    /// Dump the symbolic invariant and operator tables as text files.
    Tables {
        /// Space dimension (1, 2 or 3).
        #[arg(long)]
        dim: usize,
        /// Highest order to emit.
        #[arg(long)]
        max_n: u32,
        /// Output directory (default `tables`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute one curve of a config and write it as plot-ready CSV.
    Plot {
        #[arg(value_enum)]
        kind: PlotKind,
        config: PathBuf,
    },
}

enum Outcome {
    AllPassed,
    SomeFailed,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(Outcome::AllPassed) => ExitCode::SUCCESS,
        Ok(Outcome::SomeFailed) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<Outcome, String> {
    match cli.cmd {
        Cmd::Run { config } => run_command(&config),
        Cmd::Tables { dim, max_n, out } => tables_command(dim, max_n, out),
        Cmd::Plot { kind, config } => plot_command(kind, &config),
    }
}

fn load(config_path: &std::path::Path) -> Result<(RunConfig, Potential, Emitter), String> {
    let (cfg, bytes) = RunConfig::load(config_path)?;
    let p = Potential::build(cfg.potential.clone()).map_err(|e| e.to_string())?;
    let em = Emitter::new(&cfg.output_dir(), cfg.output.precision, &bytes)?;
    Ok((cfg, p, em))
}

fn run_command(config_path: &std::path::Path) -> Result<Outcome, String> {
    let (cfg, p, em) = load(config_path)?;
    if cfg.tasks.is_empty() {
        return Err("config has no tasks".into());
    }
    println!("config {} (sha256 {})", config_path.display(), em.hash());
    let mut all = true;
    for (slot, (position, task)) in cfg.scheduled_tasks().iter().enumerate() {
        let pass = match tasks::run_task(&p, slot + 1, task, &em) {
            Ok(pass) => pass,
            Err(TaskError::Usage(msg)) => {
                return Err(format!("task {position} ({}): {msg}", task.kind_name()))
            }
            Err(TaskError::Io(msg)) => return Err(msg),
        };
        all &= pass;
        println!(
            "task {position} ({}): {}",
            task.kind_name(),
            if pass { "pass" } else { "FAIL" }
        );
    }
    println!(
        "reports in {} — {}",
        em.dir().display(),
        if all { "all tasks passed" } else { "some tasks failed" }
    );
    Ok(if all { Outcome::AllPassed } else { Outcome::SomeFailed })
}

fn tables_command(dim: usize, max_n: u32, out: Option<PathBuf>) -> Result<Outcome, String> {
    if !(1..=3).contains(&dim) {
        return Err(format!("dimension {dim} outside 1..=3"));
    }
    if max_n == 0 || max_n > MAX_HEAT.max(MAX_XN) {
        return Err(format!(
            "order {max_n} outside 1..={}",
            MAX_HEAT.max(MAX_XN)
        ));
    }
    let dir = out.unwrap_or_else(|| PathBuf::from("tables"));
    let dir = match std::env::var_os("SSF_LAB_OUT") {
        Some(root) if dir.is_relative() => PathBuf::from(root).join(dir),
        _ => dir,
    };
    std::fs::create_dir_all(&dir)
        .map_err(|e| format!("cannot create output directory {}: {e}", dir.display()))?;
    for n in 1..=max_n.min(MAX_HEAT) {
        let g = heat_invariant_closed(n, dim).map_err(|e| e.to_string())?;
        let path = dir.join(format!("heat_g{n}_d{dim}.txt"));
        std::fs::write(&path, g.emit() + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("{}", path.display());
    }
    for n in 1..=max_n.min(MAX_XN) {
        let op = xn(n, dim).map_err(|e| e.to_string())?;
        let path = dir.join(format!("x{n}_d{dim}.txt"));
        std::fs::write(&path, op.emit() + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(Outcome::AllPassed)
}

fn plot_command(kind: PlotKind, config_path: &std::path::Path) -> Result<Outcome, String> {
    let (cfg, p, em) = load(config_path)?;
    let path = plot::emit(kind, &cfg, &p, &em)?;
    println!("{path}");
    Ok(Outcome::AllPassed)
}
