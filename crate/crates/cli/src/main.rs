//! `radsub` command-line driver.
//!
//! `radsub run` integrates one problem and writes snapshots;
//! `radsub converge` runs a resolution ladder and writes error tables.
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure.

mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use radsub::analysis::run_convergence;
use radsub::timestepper::Solver;

use config::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] radsub::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Solver(e) if e.is_numerical() => 3,
            CliError::Solver(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "radsub", version, about = "Radiation subsystem solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one problem at one resolution and write snapshots.
    Run(Overrides),
    /// Run a resolution ladder and tabulate errors and observed orders.
    Converge(Overrides),
}

/// Command-line values take precedence over the config file.
#[derive(Args, Debug)]
struct Overrides {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    ncell: Option<usize>,
    #[arg(long)]
    cfl: Option<f64>,
    /// hyperbolic or parabolic
    #[arg(long)]
    dt_mode: Option<String>,
    #[arg(long)]
    tfinal: Option<f64>,
    /// Comma-separated snapshot times.
    #[arg(long)]
    outputs: Option<String>,
    /// effective or plain
    #[arg(long)]
    wave_speeds: Option<String>,
    /// plm or pcm
    #[arg(long)]
    reconstruction: Option<String>,
    /// conserved or characteristic
    #[arg(long)]
    limiting: Option<String>,
    /// outflow or periodic
    #[arg(long)]
    bc: Option<String>,
    /// Comma-separated cell counts.
    #[arg(long)]
    resolutions: Option<String>,
    /// analytic or self-similar
    #[arg(long)]
    comparison: Option<String>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

impl Overrides {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut map = match &self.config {
            Some(path) => config::read_config(path)?,
            None => BTreeMap::new(),
        };
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                map.insert(k.to_string(), v);
            }
        };
        set("problem", self.problem.clone());
        set("ncell", self.ncell.map(|v| v.to_string()));
        set("cfl", self.cfl.map(|v| v.to_string()));
        set("dt_mode", self.dt_mode.clone());
        set("t_final", self.tfinal.map(|v| v.to_string()));
        set("outputs", self.outputs.clone());
        set("wave_speeds", self.wave_speeds.clone());
        set("reconstruction", self.reconstruction.clone());
        set("limiting", self.limiting.clone());
        set("bc", self.bc.clone());
        set("resolutions", self.resolutions.clone());
        set("comparison", self.comparison.clone());
        set("out_dir", self.out_dir.as_ref().map(|p| p.display().to_string()));
        Settings::from_map(&map)
    }
}

fn run_single(s: &Settings) -> Result<(), CliError> {
    let start = Instant::now();
    let (grid, p) = s.spec.init(s.ncell)?;
    let mut solver = Solver::new(grid, p.clone(), s.opts)?;
    let dir = s.problem_dir().join(s.ncell.to_string());

    for (k, &t) in s.outputs.iter().enumerate() {
        solver.advance_to(t, s.ctrl.cfl, s.ctrl.mode)?;
        let reference = if s.spec.has_reference() {
            Some(s.spec.reference_on(solver.grid(), t)?)
        } else {
            None
        };
        let csv = output::snapshot_csv(
            s,
            &p,
            solver.grid(),
            solver.time(),
            solver.diagnostics().n_steps(),
            reference.as_deref(),
        );
        output::write_file(&dir.join(format!("snapshot_{k}.csv")), &csv)?;
    }

    let summary = output::summary_text(
        &s.spec,
        solver.time(),
        solver.diagnostics(),
        start.elapsed().as_secs_f64(),
    );
    output::write_file(&dir.join("summary.txt"), &summary)?;
    print!("{summary}");
    Ok(())
}

fn run_converge(s: &Settings) -> Result<(), CliError> {
    let report = run_convergence(&s.spec, &s.resolutions, s.comparison, &s.ctrl, &s.opts)?;
    let dir = s.problem_dir();
    output::write_file(&dir.join("convergence.csv"), &report.to_csv())?;
    let table = report.render_table();
    output::write_file(&dir.join("convergence.txt"), &table)?;
    print!("{table}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(o) => o.settings().and_then(|s| run_single(&s)),
        Command::Converge(o) => o.settings().and_then(|s| run_converge(&s)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radsub: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
