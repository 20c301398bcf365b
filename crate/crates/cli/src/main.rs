//! `torwave`: command line driver for the lattice scans, paradifferential audits and model runs.

mod commands;
mod config;
mod error;
mod manifest;
mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use commands::Outcome;
use config::*;
use error::CliError;
use manifest::{Artifacts, Manifest};

#[derive(Parser, Debug)]
#[command(name = "torwave", version, about = "Gravity-capillary wave experiments on the torus")]
struct Cli {
    /// TOML file with subcommand settings; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: runs/<subcommand>)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the column schema of every output and exit
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Three-wave small-divisor census
    Scan3(Scan3Args),
    /// Four-wave census
    Scan4(Scan4Args),
    /// Slope gaps along a lattice segment
    Collinear(CollinearArgs),
    /// Root and sublevel interval of the three-leg profile
    Lemma1(Lemma1Args),
    /// Exceptional-set measure bound over a range of j
    Measure(MeasureArgs),
    /// Composition, adjoint and paralinearization checks
    ParadiffAudit(ParadiffArgs),
    /// Symbol expansions and good-variable scaling
    Symbols(SymbolsArgs),
    /// Integrate the model from random data
    Simulate(SimulateArgs),
    /// Doubling times across amplitudes
    Sweep(SweepArgs),
    /// Energy identity audit along a trajectory
    EnergyAudit(EnergyAuditArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Scan3(_) => "scan3",
            Command::Scan4(_) => "scan4",
            Command::Collinear(_) => "collinear",
            Command::Lemma1(_) => "lemma1",
            Command::Measure(_) => "measure",
            Command::ParadiffAudit(_) => "paradiff-audit",
            Command::Symbols(_) => "symbols",
            Command::Simulate(_) => "simulate",
            Command::Sweep(_) => "sweep",
            Command::EnergyAudit(_) => "energy-audit",
        }
    }
}

type Runner<C> = fn(&C, &mut Artifacts) -> Result<Outcome, CliError>;

fn execute<C: Serialize>(
    name: &str,
    cfg: C,
    dir: &Path,
    run: Runner<C>,
) -> Result<Manifest, CliError> {
    let start = Instant::now();
    let mut out = Artifacts::new(dir)?;
    let outcome = run(&cfg, &mut out)?;
    std::fs::write(dir.join("config.toml"), to_toml(&cfg)?)?;
    let mut knobs = outcome.knobs;
    knobs.entry("chi_exponent").or_insert(Value::from(torwave::paradiff::ParadiffConfig::default().chi_exponent));
    knobs.entry("energy_constant").or_insert(Value::from(torwave::energy::energy_constant::<f64>()));
    knobs.entry("sobolev_index").or_insert(Value::from(torwave::model::DEFAULT_SOBOLEV_INDEX));
    let status = if outcome.abort_reason.is_some() { "aborted" } else { "ok" };
    out.finish(Manifest {
        tool: "torwave".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: name.into(),
        config: serde_json::to_value(&cfg)?,
        knobs,
        outputs: Vec::new(),
        status: status.into(),
        abort_reason: outcome.abort_reason,
        threads: rayon::current_num_threads(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

fn dispatch(cli: Cli) -> Result<Manifest, CliError> {
    let Some(command) = cli.command else {
        let _ = Cli::command().print_help();
        return Err(CliError::Config("no subcommand given".into()));
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let name = command.name();
    let dir = cli.out.unwrap_or_else(|| PathBuf::from("runs").join(name));
    let file = cli.config.as_deref();
    match command {
        Command::Scan3(a) => execute(name, a.resolve(file)?, &dir, commands::scan3),
        Command::Scan4(a) => execute(name, a.resolve(file)?, &dir, commands::scan4),
        Command::Collinear(a) => execute(name, a.resolve(file)?, &dir, commands::collinear),
        Command::Lemma1(a) => execute(name, a.resolve(file)?, &dir, commands::lemma1),
        Command::Measure(a) => execute(name, a.resolve(file)?, &dir, commands::measure),
        Command::ParadiffAudit(a) => execute(name, a.resolve(file)?, &dir, commands::paradiff_audit),
        Command::Symbols(a) => execute(name, a.resolve(file)?, &dir, commands::symbols),
        Command::Simulate(a) => execute(name, a.resolve(file)?, &dir, commands::simulate),
        Command::Sweep(a) => execute(name, a.resolve(file)?, &dir, commands::sweep),
        Command::EnergyAudit(a) => execute(name, a.resolve(file)?, &dir, commands::energy_audit),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        println!("{}", serde_json::to_string_pretty(&schema::schema()).expect("static schema"));
        return ExitCode::SUCCESS;
    }
    match dispatch(cli) {
        Ok(m) if m.abort_reason.is_some() => {
            eprintln!("run aborted: {}", m.abort_reason.unwrap_or_default());
            ExitCode::from(4)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
