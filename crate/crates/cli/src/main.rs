use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twistlab_cli::commands::{self, Family, HamiltonianCmd, EXIT_USAGE};
use twistlab_cli::{CliResult, RunConfig};

#[derive(Parser)]
#[command(name = "twistlab", version, about = "Verification runs for twisted lattice fields")]
struct Cli {
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// suites to run (repeatable)
    #[arg(long = "suite", global = true, num_args = 1..)]
    suites: Vec<String>,
    /// tolerance override KEY=VALUE, KEY is suite.check, check or suite
    #[arg(long = "tol", global = true, num_args = 1..)]
    tols: Vec<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// run verification suites and write report.json and summary.txt
    Verify,
    /// evaluate a charged state on a family of test functions
    State {
        #[arg(long, value_enum, default_value = "scaled")]
        family: Family,
        #[arg(long, default_value_t = 9)]
        count: usize,
    },
    /// m-point functions against the pairing sum
    Npoint {
        #[arg(long, default_value_t = 4)]
        max_m: usize,
    },
    Hamiltonian {
        #[command(subcommand)]
        cmd: HamiltonianCmd,
    },
    /// Coulomb-gauge suite plus the transverse basis
    Coulomb,
}

fn config(cli: &Cli) -> CliResult<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if !cli.suites.is_empty() {
        cfg.suites = cli.suites.clone();
    }
    for t in &cli.tols {
        cfg.set_tolerance(t)?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> CliResult<i32> {
    let cfg = config(cli)?;
    match cli.cmd {
        Cmd::Verify => commands::verify(&cfg),
        Cmd::State { family, count } => commands::state(&cfg, family, count),
        Cmd::Npoint { max_m } => commands::npoint(&cfg, max_m),
        Cmd::Hamiltonian { cmd } => commands::hamiltonian(&cfg, cmd),
        Cmd::Coulomb => commands::coulomb(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
