mod checks;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use alc_core::{Families, ModelName, SearchOptions};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use render::{Format, Output};

/// Reproduces the ALC game results: classical optimum, quantum protocol,
/// square-bit tables and no-go searches, and the toy-bit protocol.
#[derive(Parser, Debug)]
#[command(name = "alc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Include wall-clock times (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pure classical strategies.
    #[command(subcommand)]
    Classical(ClassicalCmd),
    /// Qubit protocols.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Square-bit tables and strategy search.
    #[command(subcommand)]
    Squarebit(SquarebitCmd),
    /// Toy-bit protocol.
    #[command(subcommand)]
    Spekkens(SpekkensCmd),
    /// Consolidated reproduction report.
    #[command(subcommand)]
    Paper(PaperCmd),
}

#[derive(Subcommand, Debug)]
enum ClassicalCmd {
    /// Exhaustive search over all 4096 pure strategies.
    Search(CheckArgs),
}

#[derive(Subcommand, Debug)]
enum QuantumCmd {
    /// Entangled Bell-state protocol.
    Verify,
    /// Seesaw search over unentangled qubit strategies.
    Seesaw {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        iterations: u64,
        #[command(flatten)]
        check: CheckArgs,
    },
}

#[derive(Subcommand, Debug)]
enum SquarebitCmd {
    /// Full 24x24 table of Tr[E_i^T Omega_j].
    Table3(CheckArgs),
    /// Factorized 16x16 block.
    Table4(CheckArgs),
    /// Images of Omega16 under local D8 actions.
    Table5(CheckArgs),
    /// Exhaustive search for a perfect strategy.
    Search(SearchArgs),
}

#[derive(Subcommand, Debug)]
enum SpekkensCmd {
    /// Composition table and protocol success.
    Verify,
}

#[derive(Subcommand, Debug)]
enum PaperCmd {
    /// Runs every reproduction and property suite.
    Report(EngineArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// Compare with the embedded reference data; exit 1 on mismatch.
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct EngineArgs {
    /// Worker threads for the search.
    #[arg(long, env = "ALC_JOBS", value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fraction of collision-pruned families re-checked by LP.
    #[arg(long, default_value_t = 0.01, value_parser = parse_rate)]
    audit_rate: f64,
    /// Skip the best-value computation.
    #[arg(long)]
    no_best_value: bool,
}

impl EngineArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            jobs: self.jobs.map(|j| j as usize),
            audit_rate: self.audit_rate,
            seed: self.seed,
            best_value: !self.no_best_value,
        }
    }
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// pr, hs, hybrid-a, hybrid-b, frozen-16..frozen-23 or classical-bit.
    #[arg(long, value_parser = parse_model)]
    model: ModelName,
    #[arg(long, default_value_t = 4, value_parser = parse_n_strings)]
    n_strings: usize,
    #[arg(long, default_value = "both", value_parser = parse_families)]
    families: Families,
    #[command(flatten)]
    engine: EngineArgs,
    #[command(flatten)]
    check: CheckArgs,
}

fn parse_model(s: &str) -> Result<ModelName, String> {
    s.parse().map_err(|e: alc_core::error::AlcError| e.to_string())
}

fn parse_families(s: &str) -> Result<Families, String> {
    s.parse().map_err(|e: alc_core::error::AlcError| e.to_string())
}

fn parse_n_strings(s: &str) -> Result<usize, String> {
    match s {
        "2" => Ok(2),
        "4" => Ok(4),
        _ => Err(format!("`{s}` is not 2 or 4")),
    }
}

fn parse_rate(s: &str) -> Result<f64, String> {
    let r: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&r) {
        Ok(r)
    } else {
        Err(format!("audit rate {r} outside [0, 1]"))
    }
}

/// Runs the command; the flag says whether a failed check sets the exit code.
fn execute(cli: &Cli) -> Result<(Output, bool)> {
    use Command::*;
    Ok(match &cli.command {
        Classical(ClassicalCmd::Search(c)) => {
            let r = checks::classical()?;
            (Output::new(&r, None, r.passed)?, c.check)
        }
        Quantum(QuantumCmd::Verify) => {
            let r = checks::quantum();
            (Output::new(&r, None, r.passed)?, true)
        }
        Quantum(QuantumCmd::Seesaw {
            seed,
            restarts,
            iterations,
            check,
        }) => {
            let r = checks::seesaw(*seed, *restarts as usize, *iterations as usize)?;
            (Output::new(&r, None, r.passed)?, check.check)
        }
        Squarebit(SquarebitCmd::Table3(c)) => {
            let r = checks::table3();
            (Output::new(&r, Some(r.base.grid()), r.base.passed)?, c.check)
        }
        Squarebit(SquarebitCmd::Table4(c)) => {
            let r = checks::table4();
            (Output::new(&r, Some(r.grid()), r.passed)?, c.check)
        }
        Squarebit(SquarebitCmd::Table5(c)) => {
            let r = checks::table5()?;
            (Output::new(&r, Some(r.grid()), r.passed)?, c.check)
        }
        Squarebit(SquarebitCmd::Search(a)) => {
            let r = checks::search(a.model, a.n_strings, a.families, &a.engine.options(), cli.timing)?;
            (Output::new(&r, None, r.passed)?, a.check.check)
        }
        Spekkens(SpekkensCmd::Verify) => {
            let r = checks::spekkens()?;
            (Output::new(&r, None, r.passed)?, true)
        }
        Paper(PaperCmd::Report(e)) => {
            let r = checks::paper_report(&e.options(), cli.timing)?;
            (Output::new(&r, None, r.passed)?, true)
        }
    })
}

fn run(cli: &Cli) -> Result<bool> {
    let (out, enforce) = execute(cli)?;
    let text = out.render(cli.format)?;
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if enforce && !out.passed {
        eprintln!("verification failed");
    }
    Ok(!enforce || out.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
