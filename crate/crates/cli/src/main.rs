use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use treegreen::commands::{self, CommandError, CompareMode, CompareOptions, Outcome, Targets};
use treegreen::config::ProblemConfig;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    /// Check the configuration and the nondegeneracy of the problem.
    Validate,
    /// Evaluate G(x, y) at a fixed x over a set of y.
    Green,
    /// Solve the boundary value problem with the configured right-hand side.
    Solve,
    /// Cross-check the tree formula against another kernel.
    Compare,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Oracle,
    Pokornyi,
}

/// Green's functions of Sturm-Liouville operators on metric trees.
#[derive(Debug, Parser)]
#[command(name = "treegreen", version)]
struct Cli {
    command: Command,

    /// TOML problem file; read from stdin when omitted.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Source point x for `green`.
    #[arg(long, value_name = "EDGE:POS")]
    at: Option<String>,

    /// Single evaluation point y for `green`, instead of a grid.
    #[arg(long, value_name = "EDGE:POS")]
    y: Option<String>,

    /// Grid size. Interior points per edge for `green` (default 9), points
    /// per edge including ends for `solve` (default 11), and oracle
    /// intervals per edge for `compare` (default 2000).
    #[arg(long, value_name = "N")]
    grid: Option<usize>,

    /// Reference for `compare`.
    #[arg(long, value_enum, default_value = "oracle")]
    mode: Mode,

    /// Interior sample points per edge for `compare`.
    #[arg(long, value_name = "N", default_value_t = 7)]
    samples: usize,

    /// Override the comparison tolerance.
    #[arg(long, value_name = "TOL")]
    tol: Option<f64>,

    /// Print the parsed configuration as TOML and exit.
    #[arg(long)]
    dump_config: bool,
}

fn read_config(path: Option<&PathBuf>) -> Result<String, CommandError> {
    let io_err = |e: io::Error| CommandError { outcome: Outcome::InvalidConfig, message: e.to_string() };
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| CommandError { outcome: Outcome::InvalidConfig, message: format!("{}: {e}", p.display()) }),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(io_err)?;
            Ok(s)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, Outcome), CommandError> {
    let text = read_config(cli.config.as_ref())?;
    let cfg = ProblemConfig::parse(&text)?;
    if cli.dump_config {
        return Ok((cfg.to_toml(), Outcome::Ok));
    }
    let problem = cfg.build()?;
    match cli.command {
        Command::Validate => commands::validate(&problem),
        Command::Green => {
            let at = cli.at.as_deref().ok_or_else(|| CommandError {
                outcome: Outcome::InvalidConfig,
                message: "green needs --at EDGE:POS".into(),
            })?;
            let targets = match &cli.y {
                Some(y) => Targets::Point(y.clone()),
                None => Targets::Grid(cli.grid.unwrap_or(9)),
            };
            commands::green(&problem, at, &targets)
        }
        Command::Solve => commands::solve(&problem, cli.grid.unwrap_or(11)),
        Command::Compare => commands::compare(
            &problem,
            &CompareOptions {
                mode: match cli.mode {
                    Mode::Oracle => CompareMode::Oracle,
                    Mode::Pokornyi => CompareMode::Pokornyi,
                },
                resolution: cli.grid.unwrap_or(2000),
                samples: cli.samples,
                tolerance: cli.tol,
            },
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Outcome::InvalidConfig.code() } else { 0 });
        }
    };
    match run(&cli) {
        Ok((out, outcome)) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            if outcome != Outcome::Ok {
                eprintln!("treegreen: {}", describe(outcome));
            }
            ExitCode::from(outcome.code())
        }
        Err(e) => {
            eprintln!("treegreen: {}", e.message);
            ExitCode::from(e.outcome.code())
        }
    }
}

fn describe(outcome: Outcome) -> &'static str {
    match outcome {
        Outcome::Degenerate => "problem is degenerate",
        Outcome::ComparisonFailed => "comparison exceeded tolerance",
        _ => "failed",
    }
}
