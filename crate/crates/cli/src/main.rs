//! Command-line interface for computing rate-distortion-cost tradeoff
//! curves with action-dependent side information.
//!
//! Exit codes: 0 on success, 1 on validation failure, 2 on input error.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use vendinfo::SolverConfig;
use vendinfo_cli::doc::{bundled, ProblemDocument};
use vendinfo_cli::figures::{figure_command, Figure};
use vendinfo_cli::solve::solve_document;
use vendinfo_cli::validate::run_all;

#[derive(Parser)]
#[command(
    name = "vendinfo",
    version,
    about = "Rate-distortion-cost tradeoffs for source coding with action-dependent side information"
)]
struct Cli {
    /// Random seed for the multi-start solver.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of solver restarts per minimization.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Per-coordinate resolution of the exhaustive grid oracle.
    #[arg(long, global = true)]
    grid_resolution: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig3,
    Fig4,
    Fig5,
    Fig7,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Figure {
        match f {
            FigureArg::Fig3 => Figure::Fig3,
            FigureArg::Fig4 => Figure::Fig4,
            FigureArg::Fig5 => Figure::Fig5,
            FigureArg::Fig7 => Figure::Fig7,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a problem document (a file path or a bundled instance name).
    Solve {
        /// Path to a JSON problem document, or one of the bundled names
        /// (zs_lossless, zs_cost, ternary, observe_or_not_identity,
        /// observe_or_not_erasure, gaussian_unit, markov_bsc, indirect_bsc).
        file: String,
        /// Distortion grid override: comma-separated values, or
        /// `start:stop:count` for a uniform grid.
        #[arg(long)]
        d: Option<String>,
        /// Cost grid override, same syntax as --d.
        #[arg(long)]
        c: Option<String>,
        /// Write the emission here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Emit one of the reference curves.
    Figure {
        #[arg(value_enum)]
        which: FigureArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run the acceptance suite and report pass/fail per criterion.
    Validate {
        /// Trim randomized-trial counts for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
}

fn parse_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() == 3 {
        let start: f64 = parts[0].parse().map_err(|_| format!("bad grid start `{}`", parts[0]))?;
        let stop: f64 = parts[1].parse().map_err(|_| format!("bad grid stop `{}`", parts[1]))?;
        let count: usize = parts[2].parse().map_err(|_| format!("bad grid count `{}`", parts[2]))?;
        if count < 2 {
            return Err("grid count must be at least 2".into());
        }
        return Ok((0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect());
    }
    text.split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("bad grid value `{p}`")))
        .collect()
}

fn load_document(file: &str) -> Result<ProblemDocument, String> {
    let text = if std::path::Path::new(file).exists() {
        std::fs::read_to_string(file).map_err(|e| format!("cannot read `{file}`: {e}"))?
    } else if let Some(text) = bundled(file) {
        text.to_string()
    } else {
        return Err(format!("`{file}` is neither a file nor a bundled instance name"));
    };
    ProblemDocument::from_json(&text)
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write `{}`: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let mut cfg = SolverConfig::default();
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(r) = cli.restarts {
        cfg.restarts = r;
    }
    if let Some(g) = cli.grid_resolution {
        cfg.grid_resolution = g;
    }
    match cli.cmd {
        Cmd::Solve {
            file,
            d,
            c,
            out,
            format,
        } => {
            let mut doc = load_document(&file)?;
            if let Some(text) = d {
                doc.d = Some(parse_grid(&text)?);
            }
            if let Some(text) = c {
                doc.c = Some(parse_grid(&text)?);
            }
            let emission = solve_document(&doc, &cfg)?;
            write_output(&emission.render(format == Format::Json), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Figure { which, out, format } => {
            let emission = figure_command(which.into(), &cfg)?;
            write_output(&emission.render(format == Format::Json), out.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Validate { quick } => {
            let results = run_all(quick, &cfg);
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.line());
                all_pass &= r.pass;
            }
            if all_pass {
                println!("all {} criteria passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAILURES present");
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
