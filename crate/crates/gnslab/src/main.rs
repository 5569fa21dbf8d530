use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use gnslab::exec::run_scenario;
use gnslab::random::DEFAULT_SEED;
use gnslab::report::{paint, RunReport, Status, REPORT_SCHEMA};
use gnslab::scenario::{load, validate, BackendChoice, LoadError};
use gnslab::suites::{run_suite, SUITES};
use gnslab_core::{Complex64, Exact};
use serde_json::json;

#[derive(Parser)]
#[command(name = "gnslab", version, about = "GNS constructions and their checks on finite-dimensional *-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Execute a scenario and report every command.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario backend; scalars are converted.
        #[arg(long, value_enum)]
        backend: Option<BackendChoice>,
        /// Use this value for every tolerance.
        #[arg(long, value_parser = positive)]
        tol: Option<f64>,
        /// Divide reported distributions by phi(1).
        #[arg(long)]
        normalize: bool,
    },
    /// Check references, shapes and scalars without executing.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        backend: Option<BackendChoice>,
    },
    /// Run the randomized property suites.
    Suite {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run a single suite.
        #[arg(long, value_parser = PossibleValuesParser::new(SUITES))]
        only: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 => Ok(x),
        _ => Err(format!("{s:?} is not a nonnegative number")),
    }
}

const USAGE: u8 = 2;

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    std::fs::write(path, text + "\n").map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn load_or_report(path: &Path) -> Result<gnslab::scenario::Scenario, ExitCode> {
    load(&path.to_string_lossy()).map_err(|e: LoadError| {
        eprintln!("gnslab: {e}");
        ExitCode::from(USAGE)
    })
}

fn run(
    path: &Path,
    out: Option<&Path>,
    backend: Option<BackendChoice>,
    tol: Option<f64>,
    normalize: bool,
) -> Result<ExitCode, ExitCode> {
    let sc = load_or_report(path)?;
    let lenient = backend.is_some_and(|b| b != sc.backend);
    let backend = backend.unwrap_or(sc.backend);
    let diagnostics = validate(&sc, backend, lenient);
    if !diagnostics.is_empty() {
        for d in &diagnostics {
            eprintln!("gnslab: {d}");
        }
        return Err(ExitCode::from(USAGE));
    }
    let tol = sc.tolerances.resolve(tol);
    let report: RunReport = match backend {
        BackendChoice::Exact => run_scenario::<Exact>(&sc, &tol, lenient, normalize),
        BackendChoice::Float => run_scenario::<Complex64>(&sc, &tol, lenient, normalize),
    };
    if let Some(out) = out {
        write_json(out, &report).map_err(|e| {
            eprintln!("gnslab: {e}");
            ExitCode::from(USAGE)
        })?;
    }
    print!("{}", report.summary());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn check(path: &Path, backend: Option<BackendChoice>) -> Result<ExitCode, ExitCode> {
    let sc = load_or_report(path)?;
    let lenient = backend.is_some_and(|b| b != sc.backend);
    let diagnostics = validate(&sc, backend.unwrap_or(sc.backend), lenient);
    for d in &diagnostics {
        println!("{d}");
    }
    if diagnostics.is_empty() {
        println!("ok: {} declarations, {} commands", sc.declarations.len(), sc.commands.len());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn suite(seed: u64, only: Option<&str>, out: Option<&Path>) -> Result<ExitCode, ExitCode> {
    let names: Vec<&str> = match only {
        Some(n) => vec![n],
        None => SUITES.to_vec(),
    };
    let mut outcomes = Vec::new();
    for name in names {
        let o = run_suite(name, seed).expect("names come from SUITES");
        let status = if o.ok() { Status::Pass } else { Status::Fail };
        println!(
            "{} {}: {}/{} passed ({:.2?})",
            paint(status),
            o.name,
            o.passed,
            o.instances,
            o.elapsed
        );
        for f in &o.failures {
            println!("    {f}");
        }
        outcomes.push(o);
    }
    let ok = outcomes.iter().all(|o| o.ok());
    if let Some(out) = out {
        let report = json!({
            "schema": REPORT_SCHEMA,
            "kind": "suite",
            "seed": seed,
            "status": if ok { Status::Pass } else { Status::Fail },
            "suites": outcomes,
        });
        write_json(out, &report).map_err(|e| {
            eprintln!("gnslab: {e}");
            ExitCode::from(USAGE)
        })?;
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Run {
            scenario,
            out,
            backend,
            tol,
            normalize,
        } => run(scenario, out.as_deref(), *backend, *tol, *normalize),
        Cmd::Validate { scenario, backend } => check(scenario, *backend),
        Cmd::Suite { seed, only, out } => suite(*seed, only.as_deref(), out.as_deref()),
    };
    result.unwrap_or_else(|code| code)
}
