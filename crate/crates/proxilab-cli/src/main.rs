//! Scenario runner: executes builtin or file-based scenario configs,
//! lists the catalog, and renders saved reports as tables.
//!
//! Exit codes: 0 when the run is clean (or every witness was declared
//! expected), 1 when a check produced a witness the scenario did not
//! expect, 2 on config, parse, or I/O errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};

use proxilab::report::{emit_table, TableFormat};
use proxilab::scenario::{
    builtin_config, list_scenarios, parse_config, run_scenario, RunReport, ScenarioConfig,
};

#[derive(Parser)]
#[command(
    name = "proxilab",
    about = "Best-approximation scenario runner",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a builtin scenario by name, or a TOML config by path.
    Run {
        /// Builtin name (see `list`) or path to a scenario config.
        scenario: String,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Scale iteration and node budgets without touching tolerances.
        #[arg(long)]
        budget_scale: Option<f64>,
        /// Override the solver tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Report destination; defaults to the config's `output` field,
        /// then `<name>_report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List builtin scenarios with one-line descriptions.
    List,
    /// Render a saved report as a table.
    Emit {
        /// Path to a report JSON produced by `run`.
        report: PathBuf,
        /// Output format: delimited-text or structured-text.
        #[arg(long)]
        format: String,
        /// Table destination; defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load_config(scenario: &str) -> Result<ScenarioConfig> {
    match builtin_config(scenario) {
        Ok(cfg) => Ok(cfg),
        Err(proxilab::scenario::ConfigError::UnknownBuiltin(_)) if Path::new(scenario).exists() => {
            let text = fs::read_to_string(scenario)
                .with_context(|| format!("reading config '{scenario}'"))?;
            Ok(parse_config(&text)?)
        }
        Err(e) => Err(anyhow!(
            "'{scenario}' is neither a builtin scenario nor an existing config file: {e}"
        )),
    }
}

fn run(
    scenario: &str,
    seed: Option<u64>,
    budget_scale: Option<f64>,
    tolerance: Option<f64>,
    out: Option<PathBuf>,
) -> Result<ExitCode> {
    let mut cfg = load_config(scenario)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(b) = budget_scale {
        cfg.budget_scale = b;
    }
    if let Some(t) = tolerance {
        cfg.tolerance = t;
    }
    let report = run_scenario(&cfg)?;

    let path = out
        .or_else(|| cfg.output.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("{}_report.json", cfg.name)));
    let json = serde_json_string(&report)?;
    fs::write(&path, json).with_context(|| format!("writing report to {}", path.display()))?;

    for check in &report.checks {
        let status = if check.unexpected_witness {
            "UNEXPECTED WITNESS"
        } else if check.missing_expected_witness {
            "expected witness missing"
        } else if check.expect_witness {
            "witnessed as expected"
        } else {
            "ok"
        };
        println!("{:<22} {}", check.kind, status);
        for w in &check.witnesses {
            println!("    {w}");
        }
    }
    println!(
        "report: {} ({} checks, {} unexpected witnesses, {} ms)",
        path.display(),
        report.checks.len(),
        report.unexpected_witnesses,
        report.wall_clock_ms
    );
    if report.unexpected_witnesses > 0 {
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}

fn serde_json_string(report: &RunReport) -> Result<String> {
    let mut json = serde_json::to_string_pretty(report).context("serializing report")?;
    json.push('\n');
    Ok(json)
}

fn emit(report_path: &Path, format: &str, out: Option<PathBuf>) -> Result<ExitCode> {
    let format = TableFormat::parse(format).ok_or_else(|| {
        anyhow!("unknown format '{format}'; expected delimited-text or structured-text")
    })?;
    let text = fs::read_to_string(report_path)
        .with_context(|| format!("reading report '{}'", report_path.display()))?;
    let report: RunReport =
        serde_json::from_str(&text).context("report is not a valid run report")?;
    let table = emit_table(&report, format);
    match out {
        Some(path) => fs::write(&path, table)
            .with_context(|| format!("writing table to {}", path.display()))?,
        None => print!("{table}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            seed,
            budget_scale,
            tolerance,
            out,
        } => run(&scenario, seed, budget_scale, tolerance, out),
        Command::List => {
            for (name, desc) in list_scenarios() {
                println!("{name:<28} {desc}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Emit {
            report,
            format,
            out,
        } => emit(&report, &format, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
