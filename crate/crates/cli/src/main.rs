//! `qpkit`: quadratic persistence, linear strands and Pythagoras-number
//! bounds for toric, graph and point-set models.

mod commands;
mod input;
mod json;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Flags, Outcome, Status};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "qpkit", version, about = "Quadratic persistence and Pythagoras-number bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for random points.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Independent random trials per sequence.
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,
    /// Last homological degree of the linear strand.
    #[arg(long, global = true)]
    pmax: Option<usize>,
    /// Largest point set tried by the qp search.
    #[arg(long = "max-gamma", global = true)]
    max_gamma: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on matrix entries in Koszul computations (QPKIT_BUDGET overrides).
    #[arg(long, global = true, default_value_t = qpkit::koszul::DEFAULT_BUDGET)]
    budget: usize,
    /// Treat the model as arithmetically Cohen-Macaulay.
    #[arg(long, global = true)]
    acm: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Basis of the degree-two part of the ideal.
    Quadrics { input: PathBuf },
    /// Quadrics surviving successive inner projections.
    Kappa { input: PathBuf },
    /// Quadratic persistence.
    Qp { input: PathBuf },
    /// Linear strand of the Betti table.
    Strand { input: PathBuf },
    /// Lower and upper bounds on the Pythagoras number.
    Bounds { input: PathBuf },
    /// Everything above in one document.
    Report { input: PathBuf },
    /// Check the embedded regression corpus.
    Selftest,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Quadrics { .. } => "quadrics",
            Command::Kappa { .. } => "kappa",
            Command::Qp { .. } => "qp",
            Command::Strand { .. } => "strand",
            Command::Bounds { .. } => "bounds",
            Command::Report { .. } => "report",
            Command::Selftest => "selftest",
        }
    }
}

fn budget(flag: usize) -> Result<usize, String> {
    match std::env::var("QPKIT_BUDGET") {
        Ok(v) => v.trim().parse().map_err(|_| format!("QPKIT_BUDGET: not a count: {v:?}")),
        Err(_) => Ok(flag),
    }
}

fn execute(cli: &Cli, flags: &Flags) -> Result<(Option<String>, Outcome), String> {
    if let Command::Selftest = cli.command {
        let (result, failures) = selftest::run(flags);
        let mut out = Outcome { result, warnings: Vec::new(), assumptions: Vec::new(), status: Status::Success };
        if failures > 0 {
            out.warnings.push(format!("{failures} corpus checks failed"));
        }
        return Ok((None, out));
    }
    let path = match &cli.command {
        Command::Quadrics { input }
        | Command::Kappa { input }
        | Command::Qp { input }
        | Command::Strand { input }
        | Command::Bounds { input }
        | Command::Report { input } => input,
        Command::Selftest => unreachable!(),
    };
    let parsed = input::parse_input(path).map_err(|e| e.to_string())?;
    let model = &parsed.model;
    let outcome = match cli.command {
        Command::Quadrics { .. } => commands::quadrics(model),
        Command::Kappa { .. } => commands::kappa(model, flags),
        Command::Qp { .. } => commands::qp(model, flags),
        Command::Strand { .. } => commands::strand(model, flags),
        Command::Bounds { .. } => commands::bounds(model, flags),
        Command::Report { .. } => commands::report(model, flags),
        Command::Selftest => unreachable!(),
    }
    .map_err(|e| e.to_string())?;
    Ok((Some(parsed.digest()), outcome))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        _ => rows.push((prefix.to_string(), scalar(v))),
    }
}

fn table(doc: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", doc, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match budget(cli.budget) {
        Ok(b) => b,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let flags = Flags {
        seed: cli.seed,
        trials: cli.trials,
        p_max: cli.pmax,
        max_gamma: cli.max_gamma,
        budget,
        acm: cli.acm,
    };
    let (digest, outcome) = match execute(&cli, &flags) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let selftest_failed = matches!(cli.command, Command::Selftest) && !outcome.warnings.is_empty();
    let doc = json!({
        "command": cli.command.name(),
        "input_digest": digest,
        "seed": cli.seed,
        "trials": cli.trials,
        "result": outcome.result,
        "warnings": outcome.warnings,
        "assumptions": outcome.assumptions,
    });
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        Format::Table => table(&doc),
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).is_err() {
        return ExitCode::from(1);
    }
    if selftest_failed {
        ExitCode::from(1)
    } else if outcome.status == Status::Inconclusive {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
