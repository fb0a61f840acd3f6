//! Embedded regression corpus checked by `qpkit selftest`.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{self, Flags, Outcome};
use crate::input::parse_str;

const CORPUS: &[(&str, &str)] = &[
    ("twisted_cubic.json", include_str!("../corpus/twisted_cubic.json")),
    ("veronese2.json", include_str!("../corpus/veronese2.json")),
    ("veronese3.json", include_str!("../corpus/veronese3.json")),
    ("petersen.json", include_str!("../corpus/petersen.json")),
    ("pentagon.json", include_str!("../corpus/pentagon.json")),
    ("rnc_points.json", include_str!("../corpus/rnc_points.json")),
];

const MANIFEST: &str = include_str!("../corpus/manifest.json");

#[derive(Debug, Deserialize)]
struct Expectation {
    file: String,
    command: String,
    pointer: String,
    expect: Value,
}

pub fn corpus_text(file: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(name, _)| *name == file).map(|(_, text)| *text)
}

fn run_one(e: &Expectation, flags: &Flags) -> Result<Value, String> {
    let text = corpus_text(&e.file).ok_or_else(|| format!("unknown corpus file {}", e.file))?;
    let parsed = parse_str(text).map_err(|err| err.to_string())?;
    let model = &parsed.model;
    let outcome: Outcome = match e.command.as_str() {
        "quadrics" => commands::quadrics(model),
        "kappa" => commands::kappa(model, flags),
        "qp" => commands::qp(model, flags),
        "strand" => commands::strand(model, flags),
        "bounds" => commands::bounds(model, flags),
        "report" => commands::report(model, flags),
        other => return Err(format!("unknown command {other}")),
    }
    .map_err(|err| err.to_string())?;
    outcome.result.pointer(&e.pointer).cloned().ok_or_else(|| format!("no value at {}", e.pointer))
}

/// Runs every manifest entry and returns a per-entry report plus the failure count.
pub fn run(flags: &Flags) -> (Value, usize) {
    let manifest: Vec<Expectation> = serde_json::from_str(MANIFEST).expect("embedded manifest is valid");
    let mut failures = 0;
    let checks: Vec<Value> = manifest
        .iter()
        .map(|e| {
            let got = run_one(e, flags);
            let pass = matches!(&got, Ok(v) if *v == e.expect);
            if !pass {
                failures += 1;
            }
            json!({
                "file": e.file,
                "command": e.command,
                "pointer": e.pointer,
                "expect": e.expect,
                "got": match got { Ok(v) => v, Err(msg) => json!({"error": msg}) },
                "pass": pass,
            })
        })
        .collect();
    let total = checks.len();
    (json!({"checks": checks, "passed": total - failures, "failed": failures}), failures)
}
