//! One function per subcommand; each returns the `result` object plus
//! warnings, assumptions and the exit status.

use qpkit::bounds::{full_report, Certificate, LowerBound, PyBoundsReport, QpValue, ReportConfig};
use qpkit::koszul::{linear_strand, LinearStrand};
use qpkit::models::{ModelSource, VarietyModel};
use qpkit::polytopes::binomial;
use qpkit::projection::{kappa_sequence, qp_upper_search, SearchStatus};
use serde_json::{json, Map, Value};

use crate::json::{count, counts, gl_index, point, rational};

/// Settings shared by all commands.
#[derive(Debug, Clone)]
pub struct Flags {
    pub seed: u64,
    pub trials: usize,
    pub p_max: Option<usize>,
    pub max_gamma: Option<usize>,
    pub budget: usize,
    pub acm: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Inconclusive,
}

#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub warnings: Vec<String>,
    pub assumptions: Vec<String>,
    pub status: Status,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Self { result, warnings: Vec::new(), assumptions: Vec::new(), status: Status::Success }
    }
}

pub type CommandResult = Result<Outcome, qpkit::Error>;

fn model_summary(model: &VarietyModel) -> Value {
    let n = model.n;
    let dim_i2 = model.dim_i2();
    let codim = model.codim();
    json!({
        "kind": model.kind.name(),
        "n": count(n as u64),
        "dim_x": count(model.dim_x as u64),
        "codim": count(codim as u64),
        "dim_i2": count(dim_i2 as u64),
        "dim_r2": count((binomial(n + 2, 2) - dim_i2) as u64),
        "irreducible": model.irreducible,
        "nondegenerate": model.nondegenerate,
    })
}

pub fn quadrics(model: &VarietyModel) -> CommandResult {
    let q = &model.quadrics;
    let basis: Vec<Value> = (0..q.dim())
        .map(|b| {
            Value::Array(
                q.terms(b)
                    .iter()
                    .map(|(i, j, c)| json!({"monomial": [i, j], "coef": rational(c)}))
                    .collect(),
            )
        })
        .collect();
    let mut result = model_summary(model);
    let eps = binomial(model.codim() + 1, 2) as i64 - model.dim_i2() as i64;
    result["eps"] = json!(eps);
    result["quadrics"] = Value::Array(basis);
    Ok(Outcome::ok(result))
}

pub fn kappa(model: &VarietyModel, flags: &Flags) -> CommandResult {
    let seq = kappa_sequence(model, flags.trials, flags.seed)?;
    let mut out = Outcome::ok(json!({
        "kappa": counts(&seq.values),
        "qp": count(seq.qp() as u64),
        "agreement": seq.agreement,
        "per_trial": Value::Array(seq.per_trial.iter().map(|s| counts(s)).collect()),
    }));
    if !seq.agreement {
        out.warnings.push("trials disagree; the entrywise minimum is reported".into());
    }
    out.assumptions.push("random points are generic".into());
    Ok(out)
}

pub fn qp(model: &VarietyModel, flags: &Flags) -> CommandResult {
    if model.irreducible {
        let seq = kappa_sequence(model, flags.trials, flags.seed)?;
        let mut out = Outcome::ok(json!({
            "qp": count(seq.qp() as u64),
            "kappa": counts(&seq.values),
            "exact": true,
            "method": "random-chains",
        }));
        out.assumptions.push("random points are generic".into());
        return Ok(out);
    }
    let max = flags.max_gamma.unwrap_or(model.n + 1);
    let search = qp_upper_search(model, max, flags.trials, flags.seed)?;
    let method = match model.source {
        ModelSource::PointSet(_) => "exhaustive-subsets",
        _ => "component-search",
    };
    let mut out = Outcome::ok(json!({
        "qp": search.k.map_or(Value::Null, |k| count(k as u64)),
        "status": match search.status {
            SearchStatus::Found => "found",
            SearchStatus::Inconclusive => "inconclusive",
        },
        "witness": Value::Array(search.witness.iter().map(|p| point(p)).collect()),
        "exhaustive_below": search.exhaustive_below,
        "certified_lower": count(search.certified_lower as u64),
        "exact": search.is_exact(),
        "method": method,
    }));
    if search.status == SearchStatus::Inconclusive {
        out.status = Status::Inconclusive;
        out.warnings.push(format!("no witness with at most {max} points"));
    } else if !search.is_exact() {
        out.warnings.push("only an upper bound on qp is certified".into());
    }
    Ok(out)
}

fn strand_json(s: &LinearStrand) -> Value {
    json!({
        "k_p1": counts(&s.k_p1),
        "k_p2": counts(&s.k_p2),
        "ell": count(s.ell as u64),
        "gl_index": gl_index(s.gl_index),
        "p_max": count(s.p_max as u64),
        "truncated": s.truncated,
    })
}

pub fn strand(model: &VarietyModel, flags: &Flags) -> CommandResult {
    let p_max = flags.p_max.unwrap_or(model.n);
    let s = linear_strand(model, p_max, flags.budget)?;
    let mut out = Outcome::ok(strand_json(&s));
    if s.truncated {
        out.warnings.push("strand truncated: ell and gl_index are lower bounds".into());
    }
    Ok(out)
}

fn lower_json(l: Option<LowerBound>) -> Value {
    l.map_or(Value::Null, |l| json!({"value": count(l.value as u64), "advisory": l.advisory}))
}

fn certificate_json(c: &Certificate) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(c.name()));
    match c {
        Certificate::MinimalDegree { py } => {
            m.insert("py".into(), count(*py as u64));
        }
        Certificate::NearlyMinimal { qp, py } => {
            m.insert("qp".into(), count(*qp as u64));
            m.insert("py".into(), py.map_or(Value::Null, |p| count(p as u64)));
        }
        Certificate::StrandLength { qp, ell } => {
            m.insert("qp".into(), count(*qp as u64));
            m.insert("ell".into(), count(*ell as u64));
        }
        Certificate::Prism(p) => {
            m.insert("qp".into(), count(p.qp as u64));
            m.insert("py".into(), count(p.py as u64));
            m.insert("ell".into(), count(p.ell as u64));
        }
    }
    Value::Object(m)
}

fn bounds_json(r: &PyBoundsReport) -> Value {
    let qp = match r.qp {
        QpValue::Exact(k) => json!({"value": count(k as u64), "certified": "exact"}),
        QpValue::Upper(k) => json!({"value": count(k as u64), "certified": "upper"}),
        QpValue::Unknown => Value::Null,
    };
    json!({
        "eps": count(r.eps as u64),
        "degree": r.degree.map_or(Value::Null, count),
        "qp": qp,
        "ell": r.strand.as_ref().map_or(Value::Null, |s| count(s.ell as u64)),
        "gl_index": r.strand.as_ref().map_or(Value::Null, |s| gl_index(s.gl_index)),
        "lower": lower_json(r.lower),
        "uppers": Value::Array(r.uppers.iter().map(|u| count(u.value as u64)).collect()),
        "upper_bounds": Value::Array(r.uppers.iter().map(|u| json!({
            "value": count(u.value as u64),
            "provenance": u.provenance.name(),
            "note": u.note,
        })).collect()),
        "certificates": Value::Array(r.certificates.iter().map(certificate_json).collect()),
        "interval": [count(r.interval.0 as u64), r.interval.1.map_or(Value::Null, |h| count(h as u64))],
        "gl_prediction": r.gl_prediction.map_or(Value::Null, |g| count(g as u64)),
    })
}

fn report_config(flags: &Flags) -> ReportConfig {
    ReportConfig {
        trials: flags.trials,
        seed: flags.seed,
        p_max: flags.p_max,
        max_gamma: flags.max_gamma,
        budget: flags.budget,
        acm: flags.acm,
    }
}

fn report_outcome(r: PyBoundsReport, result: Value) -> Outcome {
    let status = if r.qp == QpValue::Unknown { Status::Inconclusive } else { Status::Success };
    Outcome { result, warnings: r.warnings, assumptions: r.assumptions, status }
}

pub fn bounds(model: &VarietyModel, flags: &Flags) -> CommandResult {
    let r = full_report(model, &report_config(flags))?;
    let result = bounds_json(&r);
    Ok(report_outcome(r, result))
}

pub fn report(model: &VarietyModel, flags: &Flags) -> CommandResult {
    let r = full_report(model, &report_config(flags))?;
    let result = json!({
        "model": model_summary(model),
        "strand": r.strand.as_ref().map_or(Value::Null, strand_json),
        "bounds": bounds_json(&r),
    });
    Ok(report_outcome(r, result))
}
