//! JSON model descriptions and their canonical digest.

use std::path::Path;

use num_traits::{One, Zero};
use qpkit::graphs::GraphSpec;
use qpkit::models::{graph_model, pointset_model, toric_model, PointConfig, VarietyModel};
use qpkit::polytopes::LatticeConfig;
use qpkit::ratlin::Rational;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid model description: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("field `{field}`: {reason}")]
    Field { field: String, reason: String },
    #[error(transparent)]
    Model(#[from] qpkit::Error),
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelInput {
    Toric { lattice_points: Vec<Vec<i64>> },
    Graph { vertices: usize, edges: Vec<[usize; 2]> },
    Points { n: usize, coords: Vec<Vec<String>> },
}

/// A parsed model with the canonical text its digest is computed from.
pub struct ParsedModel {
    pub model: VarietyModel,
    pub canonical: String,
}

impl ParsedModel {
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical.as_bytes()))
    }
}

pub fn parse_input(path: &Path) -> Result<ParsedModel, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<ParsedModel, InputError> {
    let input: ModelInput = serde_json::from_str(text)?;
    build(input)
}

fn field(field: &str, reason: impl Into<String>) -> InputError {
    InputError::Field { field: field.into(), reason: reason.into() }
}

fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: Rational = q.trim().parse::<num_bigint::BigInt>().ok()?.into();
            if q.is_zero() {
                return None;
            }
            Some(Rational::from(p.trim().parse::<num_bigint::BigInt>().ok()?) / q)
        }
        None => Some(Rational::from(s.parse::<num_bigint::BigInt>().ok()?)),
    }
}

/// Scales a projective point so its first nonzero coordinate is one.
fn normalize(p: &[Rational]) -> Vec<Rational> {
    let lead = p.iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(Rational::one);
    p.iter().map(|x| x / &lead).collect()
}

fn build(input: ModelInput) -> Result<ParsedModel, InputError> {
    match input {
        ModelInput::Toric { lattice_points } => {
            if lattice_points.is_empty() {
                return Err(field("lattice_points", "must list at least one point"));
            }
            let config = LatticeConfig::new(lattice_points)?;
            let model = toric_model(&config)?;
            let mut pts = config.points().to_vec();
            pts.sort();
            let canonical = format!("toric:{}", serde_json::to_string(&pts)?);
            Ok(ParsedModel { model, canonical })
        }
        ModelInput::Graph { vertices, edges } => {
            if vertices == 0 {
                return Err(field("vertices", "must be positive"));
            }
            let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
            let graph = GraphSpec::new(vertices, &pairs)?;
            let model = graph_model(&graph)?;
            let canon_edges: Vec<(usize, usize)> = graph.edges().collect();
            let canonical = format!("graph:{vertices}:{}", serde_json::to_string(&canon_edges)?);
            Ok(ParsedModel { model, canonical })
        }
        ModelInput::Points { n, coords } => {
            let mut points = Vec::with_capacity(coords.len());
            for (i, row) in coords.iter().enumerate() {
                if row.len() != n + 1 {
                    return Err(field(&format!("coords[{i}]"), format!("expected {} coordinates, got {}", n + 1, row.len())));
                }
                let parsed: Option<Vec<Rational>> = row.iter().map(|s| parse_rational(s)).collect();
                let parsed =
                    parsed.ok_or_else(|| field(&format!("coords[{i}]"), "entries must be rationals such as \"3\" or \"-2/5\""))?;
                points.push(parsed);
            }
            let config = PointConfig::new(n, points)?;
            let model = pointset_model(&config)?;
            let mut canon: Vec<Vec<String>> =
                config.points().iter().map(|p| normalize(p).iter().map(|x| x.to_string()).collect()).collect();
            canon.sort();
            let canonical = format!("points:{n}:{}", serde_json::to_string(&canon)?);
            Ok(ParsedModel { model, canonical })
        }
    }
}
