//! JSON spec files.

use std::collections::BTreeSet;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exprs::{parse_scalar, Chart, ExprError};
use crate::fields::{one_based, sort_with_sign, Alternating, KVector};
use crate::twistcheck::{Background, ManifoldSpec};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("expression error in {field} {key}: {source}")]
    Expression {
        field: &'static str,
        key: String,
        source: ExprError,
    },
}

pub type Components = IndexMap<String, String>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub dimension: usize,
    pub coordinates: Vec<String>,
    pub bivector: Components,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub two_form: Option<Components>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub three_form: Option<Components>,
}

pub fn load_spec(path: &Path) -> Result<ManifoldSpec, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|source| SpecError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<ManifoldSpec, SpecError> {
    let file: SpecFile =
        serde_json::from_str(text).map_err(|e| SpecError::Schema(e.to_string()))?;
    file.to_manifold()
}

fn parse_key(key: &str, degree: usize, dim: usize) -> Result<Vec<usize>, SpecError> {
    let bad = |why: &str| SpecError::Schema(format!("component key \"{key}\": {why}"));
    let idx = key
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad("expected comma-separated positive integers"))?;
    if idx.len() != degree {
        return Err(bad(&format!("expected {degree} indices")));
    }
    if idx.iter().any(|&i| i == 0 || i > dim) {
        return Err(bad(&format!("index out of range 1..={dim}")));
    }
    let mut sorted: Vec<usize> = idx.iter().map(|i| i - 1).collect();
    if sort_with_sign(&mut sorted).is_none() {
        return Err(bad("repeated index"));
    }
    Ok(idx.into_iter().map(|i| i - 1).collect())
}

fn parse_components<V>(
    field: &'static str,
    comps: &Components,
    degree: usize,
    chart: &Chart,
) -> Result<Alternating<V>, SpecError> {
    let mut seen = BTreeSet::new();
    let mut entries = Vec::with_capacity(comps.len());
    for (key, text) in comps {
        let tuple = parse_key(key, degree, chart.dim())?;
        let mut sorted = tuple.clone();
        sort_with_sign(&mut sorted);
        if !seen.insert(sorted.clone()) {
            return Err(SpecError::Schema(format!(
                "{field} component {} given more than once",
                one_based(&sorted)
            )));
        }
        let value = parse_scalar(text, chart).map_err(|source| SpecError::Expression {
            field,
            key: key.clone(),
            source,
        })?;
        entries.push((tuple, value));
    }
    Alternating::from_entries(degree, chart.dim(), entries)
        .map_err(|e| SpecError::Schema(e.to_string()))
}

fn render_components<V>(t: &Alternating<V>, chart: &Chart) -> Components {
    t.components()
        .map(|(k, v)| {
            let key = k
                .iter()
                .map(|i| (i + 1).to_string())
                .collect::<Vec<_>>()
                .join(",");
            (key, v.display_with(chart).to_string())
        })
        .collect()
}

impl SpecFile {
    pub fn to_manifold(&self) -> Result<ManifoldSpec, SpecError> {
        if self.coordinates.len() != self.dimension {
            return Err(SpecError::Schema(format!(
                "dimension is {} but {} coordinates are listed",
                self.dimension,
                self.coordinates.len()
            )));
        }
        if self.dimension == 0 {
            return Err(SpecError::Schema("dimension must be positive".into()));
        }
        let chart = Chart::new(self.coordinates.iter().cloned()).map_err(SpecError::Schema)?;
        let pi: KVector = parse_components("bivector", &self.bivector, 2, &chart)?;
        let background = match (&self.two_form, &self.three_form) {
            (Some(w), None) => Background::TwoForm(parse_components("two_form", w, 2, &chart)?),
            (None, Some(h)) => Background::ThreeForm(parse_components("three_form", h, 3, &chart)?),
            (Some(_), Some(_)) => {
                return Err(SpecError::Schema(
                    "give exactly one of \"two_form\" and \"three_form\"".into(),
                ))
            }
            (None, None) => {
                return Err(SpecError::Schema(
                    "missing \"two_form\" or \"three_form\"".into(),
                ))
            }
        };
        ManifoldSpec::new(chart, pi, background).map_err(|e| SpecError::Schema(e.to_string()))
    }

    pub fn from_manifold(spec: &ManifoldSpec) -> SpecFile {
        let chart = spec.chart();
        let (two_form, three_form) = match spec.background() {
            Background::TwoForm(w) => (Some(render_components(w, chart)), None),
            Background::ThreeForm(h) => (None, Some(render_components(h, chart))),
        };
        SpecFile {
            dimension: spec.dim(),
            coordinates: chart.names().to_vec(),
            bivector: render_components(spec.pi(), chart),
            two_form,
            three_form,
        }
    }
}

/// `spec` with every component expression re-rendered in canonical form.
pub fn to_json(spec: &ManifoldSpec) -> String {
    serde_json::to_string_pretty(&SpecFile::from_manifold(spec)).expect("spec files serialize")
}

/// Exact component-wise comparison of two specs.
pub fn same_spec(a: &ManifoldSpec, b: &ManifoldSpec) -> bool {
    fn same<V>(x: &Alternating<V>, y: &Alternating<V>) -> bool {
        x.sub(y).map(|d| d.is_zero()).unwrap_or(false)
    }
    a.chart() == b.chart()
        && same(a.pi(), b.pi())
        && match (a.background(), b.background()) {
            (Background::TwoForm(x), Background::TwoForm(y)) => same(x, y),
            (Background::ThreeForm(x), Background::ThreeForm(y)) => same(x, y),
            _ => false,
        }
}
