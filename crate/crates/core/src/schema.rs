//! JSON structure files.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "coords": ["x", "y", "z"],
//!   "eta": {"z": "exp(x)"},
//!   "xi": {"z": "exp(-x)"},
//!   "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
//!   "g": [["exp(z)", "0", "0"], ["0", "exp(z)", "0"], ["0", "0", "exp(2*x)"]],
//!   "candidates": {"f": "1/2*exp(-x)", "omega": {"x": "1"}, "sigma": "x"},
//!   "samples": [[0.5, 0.5, 0.5]]
//! }
//! ```
//!
//! `phi` is row-major with the column convention `φ(∂_j) = Σ_i phi[i][j] ∂_i`.
//! Missing map entries are zero.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::Candidates;
use crate::expr::{parse, Chart, ExpPoly, ExprError};
use crate::forms::{DiffForm, VecField};
use crate::scalar::Rational;
use crate::structure::{AlmostContactMetric, Matrix, StructureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemaError {
    #[error("invalid JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{0}")]
    Shape(String),
    #[error("{field}: {source}")]
    Expr {
        field: String,
        #[source]
        source: ExprError,
    },
    #[error("{field}: unknown coordinate `{name}`")]
    UnknownCoordinate { field: String, name: String },
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub dim: usize,
    pub coords: Vec<String>,
    pub eta: BTreeMap<String, String>,
    pub xi: BTreeMap<String, String>,
    pub phi: Vec<Vec<String>>,
    pub g: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidates: Option<CandidateFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<Vec<f64>>>,
}

/// A parsed structure file.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub structure: AlmostContactMetric<Rational>,
    pub candidates: Candidates<Rational>,
    pub samples: Option<Vec<Vec<f64>>>,
}

fn expr(chart: &Arc<Chart>, field: String, text: &str) -> Result<ExpPoly<Rational>, SchemaError> {
    parse(text, chart).map_err(|source| SchemaError::Expr { field, source })
}

fn components(
    chart: &Arc<Chart>,
    field: &str,
    map: &BTreeMap<String, String>,
) -> Result<Vec<ExpPoly<Rational>>, SchemaError> {
    let mut out = vec![ExpPoly::zero(chart); chart.dim()];
    for (name, text) in map {
        let i = chart
            .index_of(name)
            .ok_or_else(|| SchemaError::UnknownCoordinate { field: field.to_string(), name: name.clone() })?;
        out[i] = expr(chart, format!("{field}.{name}"), text)?;
    }
    Ok(out)
}

fn matrix(chart: &Arc<Chart>, field: &str, rows: &[Vec<String>]) -> Result<Matrix<Rational>, SchemaError> {
    let dim = chart.dim();
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        let shape: Vec<String> = rows.iter().map(|r| r.len().to_string()).collect();
        return Err(SchemaError::Shape(format!(
            "{field} must be {dim}x{dim}, got {} rows of lengths [{}]",
            rows.len(),
            shape.join(", ")
        )));
    }
    let mut out = Vec::with_capacity(dim);
    for (i, row) in rows.iter().enumerate() {
        let mut r = Vec::with_capacity(dim);
        for (j, text) in row.iter().enumerate() {
            r.push(expr(chart, format!("{field}[{i}][{j}]"), text)?);
        }
        out.push(r);
    }
    Ok(Matrix::from_rows(chart, out)?)
}

fn sparse(chart: &Chart, comps: &[ExpPoly<Rational>]) -> BTreeMap<String, String> {
    chart
        .coords()
        .iter()
        .zip(comps)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n.clone(), c.to_string()))
        .collect()
}

fn dense(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

impl StructureFile {
    pub fn from_json(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text).map_err(|e| SchemaError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })
    }

    /// Pretty JSON with a trailing newline; deterministic.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("structure file serializes");
        s.push('\n');
        s
    }

    pub fn load(&self) -> Result<Loaded, SchemaError> {
        if self.coords.len() != self.dim {
            return Err(SchemaError::Shape(format!(
                "dim is {} but {} coordinates are given",
                self.dim,
                self.coords.len()
            )));
        }
        let chart = Chart::new(self.coords.iter().cloned())
            .map_err(|source| SchemaError::Expr { field: "coords".into(), source })?;
        let eta = DiffForm::one_form(&chart, components(&chart, "eta", &self.eta)?).map_err(StructureError::from)?;
        let xi = VecField::new(&chart, components(&chart, "xi", &self.xi)?).map_err(StructureError::from)?;
        let phi = matrix(&chart, "phi", &self.phi)?;
        let g = matrix(&chart, "g", &self.g)?;
        let structure = AlmostContactMetric::new(&chart, phi, xi, eta, g)?;

        let mut candidates = Candidates::default();
        if let Some(c) = &self.candidates {
            if let Some(f) = &c.f {
                candidates.f = Some(expr(&chart, "candidates.f".into(), f)?);
            }
            if let Some(w) = &c.omega {
                let comps = components(&chart, "candidates.omega", w)?;
                candidates.omega = Some(DiffForm::one_form(&chart, comps).map_err(StructureError::from)?);
            }
            if let Some(s) = &c.sigma {
                candidates.sigma = Some(expr(&chart, "candidates.sigma".into(), s)?);
            }
        }
        if let Some(samples) = &self.samples {
            if let Some(bad) = samples.iter().position(|p| p.len() != self.dim) {
                return Err(SchemaError::Shape(format!("samples[{bad}] must have {} coordinates", self.dim)));
            }
        }
        Ok(Loaded { structure, candidates, samples: self.samples.clone() })
    }

    pub fn from_structure(
        s: &AlmostContactMetric<Rational>,
        candidates: &Candidates<Rational>,
        samples: Option<Vec<Vec<f64>>>,
    ) -> Self {
        let chart = s.chart();
        let cands = CandidateFile {
            f: candidates.f.as_ref().map(ToString::to_string),
            omega: candidates.omega.as_ref().map(|w| sparse(chart, &w.components())),
            sigma: candidates.sigma.as_ref().map(ToString::to_string),
        };
        let has_cands = cands.f.is_some() || cands.omega.is_some() || cands.sigma.is_some();
        StructureFile {
            dim: s.dim(),
            coords: chart.coords().to_vec(),
            eta: sparse(chart, &s.eta.components()),
            xi: sparse(chart, s.xi.components()),
            phi: dense(&s.phi),
            g: dense(&s.g),
            candidates: has_cands.then_some(cands),
            samples,
        }
    }
}

/// Parses and loads in one step.
pub fn load_str(text: &str) -> Result<Loaded, SchemaError> {
    StructureFile::from_json(text)?.load()
}
