//! JSON spec files.

use std::path::Path;

use netdiscern::model::{validate_multiagent, validate_spec, Edge, MultiAgentSpec, NetworkSpec};
use netdiscern::numlin::RMat;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Network,
    Multiagent,
}

/// Edge `[i, j, w]` with 1-based endpoints.
pub type EdgeTriple = (usize, usize, f64);

/// A spec file as written on disk. Matrices are row-major nested arrays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub mode: Mode,
    #[serde(rename = "N")]
    pub nodes: usize,
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<f64>>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<f64>>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<Vec<f64>>>,
    #[serde(rename = "L_bar", default, skip_serializing_if = "Option::is_none")]
    pub l_bar: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<EdgeTriple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights_bar: Option<Vec<EdgeTriple>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensors: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_final: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// A validated spec ready for analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Network(NetworkSpec),
    Multiagent(MultiAgentSpec),
}

impl Model {
    pub fn mode(&self) -> Mode {
        match self {
            Model::Network(_) => Mode::Network,
            Model::Multiagent(_) => Mode::Multiagent,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

fn matrix(field: &str, rows: &[Vec<f64>], shape: (usize, Option<usize>)) -> Result<RMat, CliError> {
    let (want_rows, want_cols) = shape;
    if rows.len() != want_rows {
        return Err(invalid(format!("field {field}: expected {want_rows} rows, found {}", rows.len())));
    }
    let cols = want_cols.unwrap_or_else(|| rows.first().map_or(0, Vec::len));
    for (i, r) in rows.iter().enumerate() {
        if r.len() != cols {
            return Err(invalid(format!(
                "field {field}: row {} has {} entries, expected {cols}",
                i + 1,
                r.len()
            )));
        }
    }
    Ok(RMat::from_fn(want_rows, cols, |i, j| rows[i][j]))
}

fn required<'a, T>(field: &str, v: &'a Option<T>, mode: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| invalid(format!("field {field}: required in {mode} mode")))
}

fn forbid<T>(field: &str, v: &Option<T>, mode: &str) -> Result<(), CliError> {
    match v {
        Some(_) => Err(invalid(format!("field {field}: not allowed in {mode} mode"))),
        None => Ok(()),
    }
}

fn edges(list: &[EdgeTriple]) -> Vec<Edge> {
    list.iter().map(|&(i, j, w)| Edge { i, j, w }).collect()
}

fn violations(messages: Vec<String>) -> Result<(), CliError> {
    if messages.is_empty() {
        Ok(())
    } else {
        Err(invalid(messages.join("; ")))
    }
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| invalid(format!("{e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    /// Shape-check the document and run the model validators.
    pub fn to_model(&self) -> Result<Model, CliError> {
        let (nn, n) = (self.nodes, self.n);
        let a = matrix("A", &self.a, (n, Some(n)))?;
        let c = matrix("C", &self.c, (self.c.len(), Some(n)))?;
        match self.mode {
            Mode::Network => {
                const MODE: &str = "network";
                forbid("B", &self.b, MODE)?;
                forbid("weights", &self.weights, MODE)?;
                forbid("weights_bar", &self.weights_bar, MODE)?;
                forbid("observed", &self.observed, MODE)?;
                let spec = NetworkSpec {
                    nodes: nn,
                    state_dim: n,
                    output_dim: c.nrows(),
                    a,
                    h: matrix("H", required("H", &self.h, MODE)?, (n, Some(n)))?,
                    c,
                    l: matrix("L", required("L", &self.l, MODE)?, (nn, Some(nn)))?,
                    l_bar: matrix("L_bar", required("L_bar", &self.l_bar, MODE)?, (nn, Some(nn)))?,
                    sensors: required("sensors", &self.sensors, MODE)?.clone(),
                };
                violations(validate_spec(&spec).violations.into_iter().map(|v| v.message).collect())?;
                Ok(Model::Network(spec))
            }
            Mode::Multiagent => {
                const MODE: &str = "multiagent";
                forbid("H", &self.h, MODE)?;
                forbid("L", &self.l, MODE)?;
                forbid("L_bar", &self.l_bar, MODE)?;
                forbid("sensors", &self.sensors, MODE)?;
                let spec = MultiAgentSpec {
                    nodes: nn,
                    state_dim: n,
                    a,
                    b: matrix("B", required("B", &self.b, MODE)?, (n, Some(n)))?,
                    c,
                    weights: edges(required("weights", &self.weights, MODE)?),
                    weights_bar: edges(required("weights_bar", &self.weights_bar, MODE)?),
                    observed: required("observed", &self.observed, MODE)?.clone(),
                };
                violations(validate_multiagent(&spec).violations.into_iter().map(|v| v.message).collect())?;
                Ok(Model::Multiagent(spec))
            }
        }
    }
}

fn rows(m: &RMat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

impl From<&NetworkSpec> for SpecDocument {
    fn from(s: &NetworkSpec) -> Self {
        SpecDocument {
            mode: Mode::Network,
            nodes: s.nodes,
            n: s.state_dim,
            a: rows(&s.a),
            h: Some(rows(&s.h)),
            b: None,
            c: rows(&s.c),
            l: Some(rows(&s.l)),
            l_bar: Some(rows(&s.l_bar)),
            weights: None,
            weights_bar: None,
            sensors: Some(s.sensors.clone()),
            observed: None,
            tol: None,
            t_final: None,
            samples: None,
        }
    }
}

impl From<&MultiAgentSpec> for SpecDocument {
    fn from(s: &MultiAgentSpec) -> Self {
        let triples = |e: &[Edge]| e.iter().map(|e| (e.i, e.j, e.w)).collect();
        SpecDocument {
            mode: Mode::Multiagent,
            nodes: s.nodes,
            n: s.state_dim,
            a: rows(&s.a),
            h: None,
            b: Some(rows(&s.b)),
            c: rows(&s.c),
            l: None,
            l_bar: None,
            weights: Some(triples(&s.weights)),
            weights_bar: Some(triples(&s.weights_bar)),
            sensors: None,
            observed: Some(s.observed.clone()),
            tol: None,
            t_final: None,
            samples: None,
        }
    }
}
