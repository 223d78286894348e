//! Machine-readable reports. Every type round-trips through JSON.

use netdiscern::atlas::{atlas_agreement, build_atlas, Atlas};
use netdiscern::discern::{
    analyze_network, check_legacy_theorem, EigenRow, LegacyReport, Method, NetworkAnalysis,
    Settings, Status, Verdict, WitnessPair,
};
use netdiscern::model::{assemble, assemble_multiagent, AssembledPair, NetworkSpec};
use netdiscern::numlin::{eig, to_complex, RMat, RVec};
use netdiscern::sim::{compare_pair, TrajectoryComparison};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::document::{Mode, Model};
use crate::CliError;

/// Where a setting's value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Default,
    Spec,
    Flag,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tol: f64,
    pub tol_source: Source,
    pub t_final: f64,
    pub t_final_source: Source,
    pub samples: usize,
    pub samples_source: Source,
    pub threshold: f64,
}

impl Provenance {
    pub fn settings(&self) -> Settings {
        Settings {
            tol: self.tol,
            t_final: self.t_final,
            samples: self.samples,
            threshold: self.threshold,
            ..Settings::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiAgentAnalysis {
    pub spectrum: Vec<EigenRow>,
    pub spectrum_bar: Vec<EigenRow>,
    pub legacy: LegacyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub mode: Mode,
    pub nodes: usize,
    pub state_dim: usize,
    pub settings: Provenance,
    /// The deciding verdict: the combined network verdict, or the corrected
    /// multi-agent criterion.
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkAnalysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiagent: Option<MultiAgentAnalysis>,
}

/// Exit code for a verdict: 0 discernible, 3 indiscernible, 4 otherwise.
pub fn status_code(status: Status) -> i32 {
    match status {
        Status::Discernible => 0,
        Status::Indiscernible => 3,
        Status::Inconclusive | Status::NotRefuted => 4,
    }
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        status_code(self.verdict.status)
    }
}

fn table(m: &RMat, tol: f64) -> Result<Vec<EigenRow>, CliError> {
    Ok(eig(&to_complex(m), tol)?
        .eigs
        .iter()
        .map(|e| EigenRow {
            value: e.value,
            algebraic_multiplicity: e.algebraic_multiplicity,
            geometric_multiplicity: e.geometric_multiplicity,
        })
        .collect())
}

pub fn analyze(model: &Model, prov: &Provenance, method: Method) -> Result<Report, CliError> {
    let settings = prov.settings();
    match model {
        Model::Network(spec) => {
            let a = analyze_network(spec, &settings, method)?;
            Ok(Report {
                mode: Mode::Network,
                nodes: spec.nodes,
                state_dim: spec.state_dim,
                settings: prov.clone(),
                verdict: a.verdict.clone(),
                network: Some(a),
                multiagent: None,
            })
        }
        Model::Multiagent(spec) => {
            let pair = assemble_multiagent(spec)?;
            let legacy = check_legacy_theorem(spec, &settings)?;
            Ok(Report {
                mode: Mode::Multiagent,
                nodes: spec.nodes,
                state_dim: spec.state_dim,
                settings: prov.clone(),
                verdict: legacy.corrected.clone(),
                network: None,
                multiagent: Some(MultiAgentAnalysis {
                    spectrum: table(&pair.phi, settings.tol)?,
                    spectrum_bar: table(&pair.phi_bar, settings.tol)?,
                    legacy,
                }),
            })
        }
    }
}

pub fn pair_of(model: &Model) -> Result<AssembledPair, CliError> {
    Ok(match model {
        Model::Network(s) => assemble(s)?,
        Model::Multiagent(s) => assemble_multiagent(s)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub status: Status,
    pub witness: Option<WitnessPair>,
    pub message: String,
}

impl WitnessReport {
    pub fn exit_code(&self) -> i32 {
        match (&self.witness, self.status) {
            (Some(_), _) => 3,
            (None, s) => status_code(s),
        }
    }
}

pub fn witness(report: &Report) -> WitnessReport {
    let v = &report.verdict;
    let message = match (&v.witness, v.status) {
        (Some(w), _) if w.validated => "witness validated by simulation".to_string(),
        (Some(_), _) => "witness found but not validated by simulation".to_string(),
        (None, Status::Discernible) => "no witness: discernible".to_string(),
        (None, _) => "no witness: verdict inconclusive".to_string(),
    };
    WitnessReport {
        status: v.status,
        witness: v.witness.clone(),
        message,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub threshold: f64,
    pub comparison: TrajectoryComparison,
    pub below_threshold: bool,
}

impl SimulationReport {
    pub fn exit_code(&self) -> i32 {
        if self.below_threshold {
            0
        } else {
            3
        }
    }
}

pub fn simulate(model: &Model, prov: &Provenance, x0: &[f64], x0_bar: &[f64]) -> Result<SimulationReport, CliError> {
    let pair = pair_of(model)?;
    let dim = pair.state_dim();
    for (name, v) in [("--x0", x0), ("--x0bar", x0_bar)] {
        if v.len() != dim {
            return Err(CliError::Spec(format!("{name}: expected {dim} entries, found {}", v.len())));
        }
    }
    let comparison = compare_pair(
        &pair,
        &RVec::from_column_slice(x0),
        &RVec::from_column_slice(x0_bar),
        prov.t_final,
        prov.samples,
    )?;
    Ok(SimulationReport {
        threshold: prov.threshold,
        below_threshold: comparison.max_rel_dev <= prov.threshold,
        comparison,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasRow {
    pub lambda: Complex64,
    pub chain: usize,
    pub alpha: usize,
    pub mu: Complex64,
    pub theta: usize,
    pub gamma: usize,
    pub eta: Vec<Vec<Complex64>>,
    pub truncated: bool,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementLine {
    pub mu: Complex64,
    pub direct_dim: usize,
    pub atlas_dim: usize,
    pub max_angle: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasTable {
    pub topology: String,
    pub rows: Vec<AtlasRow>,
    pub degenerate: bool,
    pub agreement: Vec<AgreementLine>,
    pub unmatched: Vec<Complex64>,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub tables: Vec<AtlasTable>,
}

impl AtlasReport {
    pub fn exit_code(&self) -> i32 {
        if self.tables.iter().all(|t| t.agrees) {
            0
        } else {
            4
        }
    }
}

fn atlas_table(name: &str, atlas: &Atlas, phi: &RMat, tol: f64) -> Result<AtlasTable, CliError> {
    let agreement = atlas_agreement(atlas, phi, tol)?;
    Ok(AtlasTable {
        topology: name.to_string(),
        rows: atlas
            .entries
            .iter()
            .map(|e| AtlasRow {
                lambda: e.lambda,
                chain: e.chain_index,
                alpha: e.alpha,
                mu: e.mu,
                theta: e.theta,
                gamma: e.gamma,
                eta: e.eta_vectors.iter().map(|v| v.iter().copied().collect()).collect(),
                truncated: e.truncated,
                boundary: e.boundary,
            })
            .collect(),
        degenerate: atlas.is_degenerate(),
        agrees: agreement.agrees(),
        agreement: agreement
            .rows
            .iter()
            .map(|r| AgreementLine {
                mu: r.mu,
                direct_dim: r.direct_dim,
                atlas_dim: r.atlas_dim,
                max_angle: r.max_angle,
                agrees: r.agrees,
            })
            .collect(),
        unmatched: agreement.unmatched,
    })
}

pub fn atlas(spec: &NetworkSpec, prov: &Provenance) -> Result<AtlasReport, CliError> {
    let pair = assemble(spec)?;
    let mut tables = Vec::new();
    for (name, l, phi) in [("original", &spec.l, &pair.phi), ("modified", &spec.l_bar, &pair.phi_bar)] {
        let at = build_atlas(l, &spec.a, &spec.h, prov.tol)?;
        tables.push(atlas_table(name, &at, phi, prov.tol)?);
    }
    Ok(AtlasReport { tables })
}
