use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::network::{
    check_augmented_pbh, check_dimension_formula, check_lower_dimensional,
    check_observability_necessary, check_reduced_system, check_sensor_bound,
    check_theorem_eigenspace, min_sensors_hint,
};
use super::{Settings, Status, Verdict};
use crate::error::Result;
use crate::model::{assemble, NetworkSpec};
use crate::numlin::{eig, to_complex, EigenStructure};

/// Which eigenspace computation decides the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Eigenspaces of the `Nn`-dimensional matrices.
    Direct,
    /// Eigenspaces assembled from chains of `L` and `A + lambda H`.
    Atlas,
    /// Both, and they must agree.
    Both,
    /// `Both` up to `N n = 200`, `Atlas` above.
    Auto,
}

impl Method {
    pub fn resolve(self, state_dim: usize) -> Method {
        match self {
            Method::Auto if state_dim <= 200 => Method::Both,
            Method::Auto => Method::Atlas,
            m => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub value: Complex64,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
}

fn table(es: &EigenStructure) -> Vec<EigenRow> {
    es.eigs
        .iter()
        .map(|e| EigenRow {
            value: e.value,
            algebraic_multiplicity: e.algebraic_multiplicity,
            geometric_multiplicity: e.geometric_multiplicity,
        })
        .collect()
}

/// Every applicable check on one network, plus the combined verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkAnalysis {
    pub method: Method,
    pub verdict: Verdict,
    pub spectrum: Vec<EigenRow>,
    pub spectrum_bar: Vec<EigenRow>,
    pub direct: Option<Verdict>,
    pub lower_dimensional: Option<Verdict>,
    pub dimension_formula: Option<Verdict>,
    pub augmented_pbh: Option<Verdict>,
    pub sensor_bound: Verdict,
    pub reduced_system: Verdict,
    pub observability: Verdict,
    pub min_sensors_hint: Option<usize>,
}

/// Combine the primary paths into one verdict.
fn combine(direct: Option<&Verdict>, atlas: Option<&Verdict>, tol: f64) -> Verdict {
    match (direct, atlas) {
        (Some(d), Some(a)) => {
            let conclusive = |v: &Verdict| v.status != Status::Inconclusive;
            if conclusive(d) && conclusive(a) && d.status != a.status {
                let mut v = d.clone().demote(format!(
                    "direct path says {:?} but atlas path says {:?}",
                    d.status, a.status
                ));
                v.check = "combined".into();
                v
            } else if conclusive(d) {
                d.clone()
            } else {
                a.clone()
            }
        }
        (Some(v), None) | (None, Some(v)) => v.clone(),
        (None, None) => Verdict::inconclusive("combined", tol, "no method selected"),
    }
}

/// Run the checks for a network spec. Equivalent cross-checks (dimension
/// formula, augmented PBH) run whenever the direct path does.
pub fn analyze_network(spec: &NetworkSpec, settings: &Settings, method: Method) -> Result<NetworkAnalysis> {
    let pair = assemble(spec)?;
    let tol = settings.tol;
    let method = method.resolve(pair.state_dim());
    let es = eig(&to_complex(&pair.phi), tol)?;
    let es_bar = eig(&to_complex(&pair.phi_bar), tol)?;
    let run_direct = matches!(method, Method::Direct | Method::Both);
    let run_atlas = matches!(method, Method::Atlas | Method::Both);

    let direct = run_direct.then(|| check_theorem_eigenspace(&pair, settings));
    let lower = run_atlas.then(|| check_lower_dimensional(spec, settings));
    let mut verdict = combine(direct.as_ref(), lower.as_ref(), tol);
    let sensor_bound = check_sensor_bound(&pair, spec, settings);
    let reduced_system = check_reduced_system(spec, settings);
    let observability = check_observability_necessary(spec, settings);

    // A refuted necessary condition contradicts a discernible verdict.
    if verdict.is_discernible() {
        for nec in [&sensor_bound, &reduced_system, &observability] {
            if nec.is_indiscernible() {
                verdict = verdict.demote(format!("necessary check {} failed", nec.check));
            }
        }
    }
    Ok(NetworkAnalysis {
        method,
        spectrum: table(&es),
        spectrum_bar: table(&es_bar),
        dimension_formula: run_direct.then(|| check_dimension_formula(&pair, settings)),
        augmented_pbh: run_direct.then(|| check_augmented_pbh(&pair, settings)),
        direct,
        lower_dimensional: lower,
        verdict,
        sensor_bound,
        reduced_system,
        observability,
        min_sensors_hint: min_sensors_hint(&pair, spec, tol).ok(),
    })
}
