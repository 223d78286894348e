//! Discernibility criteria for topology changes and witness extraction.
//!
//! Every check returns a [`Verdict`]. Sufficient-and-necessary checks end in
//! [`Status::Discernible`] or [`Status::Indiscernible`]; necessary-only checks
//! can refute discernibility but, when they pass, only report
//! [`Status::NotRefuted`]. Any rank decision close to its threshold turns the
//! outcome into [`Status::Inconclusive`].

mod analysis;
mod multiagent;
mod network;
mod spectrum;
mod witness;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use analysis::{analyze_network, EigenRow, Method, NetworkAnalysis};
pub use multiagent::{
    check_legacy_theorem, check_multiagent_output_discernibility, common_eigenpairs,
    ensures_output_discernibility, unobservable_subspace, LegacyReport, PairCheck,
};
pub use network::{
    check_augmented_pbh, check_dimension_formula, check_lower_dimensional,
    check_observability_necessary, check_reduced_system, check_sensor_bound,
    check_theorem_eigenspace, min_sensors_hint, pbh_observable,
};
pub use spectrum::{union_spectrum, SpectrumRow};
pub use witness::{extract_witness, find_witness, indiscernible_subspace, validation_horizon};

use crate::atlas::MU_LINK;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Discernible,
    Indiscernible,
    /// A rank decision was too close to call, or two methods disagreed.
    Inconclusive,
    /// A necessary condition holds; this alone certifies nothing.
    NotRefuted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    Intersection,
    NullspaceDirectsum,
    /// `N(M) ∩ (S + S_bar)` for the multi-agent criterion.
    NullspaceSum,
    DimensionFormula,
    SensorBound,
    ReducedSystem,
    #[serde(rename = "obs_AH")]
    ObsAH,
    #[serde(rename = "obs_AlambdaH_C")]
    ObsALambdaHC,
    PbhAugmented,
}

/// Two initial states whose sensor outputs coincide for all time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessPair {
    pub x0: Vec<f64>,
    pub x0_bar: Vec<f64>,
    /// Eigenvalue the pair was extracted at.
    pub mu: Complex64,
    /// Largest relative output deviation found by simulation.
    pub residual: Option<f64>,
    /// Simulation horizon used for the residual.
    pub horizon: f64,
    pub validated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    pub failing_mu: Option<Complex64>,
    pub failed_condition: Option<Condition>,
    pub witness: Option<WitnessPair>,
    pub tolerance_used: f64,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    pub(crate) fn new(check: &str, status: Status, tol: f64) -> Self {
        Self {
            check: check.to_string(),
            status,
            failing_mu: None,
            failed_condition: None,
            witness: None,
            tolerance_used: tol,
            diagnostics: Vec::new(),
        }
    }

    pub(crate) fn failed(check: &str, tol: f64, mu: Option<Complex64>, cond: Condition) -> Self {
        Self {
            failing_mu: mu,
            failed_condition: Some(cond),
            ..Self::new(check, Status::Indiscernible, tol)
        }
    }

    pub(crate) fn inconclusive(check: &str, tol: f64, why: impl Into<String>) -> Self {
        let mut v = Self::new(check, Status::Inconclusive, tol);
        v.diagnostics.push(why.into());
        v
    }

    /// Downgrade to inconclusive, keeping the would-be outcome as a diagnostic.
    pub(crate) fn demote(mut self, why: impl Into<String>) -> Self {
        if self.status != Status::Inconclusive {
            self.diagnostics
                .push(format!("would have been {:?}", self.status).to_lowercase());
            self.status = Status::Inconclusive;
        }
        self.diagnostics.push(why.into());
        self
    }

    pub fn is_discernible(&self) -> bool {
        self.status == Status::Discernible
    }

    pub fn is_indiscernible(&self) -> bool {
        self.status == Status::Indiscernible
    }
}

/// Knobs shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub tol: f64,
    pub t_final: f64,
    pub samples: usize,
    /// Relative output deviation below which a witness counts as validated.
    pub threshold: f64,
    /// Compare every atlas eigenspace against the direct computation.
    pub validate_atlas: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: crate::numlin::DEFAULT_TOL,
            t_final: 5.0,
            samples: 201,
            threshold: 1e-6,
            validate_atlas: true,
        }
    }
}

impl Settings {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

pub(crate) fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= MU_LINK * a.norm().max(b.norm()).max(1.0)
}

#[cfg(test)]
mod tests;
