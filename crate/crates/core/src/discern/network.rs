use num_complex::Complex64;

use super::spectrum::{match_spaces, union_spectrum, SpectrumRow};
use super::witness::{attach, augmented, constructive_witness, extract_witness};
use super::{Condition, Settings, Status, Verdict};
use crate::atlas::{atlas_agreement, atlas_eigenspace, build_atlas, Atlas};
use crate::error::{Error, Result};
use crate::model::{assemble, reduced_pair, selection_matrix, AssembledPair, NetworkSpec};
use crate::numlin::{
    eig, image, intersect, null_space, numerical_rank, operator_scale, rank_decision_scaled,
    shift, spectral_norm, sum, to_complex, vstack, CMat, Subspace,
};

pub(crate) fn spectra(pair: &AssembledPair, tol: f64) -> Result<Vec<SpectrumRow>> {
    let es = eig(&to_complex(&pair.phi), tol)?;
    let es_bar = eig(&to_complex(&pair.phi_bar), tol)?;
    Ok(union_spectrum(&es, &es_bar))
}

/// Failing eigenvalue of the two eigenspace conditions, with the subspace
/// that witnesses the failure.
pub(crate) struct Failure {
    pub row: usize,
    pub condition: Condition,
    pub subspace: Subspace,
}

pub(crate) struct Evaluation {
    pub failure: Option<Failure>,
    pub marginal: Vec<String>,
}

/// Condition (1) `S ∩ S_bar = {0}` then condition (2)
/// `N(out) ∩ (S ⊕ S_bar) = {0}`, at every row in order. A condition (1)
/// failure skips condition (2) at that eigenvalue.
pub(crate) fn eigenspace_conditions(rows: &[SpectrumRow], null_out: &Subspace) -> Evaluation {
    let mut marginal = Vec::new();
    if null_out.is_marginal() {
        marginal.push("output null space".to_string());
    }
    for (i, row) in rows.iter().enumerate() {
        if row.is_marginal() {
            marginal.push(format!("eigenspaces at {}", row.mu));
        }
        let common = intersect(&row.space, &row.space_bar);
        if common.is_marginal() && !row.is_marginal() {
            marginal.push(format!("intersection at {}", row.mu));
        }
        if !common.is_zero() {
            return Evaluation {
                failure: Some(Failure {
                    row: i,
                    condition: Condition::Intersection,
                    subspace: common,
                }),
                marginal,
            };
        }
        let unseen = intersect(null_out, &sum(&row.space, &row.space_bar));
        if unseen.is_marginal() && !row.is_marginal() && !null_out.is_marginal() {
            marginal.push(format!("unobserved eigenvectors at {}", row.mu));
        }
        if !unseen.is_zero() {
            return Evaluation {
                failure: Some(Failure {
                    row: i,
                    condition: Condition::NullspaceDirectsum,
                    subspace: unseen,
                }),
                marginal,
            };
        }
    }
    Evaluation {
        failure: None,
        marginal,
    }
}

/// Turn an evaluation into a verdict, attaching a validated witness on failure.
pub(crate) fn conclude(
    check: &str,
    pair: &AssembledPair,
    rows: &[SpectrumRow],
    eval: Evaluation,
    settings: &Settings,
    prefer_constructive: bool,
) -> Verdict {
    let tol = settings.tol;
    let mut v = match &eval.failure {
        None => Verdict::new(check, Status::Discernible, tol),
        Some(f) => {
            let row = &rows[f.row];
            let mut v = Verdict::failed(check, tol, Some(row.mu), f.condition);
            let common = f.condition == Condition::Intersection;
            let constructive =
                || constructive_witness(&f.subspace, row, common, pair.state_dim(), tol);
            let w = if prefer_constructive {
                constructive().or_else(|_| extract_witness(pair, row.mu, tol))
            } else {
                extract_witness(pair, row.mu, tol).or_else(|_| constructive())
            };
            match w {
                Ok(w) => attach(&mut v, pair, w, rows, settings),
                Err(e) => v.diagnostics.push(format!("no witness: {e}")),
            }
            v
        }
    };
    if !eval.marginal.is_empty() {
        v = v.demote(format!(
            "rank decision near threshold: {}",
            eval.marginal.join(", ")
        ));
    }
    v
}

/// Both eigenspace conditions at every `mu` in `σ(Phi) ∪ σ(Phi_bar)`.
pub fn check_theorem_eigenspace(pair: &AssembledPair, settings: &Settings) -> Verdict {
    const CHECK: &str = "theorem_eigenspace";
    let rows = match spectra(pair, settings.tol) {
        Ok(r) => r,
        Err(e) => return Verdict::inconclusive(CHECK, settings.tol, e.to_string()),
    };
    let null_psi = null_space(&to_complex(&pair.psi), settings.tol);
    let eval = eigenspace_conditions(&rows, &null_psi);
    conclude(CHECK, pair, &rows, eval, settings, false)
}

/// `dim(Psi S + Psi S_bar) = tau + tau_bar` at every eigenvalue.
pub fn check_dimension_formula(pair: &AssembledPair, settings: &Settings) -> Verdict {
    const CHECK: &str = "dimension_formula";
    let tol = settings.tol;
    let rows = match spectra(pair, tol) {
        Ok(r) => r,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let psi = to_complex(&pair.psi);
    let mut marginal = Vec::new();
    for row in &rows {
        let img = sum(&image(&psi, &row.space, tol), &image(&psi, &row.space_bar, tol));
        if img.is_marginal() {
            marginal.push(format!("image at {}", row.mu));
        }
        if img.dim() != row.tau() + row.tau_bar() {
            let mut v = Verdict::failed(CHECK, tol, Some(row.mu), Condition::DimensionFormula);
            v.diagnostics.push(format!(
                "dim of image sum {} < tau + tau_bar = {}",
                img.dim(),
                row.tau() + row.tau_bar()
            ));
            match extract_witness(pair, row.mu, tol) {
                Ok(w) => attach(&mut v, pair, w, &rows, settings),
                Err(e) => v.diagnostics.push(format!("no witness: {e}")),
            }
            if !marginal.is_empty() {
                v = v.demote(format!("rank decision near threshold: {}", marginal.join(", ")));
            }
            return v;
        }
    }
    let v = Verdict::new(CHECK, Status::Discernible, tol);
    if marginal.is_empty() {
        v
    } else {
        v.demote(format!("rank decision near threshold: {}", marginal.join(", ")))
    }
}

/// `rank(Delta) rank(C) >= tau + tau_bar` at every eigenvalue. A pure
/// counting argument, so failures carry no witness.
pub fn check_sensor_bound(pair: &AssembledPair, spec: &NetworkSpec, settings: &Settings) -> Verdict {
    const CHECK: &str = "sensor_bound";
    let tol = settings.tol;
    let rows = match spectra(pair, tol) {
        Ok(r) => r,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let budget = sensor_budget(spec, tol);
    for row in &rows {
        let need = row.tau() + row.tau_bar();
        if budget < need {
            let mut v = Verdict::failed(CHECK, tol, Some(row.mu), Condition::SensorBound);
            v.diagnostics
                .push(format!("rank(Delta) * rank(C) = {budget} < {need}"));
            return v;
        }
    }
    Verdict::new(CHECK, Status::NotRefuted, tol)
}

fn sensor_budget(spec: &NetworkSpec, tol: f64) -> usize {
    let delta = to_complex(&selection_matrix(&spec.sensors, spec.nodes));
    numerical_rank(&delta, tol) * numerical_rank(&to_complex(&spec.c), tol)
}

/// `ceil(max_mu (tau + tau_bar) / rank C)`: fewer sensors than this cannot work.
pub fn min_sensors_hint(pair: &AssembledPair, spec: &NetworkSpec, tol: f64) -> Result<usize> {
    let rank_c = numerical_rank(&to_complex(&spec.c), tol);
    if rank_c == 0 {
        return Err(Error::InvalidInput("output matrix C has rank 0".into()));
    }
    let rows = spectra(pair, tol)?;
    let worst = rows.iter().map(|r| r.tau() + r.tau_bar()).max().unwrap_or(0);
    Ok(worst.div_ceil(rank_c))
}

fn atlas_rows(atlas: &Atlas, atlas_bar: &Atlas, tol: f64) -> Vec<SpectrumRow> {
    let side = |a: &Atlas| {
        a.mus()
            .into_iter()
            .map(|mu| (mu, atlas_eigenspace(a, mu)))
            .collect::<Vec<_>>()
    };
    match_spaces(side(atlas), side(atlas_bar), atlas.ambient_dim, tol)
}

/// The eigenspace conditions with eigenspaces assembled from chains of the
/// `N`-dimensional topology and the `n`-dimensional node dynamics.
pub fn check_lower_dimensional(spec: &NetworkSpec, settings: &Settings) -> Verdict {
    const CHECK: &str = "lower_dimensional";
    let tol = settings.tol;
    let built = assemble(spec).and_then(|pair| {
        let atlas = build_atlas(&spec.l, &spec.a, &spec.h, tol)?;
        let atlas_bar = build_atlas(&spec.l_bar, &spec.a, &spec.h, tol)?;
        Ok((pair, atlas, atlas_bar))
    });
    let (pair, atlas, atlas_bar) = match built {
        Ok(b) => b,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let rows = atlas_rows(&atlas, &atlas_bar, tol);
    let null_psi = null_space(&to_complex(&pair.psi), tol);
    let mut eval = eigenspace_conditions(&rows, &null_psi);
    for (name, a) in [("L", &atlas), ("L_bar", &atlas_bar)] {
        if a.is_degenerate() {
            eval.marginal.push(format!("atlas of {name} has dependent spans"));
        }
        if a.has_boundary_chain() {
            eval.marginal.push(format!("atlas of {name} has a chain step near threshold"));
        }
    }
    let mut v = conclude(CHECK, &pair, &rows, eval, settings, false);
    if settings.validate_atlas {
        for (name, a, phi) in [("L", &atlas, &pair.phi), ("L_bar", &atlas_bar, &pair.phi_bar)] {
            match atlas_agreement(a, phi, tol) {
                Ok(rep) if rep.agrees() => {}
                Ok(rep) => {
                    let bad: Vec<String> = rep
                        .rows
                        .iter()
                        .filter(|r| !r.agrees)
                        .map(|r| format!("{} (atlas {} vs direct {})", r.mu, r.atlas_dim, r.direct_dim))
                        .chain(rep.unmatched.iter().map(|m| format!("{m} (atlas only)")))
                        .collect();
                    v = v.demote(format!(
                        "atlas of {name} disagrees with direct eigenspaces at {}",
                        bad.join(", ")
                    ));
                }
                Err(e) => v = v.demote(format!("direct eigenspaces of {name} failed: {e}")),
            }
        }
    }
    v
}

/// The eigenspace conditions for the node-level pair `(L, L_bar)` seen
/// through `Delta`. Failure refutes discernibility of the whole network.
pub fn check_reduced_system(spec: &NetworkSpec, settings: &Settings) -> Verdict {
    const CHECK: &str = "reduced_system";
    let tol = settings.tol;
    let reduced = match reduced_pair(spec) {
        Ok(p) => p,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let rows = match spectra(&reduced, tol) {
        Ok(r) => r,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let null_delta = null_space(&to_complex(&reduced.psi), tol);
    let eval = eigenspace_conditions(&rows, &null_delta);
    let marginal = eval.marginal.clone();
    let mut v = match eval.failure {
        None => Verdict::new(CHECK, Status::NotRefuted, tol),
        Some(f) => {
            let mut v = Verdict::failed(CHECK, tol, Some(rows[f.row].mu), Condition::ReducedSystem);
            v.diagnostics.push(format!(
                "reduced pair fails the {:?} condition",
                f.condition
            ));
            attach_network_witness(&mut v, spec, settings);
            v
        }
    };
    if !marginal.is_empty() {
        v = v.demote(format!("rank decision near threshold: {}", marginal.join(", ")));
    }
    v
}

/// A necessary check failed; borrow the witness of the full direct check.
fn attach_network_witness(v: &mut Verdict, spec: &NetworkSpec, settings: &Settings) {
    if let Ok(pair) = assemble(spec) {
        let full = check_theorem_eigenspace(&pair, settings);
        if let Some(w) = full.witness {
            v.witness = Some(w);
        } else {
            v.diagnostics
                .push(format!("full-network check found no witness ({:?})", full.status));
        }
    }
}

pub(crate) struct PbhOutcome {
    pub failing: Option<Complex64>,
    pub marginal: bool,
}

/// PBH rank test at the given eigenvalues.
pub(crate) fn pbh_at(a: &CMat, c: &CMat, values: &[Complex64], tol: f64) -> PbhOutcome {
    let n = a.nrows();
    let c_norm = spectral_norm(c);
    let mut marginal = false;
    for &mu in values {
        let stacked = vstack(&shift(a, mu), c);
        let d = rank_decision_scaled(&stacked, tol, operator_scale(a, mu).max(c_norm));
        marginal |= d.marginal;
        if d.rank < n {
            return PbhOutcome {
                failing: Some(mu),
                marginal,
            };
        }
    }
    PbhOutcome {
        failing: None,
        marginal,
    }
}

fn pbh_detail(a: &CMat, c: &CMat, tol: f64) -> Result<PbhOutcome> {
    if a.nrows() != a.ncols() || c.ncols() != a.ncols() {
        return Err(crate::error::mismatch(
            "PBH test",
            format!("square A and C with {} columns", a.ncols()),
            format!("A {:?}, C {:?}", a.shape(), c.shape()),
        ));
    }
    let es = eig(a, tol)?;
    let mut out = pbh_at(a, c, &es.values(), tol);
    out.marginal |= es.is_marginal();
    Ok(out)
}

/// `rank [lambda I - A; C] = n` at every eigenvalue of `A`.
pub fn pbh_observable(a: &CMat, c: &CMat, tol: f64) -> Result<bool> {
    Ok(pbh_detail(a, c, tol)?.failing.is_none())
}

/// `(A, H)` and every `(A + lambda H, C)`, `lambda ∈ σ(L) ∪ σ(L_bar)`, must be
/// observable.
pub fn check_observability_necessary(spec: &NetworkSpec, settings: &Settings) -> Verdict {
    const CHECK: &str = "observability_necessary";
    let tol = settings.tol;
    let run = || -> Result<Verdict> {
        let a = to_complex(&spec.a);
        let h = to_complex(&spec.h);
        let c = to_complex(&spec.c);
        let mut marginal = false;
        let ah = pbh_detail(&a, &h, tol)?;
        marginal |= ah.marginal;
        if let Some(mu) = ah.failing {
            let mut v = Verdict::failed(CHECK, tol, Some(mu), Condition::ObsAH);
            v.diagnostics.push("(A, H) is unobservable".into());
            return Ok(v);
        }
        let mut lambdas = eig(&to_complex(&spec.l), tol)?.values();
        lambdas.extend(eig(&to_complex(&spec.l_bar), tol)?.values());
        lambdas.sort_by(crate::numlin::cmp_complex);
        lambdas.dedup_by(|x, y| super::close(*x, *y));
        for lambda in lambdas {
            let shifted = &a + &h * lambda;
            let o = pbh_detail(&shifted, &c, tol)?;
            marginal |= o.marginal;
            if o.failing.is_some() {
                let mut v = Verdict::failed(CHECK, tol, Some(lambda), Condition::ObsALambdaHC);
                v.diagnostics
                    .push(format!("(A + lambda H, C) is unobservable at lambda = {lambda}"));
                return Ok(v);
            }
        }
        let v = Verdict::new(CHECK, Status::NotRefuted, tol);
        Ok(if marginal {
            v.demote("PBH rank near threshold")
        } else {
            v
        })
    };
    match run() {
        Ok(mut v) => {
            if v.is_indiscernible() {
                attach_network_witness(&mut v, spec, settings);
            }
            v
        }
        Err(e) => Verdict::inconclusive(CHECK, tol, e.to_string()),
    }
}

/// Observability of `(diag(Phi, Phi_bar), [Psi, -Psi])` by the PBH test.
pub fn check_augmented_pbh(pair: &AssembledPair, settings: &Settings) -> Verdict {
    const CHECK: &str = "augmented_pbh";
    let tol = settings.tol;
    let rows = match spectra(pair, tol) {
        Ok(r) => r,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let (big, out) = augmented(pair);
    let values: Vec<Complex64> = rows.iter().map(|r| r.mu).collect();
    let o = pbh_at(&big, &out, &values, tol);
    let mut v = match o.failing {
        None => Verdict::new(CHECK, Status::Discernible, tol),
        Some(mu) => {
            let mut v = Verdict::failed(CHECK, tol, Some(mu), Condition::PbhAugmented);
            match extract_witness(pair, mu, tol) {
                Ok(w) => attach(&mut v, pair, w, &rows, settings),
                Err(e) => v.diagnostics.push(format!("no witness: {e}")),
            }
            v
        }
    };
    if o.marginal {
        v = v.demote("augmented PBH rank near threshold");
    }
    v
}
