use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::network::{conclude, pbh_at, spectra, Evaluation, Failure};
use super::{Condition, Settings, Verdict};
use crate::model::{assemble_multiagent, laplacian, selection_matrix, MultiAgentSpec, Topology};
use crate::numlin::{
    block_diag, eig, hstack, intersect, null_space, null_space_scaled, numerical_rank,
    spectral_norm, subspace_eq, sum, to_complex, CMat, Subspace,
};

/// Largest principal angle for two unobservable subspaces to count as equal.
const SUBSPACE_ANGLE: f64 = 1e-6;

/// Largest `A`-invariant subspace inside `N(C)`: iterate
/// `V <- {x ∈ V : A x ∈ V}` from `V = N(C)` until the dimension settles.
pub fn unobservable_subspace(a: &CMat, c: &CMat, tol: f64) -> Subspace {
    let scale = spectral_norm(a).max(1.0);
    let mut v = null_space(c, tol);
    let mut marginal = v.is_marginal();
    while !v.is_zero() {
        let leak = v.complement_projector() * a * v.basis();
        let keep = null_space_scaled(&leak, tol, scale);
        marginal |= keep.is_marginal();
        if keep.dim() == v.dim() {
            break;
        }
        let basis = v.basis() * keep.basis();
        v = Subspace::spanned_by(&basis, tol);
    }
    v.with_marginal(marginal)
}

/// Common eigenvalues of `m1` and `m2` with their shared eigenvectors.
pub fn common_eigenpairs(
    m1: &CMat,
    m2: &CMat,
    tol: f64,
) -> crate::Result<Vec<(Complex64, Subspace)>> {
    let es1 = eig(m1, tol)?;
    let es2 = eig(m2, tol)?;
    Ok(super::union_spectrum(&es1, &es2)
        .into_iter()
        .filter_map(|row| {
            let shared = intersect(&row.space, &row.space_bar);
            (!shared.is_zero()).then_some((row.mu, shared))
        })
        .collect())
}

/// Outcome of comparing the output-indistinguishable pairs of two systems
/// with the pairs that share a full-state trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    /// Dimension of the pairs `(x, x_bar)` with equal outputs for all time.
    pub output_pairs_dim: usize,
    /// Dimension of the pairs with equal full states for all time.
    pub state_pairs_dim: usize,
    pub ensured: bool,
}

/// `Q` ensures output discernibility of `P` versus `P_bar` when every pair
/// with equal outputs `Q e^{P t} x = Q e^{P_bar t} x_bar` already has equal
/// states `e^{P t} x = e^{P_bar t} x_bar`.
pub fn ensures_output_discernibility(p: &CMat, p_bar: &CMat, q: &CMat, tol: f64) -> PairCheck {
    let n = p.nrows();
    let big = block_diag(p, p_bar);
    let outputs = unobservable_subspace(&big, &hstack(q, &(-q)), tol);
    let id = CMat::identity(n, n);
    let states = unobservable_subspace(&big, &hstack(&id, &(-&id)), tol);
    PairCheck {
        output_pairs_dim: outputs.dim(),
        state_pairs_dim: states.dim(),
        ensured: subspace_eq(&outputs, &states, SUBSPACE_ANGLE),
    }
}

/// `N(M) ∩ (S(phi|F) + S(phi|F_bar)) = {0}` at every eigenvalue of `F` or
/// `F_bar`. The sum is not required to be direct.
pub fn check_multiagent_output_discernibility(spec: &MultiAgentSpec, settings: &Settings) -> Verdict {
    const CHECK: &str = "multiagent_output_discernibility";
    let tol = settings.tol;
    let pair = match assemble_multiagent(spec) {
        Ok(p) => p,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let rows = match spectra(&pair, tol) {
        Ok(r) => r,
        Err(e) => return Verdict::inconclusive(CHECK, tol, e.to_string()),
    };
    let null_m = null_space(&to_complex(&pair.psi), tol);
    let mut marginal = Vec::new();
    if null_m.is_marginal() {
        marginal.push("output null space".to_string());
    }
    let mut failure = None;
    for (i, row) in rows.iter().enumerate() {
        let unseen = intersect(&null_m, &sum(&row.space, &row.space_bar));
        if unseen.is_marginal() {
            marginal.push(format!("eigenspaces at {}", row.mu));
        }
        if !unseen.is_zero() {
            failure = Some(Failure {
                row: i,
                condition: Condition::NullspaceSum,
                subspace: unseen,
            });
            break;
        }
    }
    // The decomposition witness `(x1, -x2)` is preferred here: the augmented
    // null space also holds pairs that agree in full state.
    conclude(CHECK, &pair, &rows, Evaluation { failure, marginal }, settings, true)
}

/// The five conditions of the earlier sufficient criterion, next to the
/// corrected criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegacyReport {
    /// `(Lap, Delta)` observable.
    pub laplacian_observable: bool,
    /// `(Lap_bar, Delta)` observable.
    pub laplacian_bar_observable: bool,
    /// `(A - lambda B, C)` observable for every `lambda ∈ σ(Lap) ∪ σ(Lap_bar)`.
    pub node_pairs_observable: bool,
    /// `Delta` ensures output discernibility of `(Lap, Lap_bar)`.
    pub delta_ensures: bool,
    pub delta_check: PairCheck,
    /// Common eigenpairs of `Lap` and `Lap_bar`, with one basis vector each.
    pub common_eigenpairs: Vec<(Complex64, Vec<Complex64>)>,
    /// `C` ensures output discernibility of `(A - lambda B, A - lambda_bar B)`
    /// for every eigenvalue pair with matching sensor readings.
    pub c_ensures: bool,
    /// The `(lambda, lambda_bar)` pairs condition five was evaluated on.
    pub c_pairs: Vec<(Complex64, Complex64, PairCheck)>,
    pub all_hold: bool,
    pub corrected: Verdict,
    pub notes: Vec<String>,
}

fn node_shift(spec: &MultiAgentSpec, lambda: Complex64) -> CMat {
    to_complex(&spec.a) - to_complex(&spec.b) * lambda
}

pub fn check_legacy_theorem(spec: &MultiAgentSpec, settings: &Settings) -> crate::Result<LegacyReport> {
    let tol = settings.tol;
    let lap = to_complex(&laplacian(spec, Topology::Original));
    let lap_bar = to_complex(&laplacian(spec, Topology::Modified));
    let delta = to_complex(&selection_matrix(&spec.observed, spec.nodes));
    let c = to_complex(&spec.c);

    let es = eig(&lap, tol)?;
    let es_bar = eig(&lap_bar, tol)?;
    let laplacian_observable = pbh_at(&lap, &delta, &es.values(), tol).failing.is_none();
    let laplacian_bar_observable = pbh_at(&lap_bar, &delta, &es_bar.values(), tol).failing.is_none();

    let mut lambdas = es.values();
    lambdas.extend(es_bar.values());
    lambdas.sort_by(crate::numlin::cmp_complex);
    lambdas.dedup_by(|x, y| super::close(*x, *y));
    let mut node_pairs_observable = true;
    for &lambda in &lambdas {
        let m = node_shift(spec, lambda);
        let values = eig(&m, tol)?.values();
        if pbh_at(&m, &c, &values, tol).failing.is_some() {
            node_pairs_observable = false;
        }
    }

    let delta_check = ensures_output_discernibility(&lap, &lap_bar, &delta, tol);
    let common = common_eigenpairs(&lap, &lap_bar, tol)?
        .into_iter()
        .map(|(mu, s)| {
            let mut v = s.basis().column(0).into_owned();
            crate::jordan::normalize_phase(&mut v);
            (mu, v.iter().copied().collect())
        })
        .collect();

    let mut c_pairs = Vec::new();
    for e in &es.eigs {
        for e_bar in &es_bar.eigs {
            let t = &delta * e.eigenspace.basis();
            let t_bar = &delta * e_bar.eigenspace.basis();
            let z = null_space(&hstack(&t, &(-t_bar)), tol);
            if z.is_zero() {
                continue;
            }
            let k = e.eigenspace.dim();
            let top = z.basis().rows(0, k).into_owned();
            let bottom = z.basis().rows(k, z.basis().nrows() - k).into_owned();
            if numerical_rank(&top, tol) == 0 || numerical_rank(&bottom, tol) == 0 {
                continue;
            }
            let check = ensures_output_discernibility(
                &node_shift(spec, e.value),
                &node_shift(spec, e_bar.value),
                &c,
                tol,
            );
            c_pairs.push((e.value, e_bar.value, check));
        }
    }
    let c_ensures = c_pairs.iter().all(|(_, _, p)| p.ensured);
    let all_hold = laplacian_observable
        && laplacian_bar_observable
        && node_pairs_observable
        && delta_check.ensured
        && c_ensures;
    Ok(LegacyReport {
        laplacian_observable,
        laplacian_bar_observable,
        node_pairs_observable,
        delta_ensures: delta_check.ensured,
        delta_check,
        common_eigenpairs: common,
        c_ensures,
        c_pairs,
        all_hold,
        corrected: check_multiagent_output_discernibility(spec, settings),
        notes: vec![
            "condition five is evaluated once per pair of Laplacian eigenspaces, \
             using whole eigenspace bases rather than individual eigenvectors"
                .into(),
        ],
    })
}
