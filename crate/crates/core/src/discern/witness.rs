use num_complex::Complex64;

use super::multiagent::unobservable_subspace;
use super::spectrum::SpectrumRow;
use super::{Settings, Verdict, WitnessPair};
use crate::error::{Error, Result};
use crate::model::AssembledPair;
use crate::numlin::{
    block_diag, hstack, null_space_scaled, operator_scale, pseudo_solve, shift, spectral_norm,
    to_complex, vstack, CMat, CVec, Subspace,
};
use crate::sim::validate_witness;

/// Growth allowed for parasitic modes over the validation horizon, in e-folds.
const HORIZON_EFOLDS: f64 = 16.0;

/// `diag(Phi, Phi_bar)` and `[Psi, -Psi]`.
pub(crate) fn augmented(pair: &AssembledPair) -> (CMat, CMat) {
    let phi = to_complex(&pair.phi);
    let phi_bar = to_complex(&pair.phi_bar);
    let psi = to_complex(&pair.psi);
    (block_diag(&phi, &phi_bar), hstack(&psi, &(-&psi)))
}

/// Split a complex `(x, x_bar)` into a unit-norm real pair, keeping the real or
/// imaginary part, whichever is larger. Both are witnesses because the
/// dynamics are real.
pub(crate) fn realify(eta: &CVec, half: usize, mu: Complex64) -> Result<WitnessPair> {
    let re: Vec<f64> = eta.iter().map(|z| z.re).collect();
    let im: Vec<f64> = eta.iter().map(|z| z.im).collect();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (mut v, n) = if norm(&re) >= norm(&im) {
        let n = norm(&re);
        (re, n)
    } else {
        let n = norm(&im);
        (im, n)
    };
    if n == 0.0 {
        return Err(Error::Internal("witness direction is zero".into()));
    }
    v.iter_mut().for_each(|x| *x /= n);
    let x0_bar = v.split_off(half);
    Ok(WitnessPair {
        x0: v,
        x0_bar,
        mu,
        residual: None,
        horizon: 0.0,
        validated: false,
    })
}

/// A real pair `(X0, X0_bar)` from the null space of
/// `[mu I - diag(Phi, Phi_bar); Psi, -Psi]`.
pub fn extract_witness(pair: &AssembledPair, mu: Complex64, tol: f64) -> Result<WitnessPair> {
    let (big, out) = augmented(pair);
    let stacked = vstack(&(-shift(&big, mu)), &out);
    let scale = operator_scale(&big, mu).max(spectral_norm(&out));
    let ns = null_space_scaled(&stacked, tol, scale);
    if ns.is_zero() {
        return Err(Error::Internal(format!(
            "no indiscernible direction at eigenvalue {mu}"
        )));
    }
    realify(&ns.basis().column(0).into_owned(), pair.state_dim(), mu)
}

/// Witness built from the subspaces behind a failed eigenspace condition:
/// a common eigenvector `x` gives `(x, x)`; an unobserved `x1 + x2` with
/// `x1 ∈ S`, `x2 ∈ S_bar` gives `(x1, -x2)`.
pub(crate) fn constructive_witness(
    failing: &Subspace,
    row: &SpectrumRow,
    common: bool,
    half: usize,
    tol: f64,
) -> Result<WitnessPair> {
    if failing.is_zero() {
        return Err(Error::Internal("failing subspace is empty".into()));
    }
    let z = failing.basis().column(0).into_owned();
    let eta = if common {
        let mut v = CVec::zeros(2 * half);
        v.rows_mut(0, half).copy_from(&z);
        v.rows_mut(half, half).copy_from(&z);
        v
    } else {
        let q = hstack(row.space.basis(), row.space_bar.basis());
        let c = pseudo_solve(&q, &z, tol);
        let k = row.space.dim();
        let x1 = row.space.basis() * c.rows(0, k);
        let x2 = row.space_bar.basis() * c.rows(k, c.len() - k);
        let mut v = CVec::zeros(2 * half);
        v.rows_mut(0, half).copy_from(&x1);
        v.rows_mut(half, half).copy_from(&(-x2));
        v
    };
    realify(&eta, half, row.mu)
}

/// Horizon over which a witness at `mu` is replayed.
///
/// Rounding errors excite every other mode; relative to the witness they grow
/// like `e^{(max Re σ - Re mu) t}`, so the horizon is capped where that factor
/// reaches `e^16`.
pub fn validation_horizon(rows: &[SpectrumRow], mu: Complex64, t_final: f64) -> f64 {
    let top = rows.iter().map(|r| r.mu.re).fold(f64::NEG_INFINITY, f64::max);
    let spread = top - mu.re;
    if spread > 0.0 {
        t_final.min(HORIZON_EFOLDS / spread)
    } else {
        t_final
    }
}

/// Replay `w` and attach it to `v`, noting any validation problem.
pub(crate) fn attach(
    v: &mut Verdict,
    pair: &AssembledPair,
    mut w: WitnessPair,
    rows: &[SpectrumRow],
    settings: &Settings,
) {
    let horizon = validation_horizon(rows, w.mu, settings.t_final);
    match validate_witness(pair, &mut w, horizon, settings.samples, settings.threshold) {
        Ok(true) => {}
        Ok(false) => v.diagnostics.push(format!(
            "witness residual {:.3e} exceeds threshold {:.1e}",
            w.residual.unwrap_or(f64::NAN),
            settings.threshold
        )),
        Err(e) => v.diagnostics.push(format!("witness simulation failed: {e}")),
    }
    v.witness = Some(w);
}

/// Run the direct eigenspace check and return its witness, if any.
pub fn find_witness(pair: &AssembledPair, settings: &Settings) -> Option<WitnessPair> {
    super::network::check_theorem_eigenspace(pair, settings).witness
}

/// All indiscernible pairs: the unobservable subspace of
/// `(diag(Phi, Phi_bar), [Psi, -Psi])`.
pub fn indiscernible_subspace(pair: &AssembledPair, tol: f64) -> Subspace {
    let (big, out) = augmented(pair);
    unobservable_subspace(&big, &out, tol)
}
