//! Output trajectories of the original and modified systems.

use serde::{Deserialize, Serialize};

use crate::discern::WitnessPair;
use crate::error::{mismatch, Error, Result};
use crate::model::AssembledPair;
use crate::numlin::{expm, RMat, RVec};

/// Denominators never drop below this.
pub const REL_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryComparison {
    pub t_grid: Vec<f64>,
    pub outputs_original: Vec<Vec<f64>>,
    pub outputs_modified: Vec<Vec<f64>>,
    /// Output-difference norm at each sample.
    pub deviations: Vec<f64>,
    pub max_abs_dev: f64,
    /// Largest per-sample deviation relative to that sample's magnitude.
    pub max_rel_dev: f64,
}

fn grid(t_final: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::InvalidInput(format!("t_final must be positive, got {t_final}")));
    }
    if samples < 2 {
        return Err(Error::InvalidInput(format!("samples must be at least 2, got {samples}")));
    }
    let dt = t_final / (samples - 1) as f64;
    Ok((0..samples).map(|k| k as f64 * dt).collect())
}

/// States at `t_k = k t_final / (samples - 1)`, stepping with one `e^{Phi dt}`.
pub fn simulate_states(phi: &RMat, x0: &RVec, t_final: f64, samples: usize) -> Result<Vec<RVec>> {
    if phi.nrows() != x0.len() || phi.ncols() != x0.len() {
        return Err(mismatch("initial state", phi.ncols(), x0.len()));
    }
    let t = grid(t_final, samples)?;
    let step = expm(phi, t[1])?;
    let mut states = Vec::with_capacity(samples);
    let mut x = x0.clone();
    states.push(x.clone());
    for _ in 1..samples {
        x = &step * x;
        states.push(x.clone());
    }
    if states.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Range("state trajectory overflowed".into()));
    }
    Ok(states)
}

/// `Y(t_k) = Psi e^{Phi t_k} X0` on the uniform grid.
pub fn simulate_outputs(
    phi: &RMat,
    psi: &RMat,
    x0: &RVec,
    t_final: f64,
    samples: usize,
) -> Result<Vec<RVec>> {
    if psi.ncols() != phi.nrows() {
        return Err(mismatch("output matrix columns", phi.nrows(), psi.ncols()));
    }
    Ok(simulate_states(phi, x0, t_final, samples)?
        .iter()
        .map(|x| psi * x)
        .collect())
}

/// Run both systems and measure how far their outputs drift apart.
///
/// Each sample's deviation is divided by the largest of the two output norms
/// and `||Psi||` times the two state norms at that sample, so that pairs
/// whose outputs are identically zero still get a meaningful scale.
pub fn compare_pair(
    pair: &AssembledPair,
    x0: &RVec,
    x0_bar: &RVec,
    t_final: f64,
    samples: usize,
) -> Result<TrajectoryComparison> {
    let t_grid = grid(t_final, samples)?;
    let xs = simulate_states(&pair.phi, x0, t_final, samples)?;
    let xs_bar = simulate_states(&pair.phi_bar, x0_bar, t_final, samples)?;
    let psi_norm = pair.psi.norm();
    let mut outputs_original = Vec::with_capacity(samples);
    let mut outputs_modified = Vec::with_capacity(samples);
    let mut deviations = Vec::with_capacity(samples);
    let mut max_rel_dev: f64 = 0.0;
    for (x, xb) in xs.iter().zip(&xs_bar) {
        let y = &pair.psi * x;
        let yb = &pair.psi * xb;
        let dev = (&y - &yb).norm();
        let scale = y
            .norm()
            .max(yb.norm())
            .max(psi_norm * x.norm())
            .max(psi_norm * xb.norm())
            .max(REL_FLOOR);
        max_rel_dev = max_rel_dev.max(dev / scale);
        deviations.push(dev);
        outputs_original.push(y.iter().copied().collect());
        outputs_modified.push(yb.iter().copied().collect());
    }
    let max_abs_dev = deviations.iter().copied().fold(0.0, f64::max);
    Ok(TrajectoryComparison {
        t_grid,
        outputs_original,
        outputs_modified,
        deviations,
        max_abs_dev,
        max_rel_dev,
    })
}

/// Replay a witness and record its residual; true iff it stays below `threshold`.
pub fn validate_witness(
    pair: &AssembledPair,
    w: &mut WitnessPair,
    t_final: f64,
    samples: usize,
    threshold: f64,
) -> Result<bool> {
    if !(threshold > 0.0) {
        return Err(Error::InvalidInput(format!("threshold must be positive, got {threshold}")));
    }
    let x0 = RVec::from_vec(w.x0.clone());
    let x0_bar = RVec::from_vec(w.x0_bar.clone());
    let cmp = compare_pair(pair, &x0, &x0_bar, t_final, samples)?;
    w.residual = Some(cmp.max_rel_dev);
    w.horizon = t_final;
    w.validated = cmp.max_rel_dev <= threshold;
    Ok(w.validated)
}
