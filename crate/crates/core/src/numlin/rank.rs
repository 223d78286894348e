use nalgebra::SVD;

use super::{CMat, CVec, Subspace};

/// Outcome of a tolerance-based rank decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    /// Absolute cut-off the singular values were compared against.
    pub threshold: f64,
    /// Some singular value lies within a factor of ten of the threshold.
    pub marginal: bool,
}

struct Decomposition {
    /// Singular values in decreasing order.
    s: Vec<f64>,
    /// Left singular vectors matching `s` (only the first `rows` rows are kept).
    u: CMat,
    /// Full set of right singular vectors, `cols x cols`.
    v: CMat,
}

fn decompose(m: &CMat) -> Decomposition {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Decomposition {
            s: Vec::new(),
            u: CMat::zeros(rows, 0),
            v: CMat::identity(cols, cols),
        };
    }
    // Thin SVD only yields min(rows, cols) right vectors; pad with zero rows
    // so that the complete right basis (and thus the null space) is available.
    let work = if rows < cols {
        let mut padded = CMat::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(m);
        padded
    } else {
        m.clone()
    };
    let svd = SVD::new(work, true, true);
    let u_full = svd.u.expect("left vectors requested");
    let v_full = svd.v_t.expect("right vectors requested").adjoint();
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let s = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut u = CMat::zeros(rows, order.len());
    let mut v = CMat::zeros(cols, cols);
    for (dst, &src) in order.iter().enumerate() {
        u.set_column(dst, &u_full.column(src).rows(0, rows));
        v.set_column(dst, &v_full.column(src));
    }
    Decomposition { s, u, v }
}

fn decide(s: &[f64], tol: f64, scale: f64, dims: usize) -> RankDecision {
    let threshold = tol * scale * dims as f64;
    let rank = s.iter().filter(|&&x| x > threshold).count();
    let marginal = threshold > 0.0
        && s
            .iter()
            .any(|&x| x > threshold / 10.0 && x <= threshold * 10.0);
    RankDecision {
        rank,
        threshold,
        marginal,
    }
}

pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Rank relative to the largest singular value: values above
/// `tol * sigma_max * max(rows, cols)` count.
pub fn rank_decision(m: &CMat, tol: f64) -> RankDecision {
    let s = singular_values(m);
    let scale = s.first().copied().unwrap_or(0.0);
    decide(&s, tol, scale, m.nrows().max(m.ncols()))
}

/// Like [`rank_decision`] but with an externally supplied magnitude scale,
/// for matrices that are products with an orthonormal basis or shifts of a
/// larger operator.
pub fn rank_decision_scaled(m: &CMat, tol: f64, scale: f64) -> RankDecision {
    let s = singular_values(m);
    decide(&s, tol, scale, m.nrows().max(m.ncols()))
}

pub fn numerical_rank(m: &CMat, tol: f64) -> usize {
    rank_decision(m, tol).rank
}

fn null_from(m: &CMat, tol: f64, scale: Option<f64>) -> Subspace {
    let d = decompose(m);
    let scale = scale.unwrap_or_else(|| d.s.first().copied().unwrap_or(0.0));
    let dec = decide(&d.s, tol, scale, m.nrows().max(m.ncols()));
    let cols = m.ncols();
    let basis = d.v.columns(dec.rank, cols - dec.rank).into_owned();
    Subspace::from_parts(basis, tol, dec.marginal)
}

/// Orthonormal basis of `{x : m x = 0}` at the given relative tolerance.
pub fn null_space(m: &CMat, tol: f64) -> Subspace {
    null_from(m, tol, None)
}

pub fn null_space_scaled(m: &CMat, tol: f64, scale: f64) -> Subspace {
    null_from(m, tol, Some(scale))
}

fn range_from(m: &CMat, tol: f64, scale: Option<f64>) -> Subspace {
    let d = decompose(m);
    let scale = scale.unwrap_or_else(|| d.s.first().copied().unwrap_or(0.0));
    let dec = decide(&d.s, tol, scale, m.nrows().max(m.ncols()));
    let basis = d.u.columns(0, dec.rank).into_owned();
    Subspace::from_parts(basis, tol, dec.marginal)
}

/// Orthonormal basis of the column space of `m`.
pub fn range(m: &CMat, tol: f64) -> Subspace {
    range_from(m, tol, None)
}

pub fn range_scaled(m: &CMat, tol: f64, scale: f64) -> Subspace {
    range_from(m, tol, Some(scale))
}

/// Minimal-norm least-squares solution of `m x = b`, truncating singular
/// values below `tol * sigma_max * max(rows, cols)`.
pub fn pseudo_solve(m: &CMat, b: &CVec, tol: f64) -> CVec {
    let d = decompose(m);
    let scale = d.s.first().copied().unwrap_or(0.0);
    let dec = decide(&d.s, tol, scale, m.nrows().max(m.ncols()));
    let mut x = CVec::zeros(m.ncols());
    for k in 0..dec.rank {
        let coeff = d.u.column(k).dotc(b) / d.s[k];
        x += d.v.column(k) * coeff;
    }
    x
}

/// Leading `rank` singular triplets `(U_r, s_r, V_r)` with `m ≈ U_r diag(s_r) V_r^H`.
pub fn truncated_svd(m: &CMat, rank: usize) -> (CMat, Vec<f64>, CMat) {
    let d = decompose(m);
    let r = rank.min(d.s.len());
    (
        d.u.columns(0, r).into_owned(),
        d.s[..r].to_vec(),
        d.v.columns(0, r).into_owned(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{to_complex, RMat};

    fn c(rows: usize, cols: usize, data: &[f64]) -> CMat {
        to_complex(&RMat::from_row_slice(rows, cols, data))
    }

    #[test]
    fn rank_of_identity_and_rank_one() {
        assert_eq!(numerical_rank(&CMat::identity(5, 5), 1e-8), 5);
        assert_eq!(numerical_rank(&c(2, 2, &[1.0, 1.0, 1.0, 1.0]), 1e-8), 1);
    }

    #[test]
    fn rank_of_zero_and_empty() {
        assert_eq!(numerical_rank(&CMat::zeros(3, 4), 1e-8), 0);
        assert_eq!(numerical_rank(&CMat::zeros(0, 4), 1e-8), 0);
    }

    #[test]
    fn selection_and_output_ranks() {
        let delta = c(2, 4, &[1., 0., 0., 0., 0., 1., 0., 0.]);
        let cm = c(1, 2, &[1., 0.]);
        assert_eq!(numerical_rank(&delta, 1e-8) * numerical_rank(&cm, 1e-8), 2);
    }

    #[test]
    fn null_space_examples() {
        assert_eq!(null_space(&CMat::identity(4, 4), 1e-8).dim(), 0);
        let ns = null_space(&c(2, 2, &[0., 0., -1., 0.]), 1e-8);
        assert_eq!(ns.dim(), 1);
        let v = ns.basis().column(0);
        assert!(v[0].norm() < 1e-14);
        assert!((v[1].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wide_matrix_null_space() {
        let m = c(1, 3, &[1., 1., 1.]);
        let ns = null_space(&m, 1e-8);
        assert_eq!(ns.dim(), 2);
        assert!((m * ns.basis()).norm() < 1e-14);
    }

    #[test]
    fn marginal_flag_near_threshold() {
        let m = c(2, 2, &[1.0, 0.0, 0.0, 2e-8]);
        let d = rank_decision(&m, 1e-8);
        assert!(d.marginal);
        let m = c(2, 2, &[1.0, 0.0, 0.0, 1e-3]);
        assert!(!rank_decision(&m, 1e-8).marginal);
    }

    #[test]
    fn pseudo_solve_is_minimal_norm() {
        let m = c(2, 2, &[0., 0., -1., 0.]);
        let b = CVec::from_vec(vec![crate::numlin::ZERO, crate::numlin::ONE]);
        let x = pseudo_solve(&m, &b, 1e-8);
        assert!((x[0].re + 1.0).abs() < 1e-14);
        assert!(x[1].norm() < 1e-14);
    }
}
