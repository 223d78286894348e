//! Dense complex linear algebra used by every discernibility condition.
//!
//! All rank decisions go through [`rank_decision`] so that one tolerance
//! governs eigenspaces, null spaces, intersections and sums alike. Rank
//! decisions whose deciding singular value falls within a factor of ten of
//! the threshold are reported as *marginal* and propagate through
//! [`Subspace::is_marginal`].

mod eigen;
mod expm;
mod rank;
mod subspace;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use eigen::{
    cluster_eigenvalues, eig, eig_with_scale, nested_kernels, operator_scale, raw_eigenvalues, Cluster, EigenEntry,
    EigenStructure,
};
pub use expm::expm;
pub use rank::{
    null_space, null_space_scaled, numerical_rank, pseudo_solve, range, range_scaled,
    rank_decision, rank_decision_scaled, singular_values, spectral_norm, truncated_svd,
    RankDecision,
};
pub use subspace::{
    image, intersect, is_direct_sum, max_principal_angle, principal_angles, subspace_eq, sum,
    vector_angle, Subspace,
};

/// Default relative tolerance for every rank decision.
pub const DEFAULT_TOL: f64 = 1e-8;

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;
pub type CVec = DVector<Complex64>;
pub type RVec = DVector<f64>;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
#[cfg(test)]
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn to_complex(m: &RMat) -> CMat {
    m.map(|x| Complex64::new(x, 0.0))
}

pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

pub fn is_real(m: &CMat) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// `m - mu * I` for square `m`.
pub fn shift(m: &CMat, mu: Complex64) -> CMat {
    let mut out = m.clone();
    for i in 0..m.nrows().min(m.ncols()) {
        out[(i, i)] -= mu;
    }
    out
}

/// `diag(a, b)` as a dense block matrix.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut out = CMat::zeros(ra + rb, ca + cb);
    out.view_mut((0, 0), (ra, ca)).copy_from(a);
    out.view_mut((ra, ca), (rb, cb)).copy_from(b);
    out
}

/// Stack `top` over `bottom`; both must have the same column count.
pub fn vstack(top: &CMat, bottom: &CMat) -> CMat {
    assert_eq!(top.ncols(), bottom.ncols(), "vstack: column mismatch");
    let mut out = CMat::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

/// Place `left` and `right` side by side; both must have the same row count.
pub fn hstack(left: &CMat, right: &CMat) -> CMat {
    assert_eq!(left.nrows(), right.nrows(), "hstack: row mismatch");
    let mut out = CMat::zeros(left.nrows(), left.ncols() + right.ncols());
    out.view_mut((0, 0), left.shape()).copy_from(left);
    out.view_mut((0, left.ncols()), right.shape()).copy_from(right);
    out
}

/// Kronecker product of two complex vectors.
pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let mut out = CVec::zeros(a.len() * b.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i * b.len() + j] = ai * bj;
        }
    }
    out
}

/// Total order on complex numbers used to make every listing deterministic.
pub fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}
