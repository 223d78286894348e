use super::rank::{null_space, range_scaled, singular_values, spectral_norm};
use super::{hstack, CMat, CVec};

/// A complex linear subspace held as an orthonormal column basis.
///
/// `tol` records the rank tolerance used when the basis was computed. The
/// zero subspace has a basis with no columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMat,
    tol: f64,
    marginal: bool,
}

impl Subspace {
    pub(crate) fn from_parts(basis: CMat, tol: f64, marginal: bool) -> Self {
        Self {
            basis,
            tol,
            marginal,
        }
    }

    pub fn zero(ambient_dim: usize, tol: f64) -> Self {
        Self::from_parts(CMat::zeros(ambient_dim, 0), tol, false)
    }

    pub fn full(ambient_dim: usize, tol: f64) -> Self {
        Self::from_parts(CMat::identity(ambient_dim, ambient_dim), tol, false)
    }

    /// Span of the columns of `vectors`, orthonormalised at tolerance `tol`.
    pub fn spanned_by(vectors: &CMat, tol: f64) -> Self {
        super::range(vectors, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// True when some rank decision behind this basis was near its threshold.
    pub fn is_marginal(&self) -> bool {
        self.marginal
    }

    pub(crate) fn with_marginal(mut self, marginal: bool) -> Self {
        self.marginal |= marginal;
        self
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &CVec) -> CVec {
        &self.basis * (self.basis.adjoint() * x)
    }

    /// Projector onto the orthogonal complement, as a dense matrix.
    pub fn complement_projector(&self) -> CMat {
        let n = self.ambient_dim();
        CMat::identity(n, n) - &self.basis * self.basis.adjoint()
    }
}

fn check_ambient(u: &Subspace, v: &Subspace) {
    assert_eq!(
        u.ambient_dim(),
        v.ambient_dim(),
        "subspaces live in different ambient spaces"
    );
}

/// `U ∩ V`.
///
/// The dimension is `dim U + dim V - rank [Q_U Q_V]`; the basis comes from
/// the null space of `[Q_U, -Q_V]`, i.e. the principal vectors with unit
/// cosine.
pub fn intersect(u: &Subspace, v: &Subspace) -> Subspace {
    check_ambient(u, v);
    let tol = u.tol.max(v.tol);
    let marginal = u.marginal || v.marginal;
    if u.is_zero() || v.is_zero() {
        return Subspace::zero(u.ambient_dim(), tol).with_marginal(marginal);
    }
    let k = hstack(&u.basis, &(-&v.basis));
    let z = null_space(&k, tol);
    let d = z.dim();
    if d == 0 {
        return Subspace::zero(u.ambient_dim(), tol).with_marginal(marginal || z.marginal);
    }
    let coeffs = z.basis.rows(0, u.dim()).into_owned();
    let w = &u.basis * coeffs;
    let svd = w.svd(true, false);
    let left = svd.u.expect("left vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut basis = CMat::zeros(u.ambient_dim(), d);
    for (dst, &src) in order.iter().take(d).enumerate() {
        basis.set_column(dst, &left.column(src));
    }
    Subspace::from_parts(basis, tol, marginal || z.marginal)
}

/// `U + V`, the range of the concatenated bases.
pub fn sum(u: &Subspace, v: &Subspace) -> Subspace {
    check_ambient(u, v);
    let tol = u.tol.max(v.tol);
    let marginal = u.marginal || v.marginal;
    if v.is_zero() {
        return u.clone().with_marginal(marginal);
    }
    if u.is_zero() {
        return v.clone().with_marginal(marginal);
    }
    let k = hstack(&u.basis, &v.basis);
    let scale = spectral_norm(&k);
    range_scaled(&k, tol, scale).with_marginal(marginal)
}

pub fn is_direct_sum(u: &Subspace, v: &Subspace) -> bool {
    intersect(u, v).is_zero()
}

/// `{ m u : u in U }`.
///
/// The rank decision is scaled by `||m||`, not by `||m Q_U||`, so that an
/// eigenspace lying numerically inside the kernel of `m` maps to `{0}`.
pub fn image(m: &CMat, u: &Subspace, tol: f64) -> Subspace {
    assert_eq!(m.ncols(), u.ambient_dim(), "image: column mismatch");
    if u.is_zero() {
        return Subspace::zero(m.nrows(), tol).with_marginal(u.marginal);
    }
    let w = m * &u.basis;
    let scale = spectral_norm(m);
    // `range_scaled` multiplies by max(rows, cols) of `w`; use the operator's
    // dimensions instead.
    let dims = m.nrows().max(m.ncols()) as f64 / w.nrows().max(w.ncols()) as f64;
    range_scaled(&w, tol, scale * dims).with_marginal(u.marginal)
}

/// Principal angles between `U` and `V` in increasing order
/// (`min(dim U, dim V)` values).
pub fn principal_angles(u: &Subspace, v: &Subspace) -> Vec<f64> {
    check_ambient(u, v);
    let (a, b) = if u.dim() >= v.dim() { (u, v) } else { (v, u) };
    let k = b.dim();
    if k == 0 {
        return Vec::new();
    }
    let cosines = singular_values(&(a.basis.adjoint() * &b.basis));
    let residual = &b.basis - &a.basis * (a.basis.adjoint() * &b.basis);
    let mut sines = singular_values(&residual);
    sines.reverse();
    (0..k)
        .map(|i| {
            let s = sines.get(i).copied().unwrap_or(0.0);
            let c = cosines.get(i).copied().unwrap_or(0.0);
            s.atan2(c)
        })
        .collect()
}

pub fn max_principal_angle(u: &Subspace, v: &Subspace) -> f64 {
    principal_angles(u, v).last().copied().unwrap_or(0.0)
}

/// Same dimension and every principal angle at most `angle_tol`.
pub fn subspace_eq(u: &Subspace, v: &Subspace, angle_tol: f64) -> bool {
    u.dim() == v.dim() && max_principal_angle(u, v) <= angle_tol
}

/// Angle between a nonzero vector and a subspace (`pi/2` for `{0}`).
pub fn vector_angle(x: &CVec, u: &Subspace) -> f64 {
    let norm = x.norm();
    if norm == 0.0 {
        return 0.0;
    }
    if u.is_zero() {
        return std::f64::consts::FRAC_PI_2;
    }
    let inside = u.project(x).norm();
    let outside = (x - u.project(x)).norm();
    outside.atan2(inside)
}
