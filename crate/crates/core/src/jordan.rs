//! Jordan chains of the topology matrix and generalized chains of
//! `A + lambda H` about `H`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numlin::{
    eig, eig_with_scale, nested_kernels, null_space_scaled, operator_scale, shift, spectral_norm,
    sum, to_complex, truncated_svd, CMat, CVec, RMat, Subspace, ZERO,
};

/// Relative residual above which a chain extension step is rejected.
pub const CHAIN_RESIDUAL_TOL: f64 = 1e-6;
/// Residuals in this band are accepted or rejected but reported as boundary cases.
const BOUNDARY_BAND: (f64, f64) = (1e-7, 1e-5);
/// A new chain top must stand this far out of the span already claimed.
const TOP_SEPARATION: f64 = 1e-6;

/// `t^1 .. t^alpha` with `(M - lambda I) t^1 = 0` and
/// `(M - lambda I) t^{k+1} = t^k`. `vectors[0]` is the eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanChain {
    pub eigenvalue: Complex64,
    pub vectors: Vec<CVec>,
}

impl JordanChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// `xi^1 .. xi^theta` with `(mu I - A') xi^1 = 0` and
/// `(mu I - A') xi^{i+1} = H xi^i`, where `A' = A + lambda H`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedChain {
    pub eigenvalue: Complex64,
    pub vectors: Vec<CVec>,
    /// Extension stopped at the length cap, not at an inconsistent step.
    pub truncated: bool,
    /// Some step's relative residual fell close to the acceptance threshold.
    pub boundary: bool,
}

impl GeneralizedChain {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Rotate `v` so its largest-magnitude entry is real and positive.
pub(crate) fn normalize_phase(v: &mut CVec) {
    let Some(k) = (0..v.len()).max_by(|&i, &j| v[i].norm().total_cmp(&v[j].norm())) else {
        return;
    };
    let z = v[k];
    if z.norm() > 0.0 {
        let rot = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= rot);
    }
}

/// Leading `count` left singular vectors of `(I - P_claimed) Q`, erroring if
/// the last one is not clearly separated from the claimed span.
fn pick_new(
    basis: &CMat,
    claimed: &Subspace,
    count: usize,
    lambda: Complex64,
) -> Result<Vec<CVec>> {
    let residual = claimed.complement_projector() * basis;
    let (u, s, _) = truncated_svd(&residual, count);
    if s.len() < count || s.last().is_some_and(|&x| x < TOP_SEPARATION) {
        return Err(Error::RankInstability {
            lambda,
            detail: "chain tops are not separated from the span already claimed".into(),
        });
    }
    Ok(u.column_iter()
        .map(|c| {
            let mut v = c.into_owned();
            normalize_phase(&mut v);
            v
        })
        .collect())
}

/// One chain per Jordan block, grouped by eigenvalue in the order of
/// [`eig`]. Vector counts per eigenvalue add up to its algebraic multiplicity.
pub fn jordan_chains(m: &CMat, tol: f64) -> Result<Vec<JordanChain>> {
    let es = eig(m, tol)?;
    let mut chains = Vec::new();
    for entry in &es.eigs {
        let lambda = entry.value;
        let alg = entry.algebraic_multiplicity;
        let levels = nested_kernels(m, lambda, tol, alg);
        let dims: Vec<usize> = levels.iter().map(Subspace::dim).collect();
        if dims.last() != Some(&alg) || dims.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::RankInstability {
                lambda,
                detail: format!(
                    "nested kernel dimensions {dims:?} do not reach algebraic multiplicity {alg}"
                ),
            });
        }
        let step = shift(m, lambda);
        let n = m.nrows();
        // Chains under construction, stored highest-order vector first.
        let mut building: Vec<Vec<CVec>> = Vec::new();
        let mut front: Vec<(usize, CVec)> = Vec::new();
        for j in (0..levels.len()).rev() {
            let below = if j == 0 { 0 } else { dims[j - 1] };
            let new_count = (dims[j] - below).checked_sub(front.len()).ok_or_else(|| {
                Error::RankInstability {
                    lambda,
                    detail: "more chains continue into a level than it can hold".into(),
                }
            })?;
            if new_count > 0 {
                let mut claimed = if j == 0 {
                    Subspace::zero(n, tol)
                } else {
                    levels[j - 1].clone()
                };
                if !front.is_empty() {
                    let cols: Vec<CVec> = front.iter().map(|(_, v)| v.clone()).collect();
                    let fm = CMat::from_columns(&cols);
                    claimed = sum(&claimed, &Subspace::spanned_by(&fm, tol));
                }
                for v in pick_new(levels[j].basis(), &claimed, new_count, lambda)? {
                    building.push(Vec::new());
                    front.push((building.len() - 1, v));
                }
            }
            for (idx, v) in &front {
                building[*idx].push(v.clone());
            }
            front = front.into_iter().map(|(idx, v)| (idx, &step * v)).collect();
        }
        for mut vectors in building {
            vectors.reverse();
            chains.push(JordanChain {
                eigenvalue: lambda,
                vectors,
            });
        }
    }
    Ok(chains)
}

/// `dim S(mu | m)`: zero when `mu` is not an eigenvalue.
pub fn geometric_multiplicity(m: &CMat, mu: Complex64, tol: f64) -> usize {
    null_space_scaled(&shift(m, mu), tol, operator_scale(m, mu)).dim()
}

/// Generalized chains of `A + lambda H` about `H`, one per independent
/// eigenvector, for every eigenvalue of `A + lambda H`.
///
/// Each extension is the minimal-norm solution; its component in the
/// eigenspace is zero. Chain tops are chosen so that the ones extending
/// furthest come first, and no chain grows beyond `cap` vectors.
pub fn generalized_chains(
    a: &RMat,
    h: &RMat,
    lambda: Complex64,
    tol: f64,
    cap: usize,
) -> Result<Vec<GeneralizedChain>> {
    if cap == 0 {
        return Err(Error::InvalidInput("chain length cap must be at least 1".into()));
    }
    if a.shape() != h.shape() || a.nrows() != a.ncols() {
        return Err(crate::error::mismatch(
            "generalized_chains",
            format!("{0}x{0} A and H", a.nrows()),
            format!("{:?} and {:?}", a.shape(), h.shape()),
        ));
    }
    let hc = to_complex(h);
    let shifted = to_complex(a) + &hc * lambda;
    let n = a.nrows();
    let h_norm = spectral_norm(&hc);
    let es = eig_with_scale(&shifted, tol, spectral_norm(&to_complex(a)) + lambda.norm() * h_norm)?;
    let mut out = Vec::new();
    for entry in &es.eigs {
        let mu = entry.value;
        let b = -shift(&shifted, mu);
        let g = entry.geometric_multiplicity;
        let (u_r, s_r, v_r) = truncated_svd(&b, n - g);
        let b_pinv = &v_r
            * CMat::from_diagonal(&nalgebra::DVector::from_iterator(
                s_r.len(),
                s_r.iter().map(|&x| Complex64::new(1.0 / x, 0.0)),
            ))
            * u_r.adjoint();
        let off_range = CMat::identity(n, n) - &u_r * u_r.adjoint();

        let tops = ordered_tops(entry.eigenspace.basis(), &hc, &b_pinv, &off_range, h_norm, cap);
        for top in tops {
            out.push(extend_chain(mu, top, &hc, &b_pinv, &off_range, cap));
        }
    }
    Ok(out)
}

/// Orthonormal eigenspace basis adapted to the nest
/// `E_0 ⊇ E_1 ⊇ ...`, where `E_k` holds the tops whose minimal-norm chain
/// survives `k` extension steps. Deepest tops come first.
fn ordered_tops(
    eigenspace: &CMat,
    hc: &CMat,
    b_pinv: &CMat,
    off_range: &CMat,
    h_norm: f64,
    cap: usize,
) -> Vec<CVec> {
    let n = eigenspace.nrows();
    let g = eigenspace.ncols();
    let mut nest: Vec<Subspace> = vec![Subspace::full(g, CHAIN_RESIDUAL_TOL)];
    let mut x = eigenspace.clone();
    let mut conditions = CMat::zeros(0, g);
    for _ in 1..cap {
        let hx = hc * &x;
        let scale = h_norm * spectral_norm(&x);
        if scale == 0.0 {
            break;
        }
        conditions = crate::numlin::vstack(&conditions, &(off_range * &hx / Complex64::new(scale, 0.0)));
        let next = null_space_scaled(&conditions, CHAIN_RESIDUAL_TOL / n.max(g) as f64, 1.0);
        x = b_pinv * hx;
        if next.dim() < nest.last().map_or(g, Subspace::dim) {
            if next.is_zero() {
                break;
            }
            nest.push(next);
        }
    }
    let mut coeffs: Vec<CVec> = Vec::with_capacity(g);
    let mut claimed = Subspace::zero(g, CHAIN_RESIDUAL_TOL);
    for level in nest.iter().rev() {
        let count = level.dim().saturating_sub(claimed.dim());
        if count == 0 {
            continue;
        }
        let residual = claimed.complement_projector() * level.basis();
        let (u, _, _) = truncated_svd(&residual, count);
        coeffs.extend(u.column_iter().map(|c| c.into_owned()));
        claimed = Subspace::spanned_by(&CMat::from_columns(&coeffs), CHAIN_RESIDUAL_TOL);
    }
    coeffs
        .into_iter()
        .map(|c| {
            let mut v = eigenspace * c;
            normalize_phase(&mut v);
            v
        })
        .collect()
}

fn extend_chain(
    mu: Complex64,
    top: CVec,
    hc: &CMat,
    b_pinv: &CMat,
    off_range: &CMat,
    cap: usize,
) -> GeneralizedChain {
    let h_norm = spectral_norm(hc);
    let mut vectors = vec![top];
    let mut boundary = false;
    while vectors.len() < cap {
        let last = vectors.last().expect("chain is never empty");
        let rhs = hc * last;
        let reference = rhs.norm().max(h_norm * last.norm() * f64::EPSILON);
        if rhs.norm() <= h_norm * last.norm() * 1e-14 {
            // H annihilates the last vector: the zero continuation is exact.
            vectors.push(CVec::from_element(last.len(), ZERO));
            continue;
        }
        let rel = (off_range * &rhs).norm() / reference;
        if rel >= BOUNDARY_BAND.0 && rel <= BOUNDARY_BAND.1 {
            boundary = true;
        }
        if rel > CHAIN_RESIDUAL_TOL {
            return GeneralizedChain {
                eigenvalue: mu,
                vectors,
                truncated: false,
                boundary,
            };
        }
        vectors.push(b_pinv * rhs);
    }
    GeneralizedChain {
        eigenvalue: mu,
        vectors,
        truncated: true,
        boundary,
    }
}
