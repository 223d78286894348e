use nalgebra::Schur;
use num_complex::Complex64;

use super::rank::{null_space_scaled, rank_decision, spectral_norm};
use super::{cmp_complex, hstack, is_real, real_part, shift, CMat, CVec, Subspace};
use crate::error::{Error, Result};

/// A group of numerically coincident values.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Arithmetic mean of the members.
    pub representative: Complex64,
    /// Indices into the clustered input.
    pub members: Vec<usize>,
}

/// One distinct eigenvalue with its multiplicities and eigenspace.
#[derive(Debug, Clone)]
pub struct EigenEntry {
    pub value: Complex64,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub eigenspace: Subspace,
    /// Largest distance from a raw eigenvalue of the cluster to `value`.
    pub cluster_radius: f64,
}

#[derive(Debug, Clone)]
pub struct EigenStructure {
    pub matrix_dim: usize,
    pub eigs: Vec<EigenEntry>,
    pub tol: f64,
}

impl EigenStructure {
    /// Entry whose eigenvalue matches `mu` under the clustering rule.
    pub fn find(&self, mu: Complex64) -> Option<&EigenEntry> {
        let scale = 1.0_f64.max(mu.norm());
        self.eigs
            .iter()
            .filter(|e| (e.value - mu).norm() <= self.tol * scale.max(e.value.norm()))
            .min_by(|a, b| (a.value - mu).norm().total_cmp(&(b.value - mu).norm()))
    }

    pub fn geometric_multiplicity(&self, mu: Complex64) -> usize {
        self.find(mu).map_or(0, |e| e.geometric_multiplicity)
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.eigs.iter().map(|e| e.value).collect()
    }

    pub fn is_marginal(&self) -> bool {
        self.eigs.iter().any(|e| e.eigenspace.is_marginal())
    }
}

fn cluster_with_scale(values: &[Complex64], tol: f64, scale: f64) -> Vec<Cluster> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() <= tol * scale {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|members| {
            let total: Complex64 = members.iter().map(|&i| values[i]).sum();
            Cluster {
                representative: total / members.len() as f64,
                members,
            }
        })
        .collect();
    clusters.sort_by(|a, b| cmp_complex(&a.representative, &b.representative));
    clusters
}

/// Single-linkage clustering: two values share a cluster iff they are joined
/// by links of length at most `tol * max(1, max |value|)`.
pub fn cluster_eigenvalues(values: &[Complex64], tol: f64) -> Vec<Cluster> {
    let scale = values.iter().map(|z| z.norm()).fold(1.0_f64, f64::max);
    cluster_with_scale(values, tol, scale)
}

fn schur_real(m: &CMat, max_iter: usize) -> Option<Vec<Complex64>> {
    let schur = Schur::try_new(real_part(m), f64::EPSILON, max_iter)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}

fn schur_complex(m: &CMat, max_iter: usize) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let t = Schur::try_new(m.clone(), f64::EPSILON, max_iter)?.unpack().1;
    Some((0..n).map(|i| t[(i, i)]).collect())
}

/// Householder reflector `I - 2 w w^H` for a fixed, non-symmetric `w`.
fn fixed_reflector(n: usize) -> CMat {
    let w = CVec::from_iterator(n, (0..n).map(|i| Complex64::new(1.0 + 0.37 * i as f64, 0.0)));
    let w = &w / Complex64::new(w.norm(), 0.0);
    CMat::identity(n, n) - (&w * w.adjoint()) * Complex64::new(2.0, 0.0)
}

/// Eigenvalues straight from the Schur form, with multiplicity.
///
/// The QR iteration can stall on exactly structured inputs such as nilpotent
/// shift matrices; it is then retried on a fixed orthogonal similarity of `m`.
pub fn raw_eigenvalues(m: &CMat) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let max_iter = 1000 * n.max(10);
    let direct = if is_real(m) {
        schur_real(m, max_iter).or_else(|| schur_complex(m, max_iter))
    } else {
        schur_complex(m, max_iter)
    };
    if let Some(v) = direct {
        return Ok(v);
    }
    let q = fixed_reflector(n);
    let similar = &q * m * &q;
    let retry = if is_real(m) {
        schur_real(&similar, max_iter)
    } else {
        None
    };
    retry
        .or_else(|| schur_complex(&similar, max_iter))
        .ok_or_else(|| Error::NoConvergence {
            what: format!("{} {n}x{n} matrix", if is_real(m) { "real" } else { "complex" }),
        })
}

/// Magnitude scale for rank decisions on `m - mu I`.
pub fn operator_scale(m: &CMat, mu: Complex64) -> f64 {
    spectral_norm(m).max(mu.norm())
}

/// Nested kernels `N_1 ⊂ N_2 ⊂ ...` of `m - mu I`, where
/// `N_{j+1} = { x : (m - mu I) x ∈ N_j }`.
///
/// Every level is computed as a null space of a matrix of the same magnitude
/// as `m - mu I`, so no matrix powers are formed. Iteration stops when the
/// dimension stops growing or after `max_levels` levels.
pub fn nested_kernels(m: &CMat, mu: Complex64, tol: f64, max_levels: usize) -> Vec<Subspace> {
    let b = shift(m, mu);
    let scale = operator_scale(m, mu);
    let mut levels: Vec<Subspace> = Vec::new();
    let mut current = null_space_scaled(&b, tol, scale);
    while !current.is_zero() && levels.len() < max_levels {
        let grew = levels.last().map_or(true, |p| current.dim() > p.dim());
        if !grew {
            break;
        }
        let next_op = current.complement_projector() * &b;
        let next = null_space_scaled(&next_op, tol, scale);
        levels.push(current);
        current = next;
    }
    levels
}

const CONSISTENCY_TOL: f64 = 1e-6;
const COARSE_LINK: f64 = 0.1;
const LADDER: [f64; 9] = [0.0, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 3e-2, COARSE_LINK];

/// Split one coarse group of raw eigenvalues into clusters whose sizes match
/// the dimensions of the corresponding generalized eigenspaces.
///
/// Eigenvalues of a nontrivial Jordan block scatter on a circle of radius
/// about `eps^(1/k)`, so the link length is raised rung by rung until the
/// clustering is consistent with the rank structure of `m`.
fn refine_group(
    m: &CMat,
    values: &[Complex64],
    tol: f64,
    scale: f64,
) -> Result<Vec<(Complex64, usize, f64)>> {
    let rungs = std::iter::once(tol).chain(LADDER.iter().copied().filter(|&r| r > tol));
    for rung in rungs {
        let clusters = cluster_with_scale(values, rung, scale);
        let mut bases = Vec::with_capacity(clusters.len());
        let mut consistent = true;
        for c in &clusters {
            let k = c.members.len();
            let kernels = nested_kernels(m, c.representative, tol, k + 1);
            match kernels.last() {
                Some(g) if g.dim() == k => bases.push(g.basis().clone()),
                _ => {
                    consistent = false;
                    break;
                }
            }
        }
        if !consistent {
            continue;
        }
        let stacked = bases
            .iter()
            .skip(1)
            .fold(bases[0].clone(), |acc, b| hstack(&acc, b));
        if rank_decision(&stacked, CONSISTENCY_TOL).rank != values.len() {
            continue;
        }
        return Ok(clusters
            .into_iter()
            .map(|c| {
                let radius = c
                    .members
                    .iter()
                    .map(|&i| (values[i] - c.representative).norm())
                    .fold(0.0, f64::max);
                (c.representative, c.members.len(), radius)
            })
            .collect());
    }
    let total: Complex64 = values.iter().sum();
    Err(Error::RankInstability {
        lambda: total / values.len() as f64,
        detail: format!(
            "no clustering of {} nearby eigenvalues matches the generalized eigenspace dimensions",
            values.len()
        ),
    })
}

fn snap(z: Complex64, scale: f64) -> Complex64 {
    let cut = 1e-13 * scale;
    Complex64::new(
        if z.re.abs() < cut { 0.0 } else { z.re },
        if z.im.abs() < cut { 0.0 } else { z.im },
    )
}

/// Distinct eigenvalues of `m` with algebraic and geometric multiplicities.
///
/// Raw Schur eigenvalues are clustered; near-coincident groups are refined so
/// that each cluster size equals the dimension of its generalized eigenspace.
/// Each eigenspace is then the null space of `mu I - m` at tolerance `tol`,
/// so multiplicity and basis come from one rank decision.
pub fn eig(m: &CMat, tol: f64) -> Result<EigenStructure> {
    eig_with_scale(m, tol, 0.0)
}

/// [`eig`] with a lower bound on the magnitude scale of every rank decision.
///
/// Use it when `m` is a sum whose terms may cancel, such as `A + lambda H`:
/// rounding residue in a cancelled matrix must still be judged against the
/// size of the terms.
pub fn eig_with_scale(m: &CMat, tol: f64, floor: f64) -> Result<EigenStructure> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(crate::error::mismatch("eig", "square matrix", format!("{n}x{}", m.ncols())));
    }
    let raw = raw_eigenvalues(m)?;
    let scale = raw.iter().map(|z| z.norm()).fold(floor.max(1.0), f64::max);
    let coarse = cluster_with_scale(&raw, COARSE_LINK, scale);
    let mut found: Vec<(Complex64, usize, f64)> = Vec::new();
    for group in coarse {
        if group.members.len() == 1 {
            found.push((group.representative, 1, 0.0));
            continue;
        }
        let values: Vec<Complex64> = group.members.iter().map(|&i| raw[i]).collect();
        found.extend(refine_group(m, &values, tol, scale)?);
    }
    let mut eigs = Vec::with_capacity(found.len());
    for (value, algebraic, radius) in found {
        let value = snap(value, scale);
        let eigenspace = null_space_scaled(&shift(m, value), tol, operator_scale(m, value).max(floor));
        if eigenspace.is_zero() || eigenspace.dim() > algebraic {
            return Err(Error::RankInstability {
                lambda: value,
                detail: format!(
                    "eigenspace dimension {} inconsistent with algebraic multiplicity {algebraic}",
                    eigenspace.dim()
                ),
            });
        }
        eigs.push(EigenEntry {
            value,
            algebraic_multiplicity: algebraic,
            geometric_multiplicity: eigenspace.dim(),
            eigenspace,
            cluster_radius: radius,
        });
    }
    eigs.sort_by(|a, b| cmp_complex(&a.value, &b.value));
    Ok(EigenStructure {
        matrix_dim: n,
        eigs,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numlin::{to_complex, RMat};

    fn c(z: f64) -> Complex64 {
        Complex64::new(z, 0.0)
    }

    #[test]
    fn clustering_examples() {
        let cl = cluster_eigenvalues(&[c(1.0), c(1.0 + 1e-12), c(2.0)], 1e-9);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].members, vec![0, 1]);
        assert!(cluster_eigenvalues(&[], 1e-9).is_empty());

        let vals = [
            c(0.0),
            c(2.0),
            Complex64::new(1.0, 1.0),
            Complex64::new(1.0, -1.0),
            c(1.0),
            c(2.0),
        ];
        let cl = cluster_eigenvalues(&vals, 1e-9);
        assert_eq!(cl.len(), 5);
        let shared: Vec<_> = cl.iter().filter(|k| k.members.len() == 2).collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].representative, c(2.0));
    }

    #[test]
    fn clustering_is_single_linkage() {
        let cl = cluster_eigenvalues(&[c(0.0), c(0.6e-9), c(1.2e-9)], 1e-9);
        assert_eq!(cl.len(), 1);
    }

    #[test]
    fn triangular_matrix_eigenvalues() {
        let m = to_complex(&RMat::from_row_slice(2, 2, &[1., 1., 0., 2.]));
        let es = eig(&m, 1e-8).unwrap();
        assert_eq!(es.eigs.len(), 2);
        assert!((es.eigs[0].value - c(1.0)).norm() < 1e-12);
        assert!(es.eigs.iter().all(|e| e.geometric_multiplicity == 1));
    }

    #[test]
    fn nilpotent_shift_is_one_defective_eigenvalue() {
        let mut m = RMat::zeros(4, 4);
        for i in 1..4 {
            m[(i, i - 1)] = 1.0;
        }
        let es = eig(&to_complex(&m), 1e-8).unwrap();
        assert_eq!(es.eigs.len(), 1);
        assert_eq!(es.eigs[0].algebraic_multiplicity, 4);
        assert_eq!(es.eigs[0].geometric_multiplicity, 1);
        assert!(es.eigs[0].value.norm() < 1e-12);
    }

    #[test]
    fn nested_kernels_of_jordan_block() {
        let m = to_complex(&RMat::from_row_slice(3, 3, &[0., 0., 0., 1., 0., 0., 0., 1., 0.]));
        let dims: Vec<usize> = nested_kernels(&m, c(0.0), 1e-8, 10)
            .iter()
            .map(|s| s.dim())
            .collect();
        assert_eq!(dims, vec![1, 2, 3]);
    }

    #[test]
    fn identity_has_full_eigenspace() {
        let es = eig(&CMat::identity(3, 3), 1e-8).unwrap();
        assert_eq!(es.eigs.len(), 1);
        assert_eq!(es.eigs[0].geometric_multiplicity, 3);
    }
}
