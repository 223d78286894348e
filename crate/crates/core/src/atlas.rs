//! Eigenspaces of `I_N ⊗ A + L ⊗ H` assembled from chains of `L` and
//! generalized chains of `A + lambda H` about `H`.
//!
//! For a chain `t^1..t^alpha` of `L` at `lambda` and a generalized chain
//! `xi^1..xi^theta` of `A + lambda H` at `mu`, every
//! `eta^k = sum_{m=1..k} t^{k-m+1} ⊗ xi^m`, `k <= min(alpha, theta)`, is an
//! eigenvector of the network matrix at `mu`. Summing the spans over all
//! pairs sharing `mu` gives the whole eigenspace.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::jordan::{generalized_chains, jordan_chains, JordanChain};
use crate::numlin::{
    cluster_eigenvalues, cmp_complex, eig, kron_vec, max_principal_angle, sum, to_complex,
    CMat, CVec, RMat, Subspace,
};

/// Eigenvalues of different `A + lambda H` closer than this (relative) are
/// treated as one eigenvalue of the network matrix.
pub const MU_LINK: f64 = 1e-6;
/// Largest principal angle tolerated between atlas and direct eigenspaces.
pub const AGREEMENT_ANGLE: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct AtlasEntry {
    /// Index of `lambda` among the distinct eigenvalues of `L`.
    pub lambda_index: usize,
    pub lambda: Complex64,
    /// Which Jordan chain of `L` at `lambda` this entry uses.
    pub chain_index: usize,
    pub mu: Complex64,
    pub alpha: usize,
    pub theta: usize,
    pub gamma: usize,
    pub eta_vectors: Vec<CVec>,
    #[serde(skip)]
    pub space: Subspace,
    /// The generalized chain stopped at its length cap.
    pub truncated: bool,
    pub boundary: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaSet {
    pub mu: Complex64,
    /// Indices into [`Atlas::entries`].
    pub entries: Vec<usize>,
    /// The spans of these entries are not independent.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Atlas {
    pub ambient_dim: usize,
    pub entries: Vec<AtlasEntry>,
    pub gamma_index: Vec<GammaSet>,
    #[serde(skip)]
    pub tol: f64,
}

impl Atlas {
    pub fn is_degenerate(&self) -> bool {
        self.gamma_index.iter().any(|g| g.degenerate)
    }

    pub fn has_boundary_chain(&self) -> bool {
        self.entries.iter().any(|e| e.boundary)
    }

    /// The index set for `mu`, if `mu` matches some atlas eigenvalue.
    pub fn gamma(&self, mu: Complex64) -> Option<&GammaSet> {
        let scale = self
            .gamma_index
            .iter()
            .map(|g| g.mu.norm())
            .fold(mu.norm().max(1.0), f64::max);
        self.gamma_index
            .iter()
            .filter(|g| (g.mu - mu).norm() <= MU_LINK * scale)
            .min_by(|a, b| (a.mu - mu).norm().total_cmp(&(b.mu - mu).norm()))
    }

    pub fn mus(&self) -> Vec<Complex64> {
        self.gamma_index.iter().map(|g| g.mu).collect()
    }
}

fn eta_vectors(chain: &JordanChain, xi: &[CVec], gamma: usize) -> Vec<CVec> {
    (1..=gamma)
        .map(|k| {
            (1..=k)
                .map(|m| kron_vec(&chain.vectors[k - m], &xi[m - 1]))
                .reduce(|acc, v| acc + v)
                .expect("k >= 1")
        })
        .collect()
}

/// Pair every Jordan chain of `L` with every generalized chain of
/// `A + lambda H` at the same `lambda`.
///
/// Generalized chains are capped at the longest Jordan chain of `L` at
/// `lambda`, since no entry can use more vectors than that.
pub fn build_atlas(l: &RMat, a: &RMat, h: &RMat, tol: f64) -> Result<Atlas> {
    let nodes = l.nrows();
    let n = a.nrows();
    let chains = jordan_chains(&to_complex(l), tol)?;
    let mut entries: Vec<AtlasEntry> = Vec::new();
    let mut lambda_index = 0;
    let mut start = 0;
    while start < chains.len() {
        let lambda = chains[start].eigenvalue;
        let end = start + chains[start..].iter().take_while(|c| c.eigenvalue == lambda).count();
        let group = &chains[start..end];
        let cap = group.iter().map(JordanChain::len).max().unwrap_or(1);
        let gen = generalized_chains(a, h, lambda, tol, cap)?;
        for (chain_index, chain) in group.iter().enumerate() {
            for g in &gen {
                let gamma = chain.len().min(g.len());
                let eta = eta_vectors(chain, &g.vectors, gamma);
                let space = Subspace::spanned_by(&CMat::from_columns(&eta), tol);
                entries.push(AtlasEntry {
                    lambda_index,
                    lambda,
                    chain_index,
                    mu: g.eigenvalue,
                    alpha: chain.len(),
                    theta: g.len(),
                    gamma,
                    eta_vectors: eta,
                    space,
                    truncated: g.truncated,
                    boundary: g.boundary,
                });
            }
        }
        lambda_index += 1;
        start = end;
    }

    let mus: Vec<Complex64> = entries.iter().map(|e| e.mu).collect();
    let mut gamma_index: Vec<GammaSet> = cluster_eigenvalues(&mus, MU_LINK)
        .into_iter()
        .map(|cl| {
            let total: usize = cl.members.iter().map(|&i| entries[i].gamma).sum();
            let span = cl
                .members
                .iter()
                .fold(Subspace::zero(nodes * n, tol), |acc, &i| sum(&acc, &entries[i].space));
            GammaSet {
                mu: cl.representative,
                degenerate: span.dim() != total,
                entries: cl.members,
            }
        })
        .collect();
    gamma_index.sort_by(|x, y| cmp_complex(&x.mu, &y.mu));
    Ok(Atlas {
        ambient_dim: nodes * n,
        entries,
        gamma_index,
        tol,
    })
}

/// `⊕_{(i,j) in Gamma(mu)} V_ij`, or `{0}` when `mu` is not an atlas eigenvalue.
pub fn atlas_eigenspace(atlas: &Atlas, mu: Complex64) -> Subspace {
    let zero = Subspace::zero(atlas.ambient_dim, atlas.tol);
    match atlas.gamma(mu) {
        None => zero,
        Some(g) => g
            .entries
            .iter()
            .fold(zero, |acc, &i| sum(&acc, &atlas.entries[i].space)),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AgreementRow {
    pub mu: Complex64,
    pub direct_dim: usize,
    pub atlas_dim: usize,
    pub max_angle: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub rows: Vec<AgreementRow>,
    /// Atlas eigenvalues with no counterpart in the direct spectrum.
    pub unmatched: Vec<Complex64>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.unmatched.is_empty() && self.rows.iter().all(|r| r.agrees)
    }
}

/// Compare every atlas eigenspace with the null space of `mu I - phi`.
pub fn atlas_agreement(atlas: &Atlas, phi: &RMat, tol: f64) -> Result<AgreementReport> {
    let es = eig(&to_complex(phi), tol)?;
    let mut rows = Vec::new();
    for entry in &es.eigs {
        let from_atlas = atlas_eigenspace(atlas, entry.value);
        let same_dim = from_atlas.dim() == entry.eigenspace.dim();
        let max_angle = if same_dim {
            max_principal_angle(&from_atlas, &entry.eigenspace)
        } else {
            std::f64::consts::FRAC_PI_2
        };
        rows.push(AgreementRow {
            mu: entry.value,
            direct_dim: entry.eigenspace.dim(),
            atlas_dim: from_atlas.dim(),
            max_angle,
            agrees: same_dim && max_angle <= AGREEMENT_ANGLE,
        });
    }
    let direct = es.values();
    let unmatched = atlas
        .mus()
        .into_iter()
        .filter(|mu| {
            let scale = mu.norm().max(1.0);
            !direct.iter().any(|d| (d - mu).norm() <= MU_LINK * scale.max(d.norm()))
        })
        .collect();
    Ok(AgreementReport { rows, unmatched })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::assemble;
    use crate::numlin::{subspace_eq, ONE, ZERO};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn e(n: usize, i: usize) -> CVec {
        let mut v = CVec::from_element(n, ZERO);
        v[i] = ONE;
        v
    }

    fn span(vs: &[CVec]) -> Subspace {
        Subspace::spanned_by(&CMat::from_columns(vs), 1e-8)
    }

    #[test]
    fn example2_original_entries() {
        let s = fixtures::example2();
        let atlas = build_atlas(&s.l, &s.a, &s.h, 1e-8).unwrap();
        assert_eq!(atlas.entries.len(), 3);
        let e2 = e(2, 1);
        let cases = [
            (1.0, kron_vec(&(e(3, 0) - e(3, 2)), &e2)),
            (2.0, kron_vec(&(e(3, 1) + e(3, 2)), &e2)),
            (0.0, kron_vec(&(e(3, 1) - e(3, 2)), &e2)),
        ];
        for (mu, v) in cases {
            let s_mu = atlas_eigenspace(&atlas, c(mu));
            assert!(subspace_eq(&s_mu, &span(&[v]), 1e-6), "mu = {mu}");
        }
    }

    #[test]
    fn example2_modified_entry() {
        let s = fixtures::example2();
        let atlas = build_atlas(&s.l_bar, &s.a, &s.h, 1e-8).unwrap();
        assert_eq!(atlas.entries.len(), 1);
        let entry = &atlas.entries[0];
        assert_eq!((entry.alpha, entry.theta, entry.gamma), (3, 2, 2));
        let expected = span(&[
            kron_vec(&e(3, 2), &e(2, 1)),
            kron_vec(&e(3, 1), &e(2, 1)) - kron_vec(&e(3, 2), &e(2, 0)),
        ]);
        assert!(subspace_eq(&atlas_eigenspace(&atlas, c(1.0)), &expected, 1e-6));
    }

    #[test]
    fn zero_topology_replicates_node_eigenstructure() {
        let s = fixtures::example2();
        let a = RMat::from_row_slice(2, 2, &[1., 0., 0., 3.]);
        let atlas = build_atlas(&RMat::zeros(3, 3), &a, &s.h, 1e-8).unwrap();
        assert_eq!(atlas.gamma_index.len(), 2);
        assert!(atlas.gamma_index.iter().all(|g| g.entries.len() == 3));
        assert_eq!(atlas_eigenspace(&atlas, c(3.0)).dim(), 3);
    }

    #[test]
    fn non_eigenvalue_is_zero_subspace() {
        let s = fixtures::example2();
        let atlas = build_atlas(&s.l, &s.a, &s.h, 1e-8).unwrap();
        assert!(atlas_eigenspace(&atlas, c(7.5)).is_zero());
    }

    #[test]
    fn example1_atlas_matches_direct() {
        let s = fixtures::example1();
        let p = assemble(&s).unwrap();
        for (l, phi) in [(&s.l, &p.phi), (&s.l_bar, &p.phi_bar)] {
            let atlas = build_atlas(l, &s.a, &s.h, 1e-8).unwrap();
            assert_eq!(atlas_eigenspace(&atlas, c(2.0)).dim(), 4);
            let rep = atlas_agreement(&atlas, phi, 1e-8).unwrap();
            assert!(rep.agrees(), "{rep:#?}");
        }
    }

    #[test]
    fn first_eta_is_an_eigenvector() {
        for s in [fixtures::example1(), fixtures::example2(), fixtures::example3()] {
            let p = assemble(&s).unwrap();
            let phi = to_complex(&p.phi);
            let atlas = build_atlas(&s.l, &s.a, &s.h, 1e-8).unwrap();
            let norm = crate::numlin::spectral_norm(&phi);
            for entry in &atlas.entries {
                for eta in &entry.eta_vectors {
                    let r = (&phi * eta - eta * entry.mu).norm();
                    assert!(r <= 1e-8 * norm * eta.norm().max(1.0), "residual {r}");
                }
            }
        }
    }
}
