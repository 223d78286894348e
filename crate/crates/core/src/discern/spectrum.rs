use num_complex::Complex64;

use crate::atlas::MU_LINK;
use crate::numlin::{cluster_eigenvalues, sum, EigenStructure, Subspace};

/// One eigenvalue of `Phi` or `Phi_bar` with both eigenspaces at it.
/// A side that does not have the eigenvalue contributes `{0}`.
#[derive(Debug, Clone)]
pub struct SpectrumRow {
    pub mu: Complex64,
    pub space: Subspace,
    pub space_bar: Subspace,
    /// Two eigenvalues of one side were merged into this row.
    pub merged: bool,
}

impl SpectrumRow {
    pub fn tau(&self) -> usize {
        self.space.dim()
    }

    pub fn tau_bar(&self) -> usize {
        self.space_bar.dim()
    }

    pub fn is_marginal(&self) -> bool {
        self.merged || self.space.is_marginal() || self.space_bar.is_marginal()
    }
}

/// Match two lists of `(eigenvalue, eigenspace)` by clustering the values.
pub(crate) fn match_spaces(
    left: Vec<(Complex64, Subspace)>,
    right: Vec<(Complex64, Subspace)>,
    ambient: usize,
    tol: f64,
) -> Vec<SpectrumRow> {
    let values: Vec<Complex64> = left.iter().chain(&right).map(|(v, _)| *v).collect();
    let split = left.len();
    let mut rows: Vec<SpectrumRow> = cluster_eigenvalues(&values, MU_LINK)
        .into_iter()
        .map(|cl| {
            let mut space = Subspace::zero(ambient, tol);
            let mut space_bar = Subspace::zero(ambient, tol);
            let (mut n_left, mut n_right) = (0, 0);
            for &i in &cl.members {
                if i < split {
                    space = sum(&space, &left[i].1);
                    n_left += 1;
                } else {
                    space_bar = sum(&space_bar, &right[i - split].1);
                    n_right += 1;
                }
            }
            SpectrumRow {
                mu: cl.representative,
                space,
                space_bar,
                merged: n_left > 1 || n_right > 1,
            }
        })
        .collect();
    rows.sort_by(|a, b| crate::numlin::cmp_complex(&a.mu, &b.mu));
    rows
}

/// `σ(Phi) ∪ σ(Phi_bar)` with eigenspaces from both sides.
pub fn union_spectrum(es: &EigenStructure, es_bar: &EigenStructure) -> Vec<SpectrumRow> {
    let take = |s: &EigenStructure| {
        s.eigs
            .iter()
            .map(|e| (e.value, e.eigenspace.clone()))
            .collect::<Vec<_>>()
    };
    match_spaces(take(es), take(es_bar), es.matrix_dim, es.tol)
}
