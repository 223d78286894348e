//! Seeded random network instances shared by the property and acceptance tests.
#![allow(dead_code)]

use netdiscern::model::NetworkSpec;
use netdiscern::numlin::RMat;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> RMat {
    RMat::from_fn(rows, cols, |_, _| rng.random_range(-2..=2) as f64)
}

fn off_diagonal(rng: &mut ChaCha8Rng, nodes: usize) -> RMat {
    let mut l = int_matrix(rng, nodes, nodes);
    l.fill_diagonal(0.0);
    l
}

fn sensors(rng: &mut ChaCha8Rng, nodes: usize) -> Vec<usize> {
    let k = rng.random_range(1..=nodes);
    let mut s: Vec<usize> = sample(rng, nodes, k).into_iter().map(|i| i + 1).collect();
    s.sort_unstable();
    s
}

/// Integer entries in [-2, 2]. Half of the modified graphs differ from the
/// original in a single edge weight, the rest are drawn independently.
pub fn random_network(rng: &mut ChaCha8Rng) -> NetworkSpec {
    let nodes = rng.random_range(2..=4);
    let n = rng.random_range(1..=3);
    let l = off_diagonal(rng, nodes);
    let l_bar = loop {
        let cand = if rng.random_bool(0.5) {
            let mut m = l.clone();
            let i = rng.random_range(0..nodes);
            let j = (i + rng.random_range(1..nodes)) % nodes;
            m[(i, j)] = rng.random_range(-2..=2) as f64;
            m
        } else {
            off_diagonal(rng, nodes)
        };
        if cand != l {
            break cand;
        }
    };
    let p = rng.random_range(1..=n);
    NetworkSpec {
        nodes,
        state_dim: n,
        output_dim: p,
        a: int_matrix(rng, n, n),
        h: int_matrix(rng, n, n),
        c: int_matrix(rng, p, n),
        l,
        l_bar,
        sensors: sensors(rng, nodes),
    }
}

/// As [`random_network`] but with symmetric, hence diagonalizable, graphs.
pub fn random_symmetric_network(rng: &mut ChaCha8Rng) -> NetworkSpec {
    let mut spec = random_network(rng);
    let sym = |m: &RMat| RMat::from_fn(m.nrows(), m.ncols(), |i, j| if i < j { m[(i, j)] } else { m[(j, i)] });
    spec.l = sym(&spec.l);
    spec.l_bar = sym(&spec.l_bar);
    if spec.l == spec.l_bar {
        spec.l_bar[(0, 1)] += 1.0;
        spec.l_bar[(1, 0)] += 1.0;
    }
    spec
}
