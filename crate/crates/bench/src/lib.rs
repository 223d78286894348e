//! Scalable network instances for the benchmarks.

use netdiscern::model::NetworkSpec;
use netdiscern::numlin::RMat;

/// Directed ring of `nodes` agents with the oscillator node dynamics of the
/// first worked example; the modified topology drops the closing edge.
pub fn ring(nodes: usize) -> NetworkSpec {
    let mut l = RMat::zeros(nodes, nodes);
    for i in 1..nodes {
        l[(i, i - 1)] = 1.0;
    }
    l[(0, nodes - 1)] = 1.0;
    let mut l_bar = l.clone();
    l_bar[(0, nodes - 1)] = 0.0;
    NetworkSpec {
        nodes,
        state_dim: 2,
        output_dim: 1,
        a: RMat::from_row_slice(2, 2, &[0., 1., -1., -0.1]),
        h: RMat::from_row_slice(2, 2, &[0., 0., 1., 0.]),
        c: RMat::from_row_slice(1, 2, &[1., 0.]),
        l,
        l_bar,
        sensors: vec![1],
    }
}

/// Undirected path with one extra chord that is removed; weights vary so that
/// the graph spectrum is simple.
pub fn chorded_path(nodes: usize) -> NetworkSpec {
    let mut l = RMat::zeros(nodes, nodes);
    for i in 1..nodes {
        let w = 1.0 + 0.1 * i as f64;
        l[(i, i - 1)] = w;
        l[(i - 1, i)] = w;
    }
    let mut l_bar = l.clone();
    l[(0, nodes - 1)] = 0.5;
    l[(nodes - 1, 0)] = 0.5;
    l_bar[(0, nodes - 1)] = 0.0;
    NetworkSpec {
        nodes,
        state_dim: 2,
        output_dim: 2,
        a: RMat::from_row_slice(2, 2, &[-1., 0.5, 0., -2.]),
        h: RMat::identity(2, 2),
        c: RMat::identity(2, 2),
        l,
        l_bar,
        sensors: vec![1, nodes / 2 + 1],
    }
}
