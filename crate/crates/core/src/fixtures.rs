//! The four worked examples used throughout the tests, benches and CLI docs.

use crate::model::{Edge, MultiAgentSpec, NetworkSpec};
use crate::numlin::RMat;

fn m(rows: usize, cols: usize, data: &[f64]) -> RMat {
    RMat::from_row_slice(rows, cols, data)
}

/// Directed 4-cycle losing the edge 4 -> 1; sensors on nodes 1 and 2.
pub fn example1() -> NetworkSpec {
    let mut l = RMat::zeros(4, 4);
    l[(1, 0)] = 1.0;
    l[(2, 1)] = 1.0;
    l[(3, 2)] = 1.0;
    l[(0, 3)] = 1.0;
    let mut l_bar = l.clone();
    l_bar[(0, 3)] = 0.0;
    NetworkSpec {
        nodes: 4,
        state_dim: 2,
        output_dim: 1,
        a: m(2, 2, &[1., 1., 0., 2.]),
        h: m(2, 2, &[1., 0., 0., 0.]),
        c: m(1, 2, &[1., 0.]),
        l,
        l_bar,
        sensors: vec![1, 2],
    }
}

/// Three nodes, the edge 3 -> 2 is removed; full-state sensors on nodes 1 and 3.
pub fn example2() -> NetworkSpec {
    NetworkSpec {
        nodes: 3,
        state_dim: 2,
        output_dim: 2,
        a: m(2, 2, &[1., 0., 1., 1.]),
        h: RMat::identity(2, 2),
        c: RMat::identity(2, 2),
        l: m(3, 3, &[0., 0., 0., 1., 0., 1., 0., 1., 0.]),
        l_bar: m(3, 3, &[0., 0., 0., 1., 0., 0., 0., 1., 0.]),
        sensors: vec![1, 3],
    }
}

/// Same graphs as [`example2`] with a rank-one coupling and sensors on 2 and 3.
pub fn example3() -> NetworkSpec {
    NetworkSpec {
        h: m(2, 2, &[0., 0., 0., 1.]),
        sensors: vec![2, 3],
        ..example2()
    }
}

/// Triangle of agents losing the edge {1, 3}; nodes 1 and 3 observed.
pub fn example4() -> MultiAgentSpec {
    let e = |i, j| Edge { i, j, w: 1.0 };
    MultiAgentSpec {
        nodes: 3,
        state_dim: 2,
        a: m(2, 2, &[1., 1., 0., 2.]),
        b: m(2, 2, &[0., 0., 0., 1.]),
        c: m(1, 2, &[1., 0.]),
        weights: vec![e(1, 2), e(2, 3), e(1, 3)],
        weights_bar: vec![e(1, 2), e(2, 3)],
        observed: vec![1, 3],
    }
}
