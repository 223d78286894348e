//! Network descriptions and the Kronecker-structured matrices built from them.
//!
//! Node indices in sensor lists and edge lists are 1-based, matching the way
//! networks are usually written down; matrices are 0-based internally.

use serde::{Deserialize, Serialize};

use crate::error::{mismatch, Result};
use crate::numlin::RMat;

/// Networked system `x_i' = A x_i + sum_j w_ij H x_j`, `y_i = C x_i`, observed
/// at `sensors`, whose topology changes from `l` to `l_bar`.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub nodes: usize,
    pub state_dim: usize,
    pub output_dim: usize,
    pub a: RMat,
    pub h: RMat,
    pub c: RMat,
    pub l: RMat,
    pub l_bar: RMat,
    pub sensors: Vec<usize>,
}

/// Undirected weighted edge between 1-based nodes `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

/// Diffusively coupled agents `x_i' = A x_i + B sum_j w_ij (x_j - x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiAgentSpec {
    pub nodes: usize,
    pub state_dim: usize,
    pub a: RMat,
    pub b: RMat,
    pub c: RMat,
    pub weights: Vec<Edge>,
    pub weights_bar: Vec<Edge>,
    pub observed: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Original,
    Modified,
}

/// Original and modified state matrices sharing one output matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledPair {
    pub phi: RMat,
    pub phi_bar: RMat,
    pub psi: RMat,
}

impl AssembledPair {
    pub fn state_dim(&self) -> usize {
        self.phi.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    TooFewNodes,
    DimensionMismatch,
    NonFiniteEntry,
    NonzeroSelfWeight,
    EmptySensors,
    SensorOutOfRange,
    SensorsNotIncreasing,
    DuplicateNode,
    NoTopologyChange,
    NonPositiveWeight,
    SelfLoop,
    DuplicateEdge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation {
            kind,
            message: message.into(),
        });
    }

    fn check_shape(&mut self, name: &str, m: &RMat, rows: usize, cols: usize) -> bool {
        if m.shape() != (rows, cols) {
            self.push(
                ViolationKind::DimensionMismatch,
                format!(
                    "{name} is {}x{}, expected {rows}x{cols}",
                    m.nrows(),
                    m.ncols()
                ),
            );
            return false;
        }
        if m.iter().any(|x| !x.is_finite()) {
            self.push(
                ViolationKind::NonFiniteEntry,
                format!("{name} has a non-finite entry"),
            );
        }
        true
    }
}

fn check_node_list(report: &mut ValidationReport, what: &str, list: &[usize], nodes: usize) {
    if list.is_empty() {
        report.push(ViolationKind::EmptySensors, format!("{what} list is empty"));
    }
    for &s in list {
        if s == 0 || s > nodes {
            report.push(
                ViolationKind::SensorOutOfRange,
                format!("{what} index {s} outside 1..={nodes}"),
            );
        }
    }
}

/// Collect every violated invariant of a [`NetworkSpec`].
pub fn validate_spec(spec: &NetworkSpec) -> ValidationReport {
    let mut r = ValidationReport::default();
    let (nn, n, p) = (spec.nodes, spec.state_dim, spec.output_dim);
    if nn < 2 {
        r.push(ViolationKind::TooFewNodes, format!("N = {nn}, need N >= 2"));
    }
    if n == 0 || p == 0 {
        r.push(
            ViolationKind::DimensionMismatch,
            "node state and output dimensions must be at least 1",
        );
    }
    r.check_shape("A", &spec.a, n, n);
    r.check_shape("H", &spec.h, n, n);
    r.check_shape("C", &spec.c, p, n);
    let l_ok = r.check_shape("L", &spec.l, nn, nn);
    let lb_ok = r.check_shape("L_bar", &spec.l_bar, nn, nn);
    for (name, m, ok) in [("L", &spec.l, l_ok), ("L_bar", &spec.l_bar, lb_ok)] {
        if !ok {
            continue;
        }
        for i in 0..nn {
            if m[(i, i)] != 0.0 {
                r.push(
                    ViolationKind::NonzeroSelfWeight,
                    format!("nonzero self-weight {name}[{},{}] = {}", i + 1, i + 1, m[(i, i)]),
                );
            }
        }
    }
    if l_ok && lb_ok && spec.l == spec.l_bar {
        r.push(ViolationKind::NoTopologyChange, "no topology change: L equals L_bar");
    }
    check_node_list(&mut r, "sensor", &spec.sensors, nn);
    if spec.sensors.windows(2).any(|w| w[0] >= w[1]) {
        r.push(
            ViolationKind::SensorsNotIncreasing,
            "sensor indices must be strictly increasing",
        );
    }
    r
}

/// Collect every violated invariant of a [`MultiAgentSpec`].
pub fn validate_multiagent(spec: &MultiAgentSpec) -> ValidationReport {
    let mut r = ValidationReport::default();
    let (nn, n) = (spec.nodes, spec.state_dim);
    if nn < 2 {
        r.push(ViolationKind::TooFewNodes, format!("N = {nn}, need N >= 2"));
    }
    if n == 0 {
        r.push(ViolationKind::DimensionMismatch, "agent state dimension must be at least 1");
    }
    r.check_shape("A", &spec.a, n, n);
    r.check_shape("B", &spec.b, n, n);
    if spec.c.ncols() != n || spec.c.nrows() == 0 {
        r.push(
            ViolationKind::DimensionMismatch,
            format!("C is {}x{}, expected m x {n} with m >= 1", spec.c.nrows(), spec.c.ncols()),
        );
    }
    for (name, edges) in [("weights", &spec.weights), ("weights_bar", &spec.weights_bar)] {
        let mut seen = std::collections::BTreeSet::new();
        for e in edges.iter() {
            if e.i == 0 || e.j == 0 || e.i > nn || e.j > nn {
                r.push(
                    ViolationKind::SensorOutOfRange,
                    format!("{name}: edge ({}, {}) outside 1..={nn}", e.i, e.j),
                );
            }
            if e.i == e.j {
                r.push(ViolationKind::SelfLoop, format!("{name}: self-loop at node {}", e.i));
            }
            if !(e.w.is_finite() && e.w > 0.0) {
                r.push(
                    ViolationKind::NonPositiveWeight,
                    format!("{name}: edge ({}, {}) has weight {}", e.i, e.j, e.w),
                );
            }
            if !seen.insert((e.i.min(e.j), e.i.max(e.j))) {
                r.push(
                    ViolationKind::DuplicateEdge,
                    format!("{name}: edge ({}, {}) listed twice", e.i, e.j),
                );
            }
        }
    }
    check_node_list(&mut r, "observed", &spec.observed, nn);
    let mut sorted = spec.observed.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        r.push(ViolationKind::DuplicateNode, "observed node listed twice");
    }
    r
}

/// Row-selection matrix with rows `e_i^T` for the 1-based indices in `rows`.
pub fn selection_matrix(rows: &[usize], nodes: usize) -> RMat {
    let mut d = RMat::zeros(rows.len(), nodes);
    for (r, &i) in rows.iter().enumerate() {
        d[(r, i - 1)] = 1.0;
    }
    d
}

fn check_network_dims(spec: &NetworkSpec) -> Result<()> {
    let (nn, n) = (spec.nodes, spec.state_dim);
    for (name, m, rows, cols) in [
        ("A", &spec.a, n, n),
        ("H", &spec.h, n, n),
        ("L", &spec.l, nn, nn),
        ("L_bar", &spec.l_bar, nn, nn),
    ] {
        if m.shape() != (rows, cols) {
            return Err(mismatch(name, format!("{rows}x{cols}"), format!("{}x{}", m.nrows(), m.ncols())));
        }
    }
    if spec.c.ncols() != n {
        return Err(mismatch("C", format!("{} columns", n), spec.c.ncols()));
    }
    if let Some(&bad) = spec.sensors.iter().find(|&&s| s == 0 || s > nn) {
        return Err(mismatch("sensors", format!("indices in 1..={nn}"), bad));
    }
    Ok(())
}

/// `I_N ⊗ A + L ⊗ H`.
pub fn network_matrix(l: &RMat, a: &RMat, h: &RMat) -> RMat {
    let nn = l.nrows();
    RMat::identity(nn, nn).kronecker(a) + l.kronecker(h)
}

/// `Phi = I_N ⊗ A + L ⊗ H`, `Phi_bar = I_N ⊗ A + L_bar ⊗ H`, `Psi = Delta ⊗ C`.
pub fn assemble(spec: &NetworkSpec) -> Result<AssembledPair> {
    check_network_dims(spec)?;
    let delta = selection_matrix(&spec.sensors, spec.nodes);
    Ok(AssembledPair {
        phi: network_matrix(&spec.l, &spec.a, &spec.h),
        phi_bar: network_matrix(&spec.l_bar, &spec.a, &spec.h),
        psi: delta.kronecker(&spec.c),
    })
}

/// The node-level system `x' = L x`, `y = Delta x` and its modified twin.
pub fn reduced_pair(spec: &NetworkSpec) -> Result<AssembledPair> {
    check_network_dims(spec)?;
    Ok(AssembledPair {
        phi: spec.l.clone(),
        phi_bar: spec.l_bar.clone(),
        psi: selection_matrix(&spec.sensors, spec.nodes),
    })
}

/// Graph Laplacian: `l_ii = sum_k w_ik`, `l_ij = -w_ij`.
pub fn laplacian(spec: &MultiAgentSpec, which: Topology) -> RMat {
    let edges = match which {
        Topology::Original => &spec.weights,
        Topology::Modified => &spec.weights_bar,
    };
    laplacian_from_edges(edges, spec.nodes)
}

pub fn laplacian_from_edges(edges: &[Edge], nodes: usize) -> RMat {
    let mut lap = RMat::zeros(nodes, nodes);
    for e in edges {
        let (i, j) = (e.i - 1, e.j - 1);
        lap[(i, j)] -= e.w;
        lap[(j, i)] -= e.w;
        lap[(i, i)] += e.w;
        lap[(j, j)] += e.w;
    }
    lap
}

/// `F = I_N ⊗ A - Lap ⊗ B`, `F_bar = I_N ⊗ A - Lap_bar ⊗ B`, `M = Delta ⊗ C`.
pub fn assemble_multiagent(spec: &MultiAgentSpec) -> Result<AssembledPair> {
    let (nn, n) = (spec.nodes, spec.state_dim);
    for (name, m) in [("A", &spec.a), ("B", &spec.b)] {
        if m.shape() != (n, n) {
            return Err(mismatch(name, format!("{n}x{n}"), format!("{}x{}", m.nrows(), m.ncols())));
        }
    }
    if spec.c.ncols() != n {
        return Err(mismatch("C", format!("{n} columns"), spec.c.ncols()));
    }
    for e in spec.weights.iter().chain(&spec.weights_bar) {
        if e.i == 0 || e.j == 0 || e.i > nn || e.j > nn {
            return Err(mismatch("edge", format!("endpoints in 1..={nn}"), format!("({}, {})", e.i, e.j)));
        }
    }
    if let Some(&bad) = spec.observed.iter().find(|&&s| s == 0 || s > nn) {
        return Err(mismatch("observed", format!("indices in 1..={nn}"), bad));
    }
    let id = RMat::identity(nn, nn);
    let lap = laplacian(spec, Topology::Original);
    let lap_bar = laplacian(spec, Topology::Modified);
    let base = id.kronecker(&spec.a);
    Ok(AssembledPair {
        phi: &base - lap.kronecker(&spec.b),
        phi_bar: &base - lap_bar.kronecker(&spec.b),
        psi: selection_matrix(&spec.observed, nn).kronecker(&spec.c),
    })
}
