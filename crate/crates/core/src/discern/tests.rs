use num_complex::Complex64;

use super::*;
use crate::fixtures;
use crate::model::{assemble, assemble_multiagent, AssembledPair, NetworkSpec};
use crate::numlin::{to_complex, vector_angle, CMat, CVec, RMat};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn s() -> Settings {
    Settings::default()
}

fn pair(spec: &NetworkSpec) -> AssembledPair {
    assemble(spec).unwrap()
}

/// Kalman observability rank, computed without any eigenvalues.
fn kalman_rank(a: &RMat, cm: &RMat) -> usize {
    let n = a.nrows();
    let mut blocks = Vec::new();
    let mut row = cm.clone();
    for _ in 0..n {
        blocks.push(row.clone());
        row = &row * a;
    }
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut k = RMat::zeros(rows, n);
    let mut at = 0;
    for b in blocks {
        k.view_mut((at, 0), b.shape()).copy_from(&b);
        at += b.nrows();
    }
    crate::numlin::numerical_rank(&to_complex(&k), 1e-10)
}

#[test]
fn example2_is_discernible_on_every_path() {
    let spec = fixtures::example2();
    let p = pair(&spec);
    assert!(check_theorem_eigenspace(&p, &s()).is_discernible());
    assert!(check_dimension_formula(&p, &s()).is_discernible());
    assert!(check_augmented_pbh(&p, &s()).is_discernible());
    assert!(check_lower_dimensional(&spec, &s()).is_discernible());
    assert!(find_witness(&p, &s()).is_none());
}

#[test]
fn example3_is_indiscernible_with_validated_witness() {
    let spec = fixtures::example3();
    let p = pair(&spec);
    let v = check_theorem_eigenspace(&p, &s());
    assert!(v.is_indiscernible());
    assert!((v.failing_mu.unwrap() - c(1.0)).norm() < 1e-8);
    let w = v.witness.unwrap();
    assert!(w.validated);
    assert!(check_augmented_pbh(&p, &s()).is_indiscernible());
    assert!(check_lower_dimensional(&spec, &s()).is_indiscernible());
}

#[test]
fn identical_topologies_fail_intersection() {
    let mut spec = fixtures::example2();
    spec.l_bar = spec.l.clone();
    let v = check_theorem_eigenspace(&pair(&spec), &s());
    assert_eq!(v.failed_condition, Some(Condition::Intersection));
}

#[test]
fn example1_dimension_formula_and_sensor_bound() {
    let spec = fixtures::example1();
    let p = pair(&spec);
    assert!(check_dimension_formula(&p, &s()).is_indiscernible());
    let v = check_sensor_bound(&p, &spec, &s());
    assert!(v.is_indiscernible());
    assert!((v.failing_mu.unwrap() - c(2.0)).norm() < 1e-8);
    assert!(v.witness.is_none());
    assert_eq!(min_sensors_hint(&p, &spec, 1e-8).unwrap(), 8);
}

#[test]
fn full_sensing_with_injective_output() {
    // Delta = I, C = I: Psi is injective, only the spectra matter.
    let mut spec = fixtures::example2();
    spec.sensors = vec![1, 2, 3];
    let p = pair(&spec);
    assert_eq!(check_sensor_bound(&p, &spec, &s()).status, Status::NotRefuted);
    assert_eq!(
        check_dimension_formula(&p, &s()).status,
        check_theorem_eigenspace(&p, &s()).status
    );
}

#[test]
fn example2_sensor_bound_passes_with_multiplicities_from_eigs() {
    let spec = fixtures::example2();
    let p = pair(&spec);
    let rows = spectrum::union_spectrum(
        &crate::numlin::eig(&to_complex(&p.phi), 1e-8).unwrap(),
        &crate::numlin::eig(&to_complex(&p.phi_bar), 1e-8).unwrap(),
    );
    let worst = rows.iter().map(|r| r.tau() + r.tau_bar()).max().unwrap();
    assert_eq!(worst, 3);
    assert_eq!(check_sensor_bound(&p, &spec, &s()).status, Status::NotRefuted);
    assert_eq!(min_sensors_hint(&p, &spec, 1e-8).unwrap(), 2);
}

#[test]
fn sensor_hint_rejects_zero_output() {
    let mut spec = fixtures::example2();
    spec.c = RMat::zeros(2, 2);
    assert!(min_sensors_hint(&pair(&spec), &spec, 1e-8).is_err());
}

#[test]
fn reduced_system_examples() {
    let v = check_reduced_system(&fixtures::example3(), &s());
    assert!(v.is_indiscernible());
    assert!(v.failing_mu.unwrap().norm() < 1e-8);
    assert!(v.witness.is_some_and(|w| w.validated));
    assert_eq!(check_reduced_system(&fixtures::example2(), &s()).status, Status::NotRefuted);
    let mut spec = fixtures::example2();
    spec.sensors = vec![1, 2, 3];
    spec.l_bar = RMat::from_row_slice(3, 3, &[0., 0., 0., 2., 0., 0., 0., 0., 0.]);
    assert_eq!(check_reduced_system(&spec, &s()).status, Status::NotRefuted);
}

#[test]
fn observability_necessary_examples() {
    for spec in [fixtures::example2(), fixtures::example3()] {
        assert_eq!(check_observability_necessary(&spec, &s()).status, Status::NotRefuted);
        assert_eq!(kalman_rank(&spec.a, &spec.h), 2);
    }
    let mut spec = fixtures::example3();
    spec.h = RMat::zeros(2, 2);
    let v = check_observability_necessary(&spec, &s());
    assert_eq!(v.failed_condition, Some(Condition::ObsAH));
}

#[test]
fn pbh_examples_against_kalman_rank() {
    let a = RMat::from_row_slice(2, 2, &[1., 1., 0., 2.]);
    let cm = RMat::from_row_slice(1, 2, &[1., 0.]);
    assert_eq!(kalman_rank(&a, &cm), 2);
    assert!(pbh_observable(&to_complex(&a), &to_complex(&cm), 1e-8).unwrap());
    assert!(!pbh_observable(&to_complex(&a), &CMat::zeros(1, 2), 1e-8).unwrap());
    let m = fixtures::example4();
    let lap = crate::model::laplacian(&m, crate::model::Topology::Original);
    let delta = crate::model::selection_matrix(&m.observed, 3);
    assert!(pbh_observable(&to_complex(&lap), &to_complex(&delta), 1e-8).unwrap());
}

#[test]
fn zero_output_is_never_discernible() {
    let mut p = pair(&fixtures::example2());
    p.psi = RMat::zeros(p.psi.nrows(), p.psi.ncols());
    assert!(check_augmented_pbh(&p, &s()).is_indiscernible());
    assert!(find_witness(&p, &s()).is_some_and(|w| w.validated));
}

#[test]
fn example3_witness_lies_in_indiscernible_subspace() {
    let p = pair(&fixtures::example3());
    let ind = indiscernible_subspace(&p, 1e-8);
    assert_eq!(ind.dim(), 4);
    let w = extract_witness(&p, c(1.0), 1e-8).unwrap();
    let v = CVec::from_iterator(12, w.x0.iter().chain(&w.x0_bar).map(|&x| c(x)));
    assert!(vector_angle(&v, &ind) < 1e-6);
}

#[test]
fn shared_mode_gives_equal_pair() {
    // Only node 3 starts reading node 2, so every state with a silent node 2
    // is a common eigenvector and (x, x) is a witness.
    let mut spec = fixtures::example2();
    spec.l = RMat::zeros(3, 3);
    spec.l_bar = RMat::zeros(3, 3);
    spec.l_bar[(2, 1)] = 1.0;
    let p = pair(&spec);
    let v = check_theorem_eigenspace(&p, &s());
    assert_eq!(v.failed_condition, Some(Condition::Intersection));
    let w = v.witness.unwrap();
    assert!(w.validated);
}

#[test]
fn common_eigenpairs_of_example4() {
    let m = fixtures::example4();
    let lap = to_complex(&crate::model::laplacian(&m, crate::model::Topology::Original));
    let lap_bar = to_complex(&crate::model::laplacian(&m, crate::model::Topology::Modified));
    let pairs = common_eigenpairs(&lap, &lap_bar, 1e-8).unwrap();
    assert_eq!(pairs.len(), 2);
    let ones = CVec::from_element(3, c(1.0));
    let bend = CVec::from_vec(vec![c(1.0), c(-2.0), c(1.0)]);
    assert!(pairs[0].0.norm() < 1e-8);
    assert!(vector_angle(&ones, &pairs[0].1) < 1e-8);
    assert!((pairs[1].0 - c(3.0)).norm() < 1e-8);
    assert!(vector_angle(&bend, &pairs[1].1) < 1e-8);

    let diag = |d: &[f64]| to_complex(&RMat::from_diagonal(&crate::numlin::RVec::from_row_slice(d)));
    assert!(common_eigenpairs(&diag(&[1., 2.]), &diag(&[3., 4.]), 1e-8).unwrap().is_empty());
    assert_eq!(common_eigenpairs(&lap, &lap, 1e-8).unwrap().len(), 2);
}

#[test]
fn example4_legacy_conditions_hold_but_criterion_fails() {
    let r = check_legacy_theorem(&fixtures::example4(), &s()).unwrap();
    assert!(r.laplacian_observable && r.laplacian_bar_observable);
    assert!(r.node_pairs_observable && r.delta_ensures && r.c_ensures);
    assert!(r.all_hold);
    assert_eq!(r.delta_check.output_pairs_dim, 2);
    assert!(r.corrected.is_indiscernible());
    assert!((r.corrected.failing_mu.unwrap() - c(1.0)).norm() < 1e-8);
    assert!(r.corrected.witness.as_ref().unwrap().validated);
}

#[test]
fn full_observation_of_agents_is_ensured() {
    let mut m = fixtures::example4();
    m.observed = vec![1, 2, 3];
    m.c = RMat::identity(2, 2);
    let v = check_multiagent_output_discernibility(&m, &s());
    assert!(v.is_discernible());
}

#[test]
fn same_graph_twice_is_ensured() {
    // F = F_bar and (F, M) observable: equal outputs force equal states,
    // so the only output-indistinguishable pairs are the self-pairs.
    let mut m = fixtures::example4();
    m.weights_bar = m.weights.clone();
    let p = assemble_multiagent(&m).unwrap();
    let pair_check = ensures_output_discernibility(
        &to_complex(&p.phi),
        &to_complex(&p.phi_bar),
        &to_complex(&p.psi),
        1e-8,
    );
    let observable = pbh_observable(&to_complex(&p.phi), &to_complex(&p.psi), 1e-8).unwrap();
    assert_eq!(pair_check.ensured, observable);
    assert_eq!(pair_check.state_pairs_dim, 6);
}

#[test]
fn disconnected_sensing_fails_first_legacy_condition() {
    let mut m = fixtures::example4();
    m.observed = vec![2];
    m.weights = vec![crate::model::Edge { i: 1, j: 3, w: 1.0 }];
    let r = check_legacy_theorem(&m, &s()).unwrap();
    assert!(!r.laplacian_observable);
}

#[test]
fn zero_coupling_makes_condition_three_uniform() {
    let mut m = fixtures::example4();
    m.b = RMat::zeros(2, 2);
    let r = check_legacy_theorem(&m, &s()).unwrap();
    let a = to_complex(&m.a);
    let uniform = pbh_observable(&a, &to_complex(&m.c), 1e-8).unwrap();
    assert_eq!(r.node_pairs_observable, uniform);
}

#[test]
fn method_resolution() {
    assert_eq!(Method::Auto.resolve(200), Method::Both);
    assert_eq!(Method::Auto.resolve(201), Method::Atlas);
    assert_eq!(Method::Direct.resolve(1000), Method::Direct);
}

#[test]
fn analysis_of_example1() {
    let a = analyze_network(&fixtures::example1(), &s(), Method::Both).unwrap();
    assert!(a.verdict.is_indiscernible());
    assert_eq!(a.min_sensors_hint, Some(8));
    assert!(a.sensor_bound.is_indiscernible());
}
