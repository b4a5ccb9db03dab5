use exclusivity_core::bounds::{bounds_report, fractional_packing, lovasz_theta};
use exclusivity_core::fixtures::{table_graph, table_realization, table_state, table_theory, table_vectors, TABLE_VECTORS};
use exclusivity_core::graph::{best_classical_assignment, independence_number, maximal_cliques, Clique};
use exclusivity_core::realization::{
    quantum_sum, realization_report, verify_compatibility, vertex_probability,
    vertex_probability_f64, ProjectorFamily, StateVector,
};
use exclusivity_core::{ComplexRational, ExclusivityGraph, Rational};
use proptest::prelude::*;

/// Edge list of the ten test vectors, from integer inner products over all 45 pairs.
const EDGES: [(usize, usize); 21] = [
    (1, 2), (1, 3), (1, 9), (1, 10), (2, 3), (2, 5), (2, 6), (2, 8), (3, 4), (3, 5), (4, 5),
    (4, 8), (4, 10), (5, 6), (6, 7), (6, 10), (7, 8), (7, 9), (7, 10), (8, 9), (9, 10),
];

fn dot(a: &[i64; 4], b: &[i64; 4]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn derived_graph_matches_pairwise_oracle() {
    let g = table_graph();
    let oracle: Vec<(usize, usize)> = (0..10)
        .flat_map(|i| ((i + 1)..10).map(move |j| (i, j)))
        .filter(|&(i, j)| dot(&TABLE_VECTORS[i], &TABLE_VECTORS[j]) == 0)
        .map(|(i, j)| (i + 1, j + 1))
        .collect();
    assert_eq!(oracle, EDGES);
    assert_eq!(g.edges().collect::<Vec<_>>(), EDGES);
    assert!(g.is_adjacent(1, 2) && g.is_adjacent(9, 10) && !g.is_adjacent(1, 4));
}

#[test]
fn classical_bound_of_table_graph() {
    let g = table_graph();
    let (alpha, witness) = independence_number(&g);
    assert_eq!(alpha, 3);
    assert!(witness.is_independent_in(&g));
    let assignment = best_classical_assignment(&g);
    assert_eq!(assignment.sum, 3);
    assert!(assignment.respects(&g));
    let brute = (0u32..1 << 10)
        .filter(|m| EDGES.iter().all(|&(a, b)| m & (1 << (a - 1)) == 0 || m & (1 << (b - 1)) == 0))
        .map(u32::count_ones)
        .max()
        .unwrap();
    assert_eq!(assignment.sum as u32, brute);
}

#[test]
fn maximal_cliques_of_table_graph() {
    let expected: Vec<Clique> = [
        &[1, 2, 3][..], &[1, 9, 10], &[2, 3, 5], &[2, 5, 6], &[2, 8], &[3, 4, 5], &[4, 8],
        &[4, 10], &[6, 7, 10], &[7, 8, 9], &[7, 9, 10],
    ]
    .iter()
    .map(|m| Clique { members: m.to_vec() })
    .collect();
    assert_eq!(maximal_cliques(&table_graph()), expected);
}

#[test]
fn postquantum_bound_is_seven_halves() {
    let g = table_graph();
    let cert = fractional_packing(&g).unwrap();
    assert_eq!(cert.value, Rational::new(7, 2));
    cert.check(&g).unwrap();
}

#[test]
fn quantum_probabilities_are_a_feasible_packing() {
    let g = table_graph();
    let weights = table_theory();
    let total: Rational = weights.iter().sum();
    assert_eq!(total, Rational::new(7, 2));
    for c in maximal_cliques(&g) {
        let load: Rational = c.members.iter().map(|&v| &weights[v - 1]).sum();
        assert!(load <= Rational::one(), "{:?} -> {load}", c.members);
    }
}

#[test]
fn quantum_bound_is_seven_halves() {
    let theta = lovasz_theta(&table_graph(), 1e-6).unwrap();
    assert!((theta.value - 3.5).abs() <= 1e-4, "{}", theta.value);
    assert!(theta.duality_gap <= 1e-6);
    assert!(theta.min_eigenvalue >= -1e-5);
    for (i, j) in EDGES {
        assert_eq!(theta.feasible_matrix[(i - 1, j - 1)], 0.0);
    }
    assert!((theta.feasible_matrix.trace() - 1.0).abs() < 1e-12);
}

#[test]
fn table_graph_report() {
    let r = bounds_report(&table_graph(), 1e-6).unwrap();
    assert_eq!(r.alpha, 3);
    assert_eq!(r.alpha_star, Rational::new(7, 2));
    assert!((r.theta - 3.5).abs() < 1e-4);
    assert!(r.no_postquantum_advantage);
    let json = r.to_json();
    assert_eq!(json["alpha_star"], "7/2");
    assert_eq!(json["alpha_witness"].as_array().unwrap().len(), 3);
}

#[test]
fn pentagon_report() {
    let r = bounds_report(&ExclusivityGraph::cycle(5).unwrap(), 1e-6).unwrap();
    assert_eq!(r.alpha, 2);
    assert!((r.theta - 5f64.sqrt()).abs() < 1e-4);
    assert_eq!(r.alpha_star, Rational::new(5, 2));
    assert!(!r.no_postquantum_advantage);
}

#[test]
fn theory_column_reproduced_exactly() {
    let psi = table_state();
    let fam = table_vectors();
    let expected = table_theory();
    for v in 1..=10 {
        assert_eq!(vertex_probability(&psi, fam.vector(v)).unwrap(), expected[v - 1], "vertex {v}");
    }
    assert_eq!(quantum_sum(&psi, &fam).unwrap(), Rational::new(7, 2));
}

#[test]
fn uniform_state_sum() {
    // exact oracle: Σ_i (Σ_k v_ik)² / (4 |v_i|²) = 11/4
    let psi = StateVector::new(vec![ComplexRational::real(Rational::new(1, 2)); 4]).unwrap();
    let exact = quantum_sum(&psi, &table_vectors()).unwrap();
    assert_eq!(exact, Rational::new(11, 4));
    let floats: f64 = table_vectors()
        .to_complex64()
        .iter()
        .map(|v| vertex_probability_f64(&psi.to_complex64(), v).unwrap())
        .sum();
    assert!((floats - 2.75).abs() < 1e-12);
}

#[test]
fn realization_compatibility() {
    let g = table_graph();
    let report = realization_report(&table_realization(), &g, 0.0).unwrap();
    assert!(report.orthogonality_violations.is_empty());
    assert_eq!(report.checked_edges, 21);
    assert_eq!(report.dimension, 4);
    assert_eq!(report.quantum_sum, Rational::new(7, 2));

    let mut rows: Vec<[i64; 4]> = TABLE_VECTORS.to_vec();
    rows[0] = [0, 0, 1, 2];
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    let corrupted = ProjectorFamily::from_integers(&refs).unwrap();
    let compat = verify_compatibility(&corrupted, &g, 0.0).unwrap();
    let bad: Vec<(usize, usize)> = compat.violations.iter().map(|v| v.edge).collect();
    // <v1'|v_j> for the neighbours 2, 3, 9, 10 of vertex 1: -1, 1, -1, 1; |v1'|² = 5, |v_j|² = 4
    assert_eq!(bad, vec![(1, 2), (1, 3), (1, 9), (1, 10)]);
    for v in &compat.violations {
        assert_eq!(v.overlap_sqr, Rational::new(1, 20));
    }
}

#[test]
fn quantum_sum_never_exceeds_packing_on_small_realizations() {
    let k4 = ProjectorFamily::from_integers(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]).unwrap();
    let g = ExclusivityGraph::complete(4).unwrap();
    assert!(verify_compatibility(&k4, &g, 0.0).unwrap().is_compatible());
    let psi = StateVector::from_integers(&[1, 2, 3, 4]).unwrap();
    assert_eq!(quantum_sum(&psi, &k4).unwrap(), Rational::one());
    assert!(quantum_sum(&psi, &k4).unwrap() <= fractional_packing(&g).unwrap().value);
}

fn arb_gaussian_int() -> impl Strategy<Value = ComplexRational> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| ComplexRational::new(Rational::from_integer(a), Rational::from_integer(b)))
}

proptest! {
    #[test]
    fn probabilities_invariant_under_rescaling_and_phase(
        psi in proptest::collection::vec(arb_gaussian_int(), 4)
            .prop_filter("nonzero", |v| v.iter().any(|z| !z.is_zero())),
        k in 0usize..10,
        scale in arb_gaussian_int().prop_filter("nonzero", |z| !z.is_zero()),
        phase in 0usize..4,
    ) {
        let state = StateVector::new(psi.clone()).unwrap();
        let v = table_vectors().vector(k + 1).to_vec();
        let base = vertex_probability(&state, &v).unwrap();

        let scaled: Vec<ComplexRational> = v.iter().map(|z| z * &scale).collect();
        prop_assert_eq!(vertex_probability(&state, &scaled).unwrap(), base.clone());

        let unit = [(1, 0), (0, 1), (-1, 0), (0, -1)][phase];
        let unit = ComplexRational::new(Rational::from_integer(unit.0), Rational::from_integer(unit.1));
        let rotated = StateVector::new(psi.iter().map(|z| z * &unit).collect()).unwrap();
        prop_assert_eq!(vertex_probability(&rotated, &v).unwrap(), base.clone());

        let float = vertex_probability_f64(&state.to_complex64(), &table_vectors().to_complex64()[k]).unwrap();
        prop_assert!((float - base.to_f64()).abs() < 1e-12);
    }
}
