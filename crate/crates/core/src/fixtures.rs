//! The canonical ten-proposition instance: the ququart state `(0,0,0,1)`, its
//! ten test vectors, and the exclusivity graph they induce.

use crate::graph::{orthogonality_graph, ExclusivityGraph};
use crate::rational::Rational;
use crate::realization::{ProjectorFamily, Realization, StateVector};

/// Test vectors in the ordered basis `{|H,+2>, |H,-2>, |V,+2>, |V,-2>}`.
pub const TABLE_VECTORS: [[i64; 4]; 10] = [
    [0, 0, 1, 1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 0, 0, -1],
    [1, 1, 1, 1],
    [0, 1, 0, -1],
    [-1, 1, 1, 1],
    [1, 0, 0, 1],
    [1, 1, 1, -1],
    [1, 1, -1, 1],
];

pub const TABLE_STATE: [i64; 4] = [0, 0, 0, 1];

/// Probability of each vertex on the table state: `(numerator, denominator)`.
pub const TABLE_THEORY: [(i64, i64); 10] = [
    (1, 2),
    (1, 4),
    (1, 4),
    (1, 2),
    (1, 4),
    (1, 2),
    (1, 4),
    (1, 2),
    (1, 4),
    (1, 4),
];

/// Whether each test vector is a product of polarization and OAM states.
pub const TABLE_SEPARABLE: [bool; 10] = [
    true, true, true, false, true, true, false, false, false, false,
];

pub fn table_state() -> StateVector {
    StateVector::from_integers(&TABLE_STATE).expect("nonzero")
}

pub fn table_vectors() -> ProjectorFamily {
    let rows: Vec<&[i64]> = TABLE_VECTORS.iter().map(|r| r.as_slice()).collect();
    ProjectorFamily::from_integers(&rows).expect("valid family")
}

pub fn table_realization() -> Realization {
    Realization::new(table_state(), table_vectors()).expect("consistent dimensions")
}

pub fn table_theory() -> Vec<Rational> {
    TABLE_THEORY.iter().map(|&(p, q)| Rational::new(p, q)).collect()
}

/// The exclusivity graph: exact orthogonality graph of [`TABLE_VECTORS`].
pub fn table_graph() -> ExclusivityGraph {
    orthogonality_graph(table_vectors().vectors(), 0.0).expect("valid family")
}
