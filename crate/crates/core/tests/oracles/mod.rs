//! Exhaustive oracles shared by the sandwich tests and the acceptance suite.
#![allow(dead_code)]

use exclusivity_core::{ExclusivityGraph, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn adjacency_masks(g: &ExclusivityGraph) -> Vec<u32> {
    let n = g.vertex_count();
    (1..=n)
        .map(|a| (1..=n).filter(|&b| g.is_adjacent(a, b)).fold(0, |m, b| m | 1 << (b - 1)))
        .collect()
}

pub fn brute_alpha(g: &ExclusivityGraph) -> u32 {
    let adj = adjacency_masks(g);
    (0u32..1 << g.vertex_count())
        .filter(|&s| (0..adj.len()).all(|v| s & 1 << v == 0 || s & adj[v] == 0))
        .map(u32::count_ones)
        .max()
        .unwrap()
}

/// Maximal cliques by exhaustive subset scan.
pub fn brute_maximal_cliques(g: &ExclusivityGraph) -> Vec<u32> {
    let n = g.vertex_count();
    let adj = adjacency_masks(g);
    let is_clique = |s: u32| (0..n).all(|v| s & 1 << v == 0 || s & !(1 << v) & !adj[v] == 0);
    (1u32..1 << n)
        .filter(|&s| is_clique(s))
        .filter(|&s| (0..n).all(|v| s & 1 << v != 0 || !is_clique(s | 1 << v)))
        .collect()
}

/// Solves a square system by Gauss-Jordan elimination; `None` if singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] * &inv;
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &delta;
                }
                let delta = &f * &b[col];
                b[r] = &b[r] - &delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..m)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Fractional packing number as the best vertex of the clique polytope: every
/// choice of `n` tight constraints among the clique rows and `x_v >= 0`.
pub fn vertex_enumeration_alpha_star(g: &ExclusivityGraph) -> Rational {
    let n = g.vertex_count();
    let cliques = brute_maximal_cliques(g);
    let mut rows: Vec<(Vec<Rational>, Rational)> = cliques
        .iter()
        .map(|&c| {
            let row = (0..n).map(|v| Rational::from_integer(((c >> v) & 1) as i64)).collect();
            (row, Rational::one())
        })
        .collect();
    for v in 0..n {
        let row = (0..n).map(|u| Rational::from_integer((u == v) as i64)).collect();
        rows.push((row, Rational::zero()));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|xi| !xi.is_negative())
            && cliques.iter().all(|&c| {
                let load: Rational = (0..n).filter(|&v| c >> v & 1 == 1).map(|v| x[v].clone()).sum();
                load <= Rational::one()
            })
    };
    subsets(rows.len(), n)
        .into_iter()
        .filter_map(|pick| {
            let a = pick.iter().map(|&r| rows[r].0.clone()).collect();
            let b = pick.iter().map(|&r| rows[r].1.clone()).collect();
            solve(a, b)
        })
        .filter(|x| feasible(x))
        .map(|x| x.into_iter().sum::<Rational>())
        .max()
        .unwrap()
}

pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> ExclusivityGraph {
    let n = rng.random_range(3..=max_n);
    let density: f64 = rng.random_range(0.15..0.7);
    let edges: Vec<(usize, usize)> = (1..=n)
        .flat_map(|a| ((a + 1)..=n).map(move |b| (a, b)))
        .filter(|_| rng.random_bool(density))
        .collect();
    ExclusivityGraph::new(n, edges).unwrap()
}

/// Largest graph on which [`vertex_enumeration_alpha_star`] runs in well under a second.
pub const VERTEX_ENUMERATION_LIMIT: usize = 7;
