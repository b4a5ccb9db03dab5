use exclusivity_core::bounds::{fractional_packing, lovasz_theta};
use exclusivity_core::fixtures::table_graph;
use exclusivity_core::graph::independence_number;
use exclusivity_core::{ExclusivityGraph, Rational};
use oracles::{brute_alpha, random_graph, vertex_enumeration_alpha_star, VERTEX_ENUMERATION_LIMIT};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod oracles;

fn check_sandwich(name: &str, g: &ExclusivityGraph) {
    let alpha = brute_alpha(g);
    assert_eq!(independence_number(g).0 as u32, alpha, "{name}: alpha");
    let cert = fractional_packing(g).unwrap();
    cert.check(g).unwrap_or_else(|e| panic!("{name}: {e}"));
    if g.vertex_count() <= VERTEX_ENUMERATION_LIMIT {
        assert_eq!(cert.value, vertex_enumeration_alpha_star(g), "{name}: alpha*");
    }
    let theta = lovasz_theta(g, 1e-6).unwrap().value;
    let alpha_star = cert.value.to_f64();
    assert!(alpha as f64 <= theta + 1e-4, "{name}: alpha {alpha} > theta {theta}");
    assert!(theta + 1e-4 <= alpha_star + 2e-4, "{name}: theta {theta} > alpha* {alpha_star}");
}

#[test]
fn vertex_enumeration_oracle_on_known_graphs() {
    assert_eq!(vertex_enumeration_alpha_star(&ExclusivityGraph::cycle(5).unwrap()), Rational::new(5, 2));
    assert_eq!(vertex_enumeration_alpha_star(&ExclusivityGraph::complete(4).unwrap()), Rational::one());
    assert_eq!(vertex_enumeration_alpha_star(&ExclusivityGraph::cycle(7).unwrap()), Rational::new(7, 2));
}

#[test]
fn sandwich_on_named_graphs() {
    check_sandwich("table", &table_graph());
    check_sandwich("C5", &ExclusivityGraph::cycle(5).unwrap());
    check_sandwich("K4", &ExclusivityGraph::complete(4).unwrap());
    check_sandwich("K5", &ExclusivityGraph::complete(5).unwrap());
    check_sandwich("edgeless", &ExclusivityGraph::edgeless(10).unwrap());
}

#[test]
fn sandwich_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a4d);
    for k in 0..20 {
        let g = random_graph(&mut rng, 12);
        check_sandwich(&format!("random {k} (n = {})", g.vertex_count()), &g);
    }
}

#[test]
fn trivial_bounds() {
    for n in 1..=6 {
        let k = ExclusivityGraph::complete(n).unwrap();
        assert!((lovasz_theta(&k, 1e-6).unwrap().value - 1.0).abs() < 1e-5);
        let e = ExclusivityGraph::edgeless(n).unwrap();
        assert_eq!(fractional_packing(&e).unwrap().value, Rational::from_integer(n as i64));
    }
}
