//! The three bounds of an exclusivity graph.
//!
//! * α(G): independence number, the bound for predefined answers.
//! * ϑ(G): Lovász number, the bound for quantum strategies.
//! * α*(G): fractional packing number, the bound for any assignment of
//!   probabilities in which mutually exclusive propositions sum to at most 1.
//!
//! α ≤ ϑ ≤ α* holds for every graph.

use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{independence_number, maximal_cliques, Clique, ExclusivityGraph};
use crate::lp;
use crate::rational::Rational;
use crate::report::sig12;
use crate::sdp::{max_eigenvalue, min_eigenvalue, SdpProblem, SdpSettings, SparseSym};

/// Maximal-clique count above which the exact LP refuses to run.
pub const MAX_LP_CLIQUES: usize = 4096;

/// Default certified accuracy for ϑ.
pub const THETA_TOLERANCE: f64 = 1e-6;

/// Iteration budget for the ϑ interior-point solver.
pub const THETA_MAX_ITERATIONS: usize = 10_000;

/// Optimal fractional packing together with a matching dual, which makes the
/// optimality claim checkable without trusting the simplex run.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPackingCertificate {
    pub value: Rational,
    /// `weights[k]` belongs to vertex `k + 1`.
    pub weights: Vec<Rational>,
    pub cliques: Vec<Clique>,
    /// One nonnegative multiplier per maximal clique; every vertex is covered
    /// with total multiplier at least 1 and the multipliers sum to `value`.
    pub clique_multipliers: Vec<Rational>,
}

impl FractionalPackingCertificate {
    /// Re-evaluates every constraint exactly. Returns a description of the first
    /// failure.
    pub fn check(&self, g: &ExclusivityGraph) -> std::result::Result<(), String> {
        if self.weights.len() != g.vertex_count() {
            return Err("weight count differs from vertex count".into());
        }
        let one = Rational::one();
        for (k, w) in self.weights.iter().enumerate() {
            if w.is_negative() || *w > one {
                return Err(format!("weight of vertex {} is {w}", k + 1));
            }
        }
        let total: Rational = self.weights.iter().sum();
        if total != self.value {
            return Err(format!("weights sum to {total}, not {}", self.value));
        }
        for c in &self.cliques {
            if !c.is_maximal_in(g) {
                return Err(format!("{:?} is not a maximal clique", c.members));
            }
            let load: Rational = c.members.iter().map(|&v| &self.weights[v - 1]).sum();
            if load > one {
                return Err(format!("clique {:?} carries {load}", c.members));
            }
        }
        if self.clique_multipliers.iter().any(Rational::is_negative) {
            return Err("negative dual multiplier".into());
        }
        for v in g.vertices() {
            let cover: Rational = self
                .cliques
                .iter()
                .zip(&self.clique_multipliers)
                .filter(|(c, _)| c.members.contains(&v))
                .map(|(_, y)| y)
                .sum();
            if cover < one {
                return Err(format!("vertex {v} covered only {cover}"));
            }
        }
        let dual_total: Rational = self.clique_multipliers.iter().sum();
        if dual_total != self.value {
            return Err(format!("dual value {dual_total} differs from {}", self.value));
        }
        Ok(())
    }
}

/// α*(G) by exact simplex over the maximal-clique constraints.
pub fn fractional_packing(g: &ExclusivityGraph) -> Result<FractionalPackingCertificate> {
    let cliques = maximal_cliques(g);
    if cliques.len() > MAX_LP_CLIQUES {
        return Err(Error::TooLarge {
            cliques: cliques.len(),
            limit: MAX_LP_CLIQUES,
        });
    }
    let n = g.vertex_count();
    let rows: Vec<Vec<Rational>> = cliques
        .iter()
        .map(|c| {
            let mut row = vec![Rational::zero(); n];
            for &v in &c.members {
                row[v - 1] = Rational::one();
            }
            row
        })
        .collect();
    let objective = vec![Rational::one(); n];
    let rhs = vec![Rational::one(); cliques.len()];
    // Every vertex lies in some maximal clique, so the LP is bounded.
    let sol = lp::maximize(&objective, &rows, &rhs).expect("packing LP is bounded");
    Ok(FractionalPackingCertificate {
        value: sol.value,
        weights: sol.primal,
        cliques,
        clique_multipliers: sol.dual,
    })
}

/// Lovász number with a feasible primal matrix and a dual upper bound.
#[derive(Clone, Debug)]
pub struct ThetaResult {
    /// `<J, X>` for the returned feasible matrix: a certified lower bound.
    pub value: f64,
    /// `λ_max(J + Σ_e y_e (E_ij + E_ji))` for the solver's dual multipliers:
    /// a certified upper bound.
    pub upper_bound: f64,
    pub duality_gap: f64,
    /// Trace-one PSD matrix with exact zeros on every edge entry.
    pub feasible_matrix: DMatrix<f64>,
    pub min_eigenvalue: f64,
    pub iterations: usize,
}

/// ϑ(G) = max <J, X>  s.t.  X ⪰ 0, tr X = 1, X_ij = 0 on edges.
///
/// The returned value is certified to lie within `duality_gap <= tol` of ϑ.
pub fn lovasz_theta(g: &ExclusivityGraph, tol: f64) -> Result<ThetaResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::NonConvergence {
            iterations: 0,
            gap: tol,
        });
    }
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g.edges().map(|(a, b)| (a - 1, b - 1)).collect();
    let mut constraints = vec![SparseSym::identity(n)];
    constraints.extend(edges.iter().map(|&(i, j)| SparseSym::symmetric_pair(i, j)));
    let mut b = vec![0.0; constraints.len()];
    b[0] = 1.0;
    let problem = SdpProblem {
        dim: n,
        c: -DMatrix::from_element(n, n, 1.0),
        constraints,
        b,
    };
    let settings = SdpSettings {
        tolerance: (tol * 1e-2).min(1e-8),
        max_iterations: THETA_MAX_ITERATIONS,
        ..SdpSettings::default()
    };
    let sol = problem.solve(&settings)?;

    // Project onto the feasible set exactly: zero the edge entries, renormalise
    // the trace, and mix in the identity if rounding left a negative eigenvalue.
    let mut x = sol.x.clone();
    for &(i, j) in &edges {
        x[(i, j)] = 0.0;
        x[(j, i)] = 0.0;
    }
    let trace = x.trace();
    x /= trace;
    let mut lambda = min_eigenvalue(&x);
    if lambda < 0.0 {
        let shift = -lambda;
        x += DMatrix::<f64>::identity(n, n) * shift;
        x /= 1.0 + n as f64 * shift;
        lambda = min_eigenvalue(&x);
    }
    let lower = x.sum();

    let mut dual = DMatrix::from_element(n, n, 1.0);
    for (&(i, j), &y) in edges.iter().zip(&sol.y[1..]) {
        dual[(i, j)] += y;
        dual[(j, i)] += y;
    }
    let upper = max_eigenvalue(&dual);
    let gap = (upper - lower).max(0.0);
    if gap > tol {
        return Err(Error::NonConvergence {
            iterations: sol.iterations,
            gap,
        });
    }
    Ok(ThetaResult {
        value: lower,
        upper_bound: upper,
        duality_gap: gap,
        feasible_matrix: x,
        min_eigenvalue: lambda,
        iterations: sol.iterations,
    })
}

#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub alpha: usize,
    pub alpha_witness: Vec<usize>,
    pub theta: f64,
    pub theta_gap: f64,
    pub alpha_star: Rational,
    pub weights: Vec<Rational>,
    pub no_postquantum_advantage: bool,
}

/// Aggregates α, ϑ and α*. `no_postquantum_advantage` holds when quantum
/// strategies beat classical ones and already reach the postquantum bound.
pub fn bounds_report(g: &ExclusivityGraph, tol: f64) -> Result<BoundsReport> {
    let (alpha, witness) = independence_number(g);
    let packing = fractional_packing(g)?;
    let theta = lovasz_theta(g, tol)?;
    let alpha_star_f = packing.value.to_f64();
    let no_postquantum_advantage = (theta.value - alpha_star_f).abs() <= tol
        && Rational::from_integer(alpha as i64) < packing.value;
    Ok(BoundsReport {
        alpha,
        alpha_witness: witness.members,
        theta: theta.value,
        theta_gap: theta.duality_gap,
        alpha_star: packing.value,
        weights: packing.weights,
        no_postquantum_advantage,
    })
}

impl BoundsReport {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha,
            "alpha_witness": self.alpha_witness,
            "theta": sig12(self.theta),
            "theta_gap": sig12(self.theta_gap),
            "alpha_star": self.alpha_star.to_string(),
            "weights": self.weights.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "no_postquantum_advantage": self.no_postquantum_advantage,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_packs_to_one() {
        let cert = fractional_packing(&ExclusivityGraph::complete(3).unwrap()).unwrap();
        assert_eq!(cert.value, Rational::one());
        cert.check(&ExclusivityGraph::complete(3).unwrap()).unwrap();
    }

    #[test]
    fn pentagon_packs_to_five_halves() {
        let c5 = ExclusivityGraph::cycle(5).unwrap();
        let cert = fractional_packing(&c5).unwrap();
        assert_eq!(cert.value, Rational::new(5, 2));
        assert!(cert.weights.iter().all(|w| *w == Rational::new(1, 2)));
        cert.check(&c5).unwrap();
    }

    #[test]
    fn tampered_certificate_fails_check() {
        let c5 = ExclusivityGraph::cycle(5).unwrap();
        let mut cert = fractional_packing(&c5).unwrap();
        cert.weights[0] = Rational::new(3, 4);
        assert!(cert.check(&c5).is_err());
        let mut cert = fractional_packing(&c5).unwrap();
        cert.clique_multipliers[0] = Rational::zero();
        assert!(cert.check(&c5).is_err());
    }

    #[test]
    fn complete_graph_theta_is_one() {
        let k5 = ExclusivityGraph::complete(5).unwrap();
        let theta = lovasz_theta(&k5, 1e-6).unwrap();
        assert!((theta.value - 1.0).abs() < 1e-6, "{}", theta.value);
    }

    #[test]
    fn edgeless_theta_is_n() {
        let g = ExclusivityGraph::edgeless(6).unwrap();
        let theta = lovasz_theta(&g, 1e-6).unwrap();
        assert!((theta.value - 6.0).abs() < 1e-6);
    }

    #[test]
    fn pentagon_theta_is_sqrt5() {
        let theta = lovasz_theta(&ExclusivityGraph::cycle(5).unwrap(), 1e-6).unwrap();
        assert!((theta.value - 5f64.sqrt()).abs() < 1e-4);
        assert!(theta.duality_gap <= 1e-6);
        assert!(theta.upper_bound >= theta.value);
    }

    #[test]
    fn k4_report() {
        let r = bounds_report(&ExclusivityGraph::complete(4).unwrap(), 1e-6).unwrap();
        assert_eq!(r.alpha, 1);
        assert!((r.theta - 1.0).abs() < 1e-6);
        assert_eq!(r.alpha_star, Rational::one());
        assert!(!r.no_postquantum_advantage);
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        assert!(lovasz_theta(&ExclusivityGraph::cycle(5).unwrap(), 0.0).is_err());
    }
}
