//! Exclusivity graphs and their exact combinatorial quantities.
//!
//! Vertices are 1-based: vertex `k` is the proposition labelled `k`.
//! Internally adjacency is kept as one bitset row per vertex, 0-based.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::rational::{inner_product, norm_sqr, ComplexRational, Rational};

/// Undirected simple graph whose edges join mutually exclusive propositions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusivityGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<FixedBitSet>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl ExclusivityGraph {
    /// Builds a graph, rejecting loops, out-of-range endpoints and duplicate
    /// edges (in either orientation).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut set = BTreeSet::new();
        let mut adjacency = vec![FixedBitSet::with_capacity(n); n];
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if a == 0 || b == 0 || a > n || b > n {
                return Err(Error::VertexOutOfRange(a, b, n));
            }
            let key = (a.min(b), a.max(b));
            if !set.insert(key) {
                return Err(Error::DuplicateEdge(a, b));
            }
            adjacency[a - 1].insert(b - 1);
            adjacency[b - 1].insert(a - 1);
        }
        Ok(ExclusivityGraph {
            n,
            edges: set,
            adjacency,
        })
    }

    pub fn edgeless(n: usize) -> Result<Self> {
        Self::new(n, [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::new(
            n,
            (1..=n).flat_map(|i| ((i + 1)..=n).map(move |j| (i, j))),
        )
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        a != b && a >= 1 && b >= 1 && a <= self.n && b <= self.n && self.adjacency[a - 1][b - 1]
    }

    /// The complement graph (same vertices, an edge wherever `self` has none).
    pub fn complement(&self) -> ExclusivityGraph {
        let edges: Vec<_> = (1..=self.n)
            .flat_map(|i| ((i + 1)..=self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.is_adjacent(i, j))
            .collect();
        ExclusivityGraph::new(self.n, edges).expect("complement of a valid graph is valid")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GraphFile =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        Self::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b))).map_err(|e| {
            match e {
                Error::EmptyGraph => ParseError::Field {
                    field: "n".into(),
                    message: e.to_string(),
                },
                other => ParseError::Field {
                    field: "edges".into(),
                    message: other.to_string(),
                },
            }
            .into()
        })
    }

    pub fn to_json(&self) -> String {
        let raw = GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&raw).expect("graph serializes")
    }
}

/// A set of pairwise non-adjacent vertices (1-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependentSet {
    pub members: Vec<usize>,
}

impl IndependentSet {
    pub fn is_independent_in(&self, g: &ExclusivityGraph) -> bool {
        self.members.iter().enumerate().all(|(k, &a)| {
            self.members[k + 1..].iter().all(|&b| !g.is_adjacent(a, b))
        })
    }
}

/// A set of pairwise adjacent vertices (1-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Clique {
    pub members: Vec<usize>,
}

impl Clique {
    pub fn is_clique_in(&self, g: &ExclusivityGraph) -> bool {
        self.members.iter().enumerate().all(|(k, &a)| {
            self.members[k + 1..].iter().all(|&b| g.is_adjacent(a, b))
        })
    }

    pub fn is_maximal_in(&self, g: &ExclusivityGraph) -> bool {
        self.is_clique_in(g)
            && g.vertices().all(|v| {
                self.members.contains(&v) || !self.members.iter().all(|&m| g.is_adjacent(m, v))
            })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_family<T>(vectors: &[Vec<T>]) -> Result<usize> {
    let first = vectors.first().ok_or(Error::EmptyFamily)?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    Ok(dim)
}

/// Graph with an edge `(i, j)` whenever `|<v_i|v_j>| <= tol * |v_i| |v_j|`.
///
/// The comparison is carried out on squares in exact rational arithmetic, so
/// `tol = 0` is an exact orthogonality test. Zero vectors are rejected.
pub fn orthogonality_graph(vectors: &[Vec<ComplexRational>], tol: f64) -> Result<ExclusivityGraph> {
    check_family(vectors)?;
    let tol = Rational::from_f64(tol)
        .filter(|t| !t.is_negative())
        .ok_or(Error::InvalidProbability(tol))?;
    let tol_sq = &tol * &tol;
    let norms: Vec<Rational> = vectors.iter().map(|v| norm_sqr(v)).collect();
    if let Some(k) = norms.iter().position(Rational::is_zero) {
        return Err(Error::ZeroVector(Some(k + 1)));
    }
    let n = vectors.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let overlap = inner_product(&vectors[i], &vectors[j]).norm_sqr();
            if overlap <= &tol_sq * &(&norms[i] * &norms[j]) {
                edges.push((i + 1, j + 1));
            }
        }
    }
    ExclusivityGraph::new(n, edges)
}

/// Floating-point variant of [`orthogonality_graph`].
pub fn orthogonality_graph_f64(vectors: &[Vec<Complex64>], tol: f64) -> Result<ExclusivityGraph> {
    check_family(vectors)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidProbability(tol));
    }
    let norms: Vec<f64> = vectors
        .iter()
        .map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    if let Some(k) = norms.iter().position(|&x| x == 0.0) {
        return Err(Error::ZeroVector(Some(k + 1)));
    }
    let n = vectors.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let ip: Complex64 = vectors[i]
                .iter()
                .zip(&vectors[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            if ip.norm() <= tol * norms[i] * norms[j] {
                edges.push((i + 1, j + 1));
            }
        }
    }
    ExclusivityGraph::new(n, edges)
}

/// Greedy sequential colouring of `cand` in the graph given by `adj`.
/// Returns vertices in colour order together with their colour numbers (1-based).
fn colour_sort(cand: &FixedBitSet, adj: &[FixedBitSet]) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = cand.clone();
    let mut order = Vec::with_capacity(cand.count_ones(..));
    let mut colours = Vec::with_capacity(order.capacity());
    let mut colour = 0;
    while !uncoloured.is_clear() {
        colour += 1;
        let mut available = uncoloured.clone();
        while let Some(v) = available.ones().next() {
            uncoloured.set(v, false);
            available.set(v, false);
            available.difference_with(&adj[v]);
            order.push(v);
            colours.push(colour);
        }
    }
    (order, colours)
}

/// Branch and bound maximum clique with colouring bounds.
fn max_clique(adj: &[FixedBitSet], n: usize) -> Vec<usize> {
    fn expand(
        adj: &[FixedBitSet],
        current: &mut Vec<usize>,
        mut cand: FixedBitSet,
        best: &mut Vec<usize>,
    ) {
        let (order, colours) = colour_sort(&cand, adj);
        for k in (0..order.len()).rev() {
            if current.len() + colours[k] <= best.len() {
                return;
            }
            let v = order[k];
            current.push(v);
            let mut next = cand.clone();
            next.intersect_with(&adj[v]);
            if next.is_clear() {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            } else {
                expand(adj, current, next, best);
            }
            current.pop();
            cand.set(v, false);
        }
    }

    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);
    let mut best = Vec::new();
    expand(adj, &mut Vec::new(), all, &mut best);
    best.sort_unstable();
    best
}

/// Independence number with a witness set.
///
/// Computed as a maximum clique of the complement by colouring-bounded branch
/// and bound; the search is exact, and the witness is deterministic.
pub fn independence_number(g: &ExclusivityGraph) -> (usize, IndependentSet) {
    let co = g.complement();
    let best = max_clique(&co.adjacency, g.n);
    let members: Vec<usize> = best.into_iter().map(|v| v + 1).collect();
    (members.len(), IndependentSet { members })
}

/// All inclusion-maximal cliques, via Bron–Kerbosch with Tomita pivoting.
/// Each clique is sorted and the list is in lexicographic order.
pub fn maximal_cliques(g: &ExclusivityGraph) -> Vec<Clique> {
    fn recurse(
        adj: &[FixedBitSet],
        r: &mut Vec<usize>,
        mut p: FixedBitSet,
        mut x: FixedBitSet,
        out: &mut Vec<Clique>,
    ) {
        if p.is_clear() && x.is_clear() {
            let mut members: Vec<usize> = r.iter().map(|v| v + 1).collect();
            members.sort_unstable();
            out.push(Clique { members });
            return;
        }
        // pivot maximising |P ∩ N(u)| over u in P ∪ X
        let pivot = p
            .union(&x)
            .max_by_key(|&u| (p.intersection(&adj[u]).count(), std::cmp::Reverse(u)))
            .expect("P ∪ X is non-empty");
        let mut branch = p.clone();
        branch.difference_with(&adj[pivot]);
        for v in branch.ones() {
            let mut np = p.clone();
            np.intersect_with(&adj[v]);
            let mut nx = x.clone();
            nx.intersect_with(&adj[v]);
            r.push(v);
            recurse(adj, r, np, nx, out);
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
    }

    let mut p = FixedBitSet::with_capacity(g.n);
    p.insert_range(..);
    let mut out = Vec::new();
    recurse(
        &g.adjacency,
        &mut Vec::new(),
        p,
        FixedBitSet::with_capacity(g.n),
        &mut out,
    );
    out.sort();
    out
}

/// A deterministic 0/1 answer per proposition that respects exclusivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalAssignment {
    pub sum: usize,
    /// `values[k]` is the answer for vertex `k + 1`.
    pub values: Vec<u8>,
}

impl ClassicalAssignment {
    pub fn value(&self, vertex: usize) -> u8 {
        self.values[vertex - 1]
    }

    pub fn respects(&self, g: &ExclusivityGraph) -> bool {
        g.edges()
            .all(|(a, b)| !(self.value(a) == 1 && self.value(b) == 1))
    }
}

/// Optimal predefined-answer strategy: answer yes exactly on a maximum
/// independent set.
pub fn best_classical_assignment(g: &ExclusivityGraph) -> ClassicalAssignment {
    let (sum, witness) = independence_number(g);
    let mut values = vec![0u8; g.n];
    for v in witness.members {
        values[v - 1] = 1;
    }
    ClassicalAssignment { sum, values }
}
