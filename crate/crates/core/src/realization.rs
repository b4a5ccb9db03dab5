//! Explicit quantum realizations: a state plus one (unnormalized) vector per
//! vertex, evaluated in exact rational arithmetic.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, ParseError, Result};
use crate::graph::ExclusivityGraph;
use crate::rational::{inner_product, norm_sqr, ComplexRational, Rational};
use crate::report::sig12;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<ComplexRational>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<ComplexRational>) -> Result<Self> {
        if amplitudes.iter().all(ComplexRational::is_zero) {
            return Err(Error::ZeroVector(None));
        }
        Ok(StateVector { amplitudes })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| ComplexRational::from_integer(x)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn to_complex64(&self) -> Vec<Complex64> {
        self.amplitudes.iter().map(ComplexRational::to_complex64).collect()
    }
}

/// Vertex-indexed vectors; `vectors[k]` belongs to vertex `k + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorFamily {
    vectors: Vec<Vec<ComplexRational>>,
}

impl ProjectorFamily {
    pub fn new(vectors: Vec<Vec<ComplexRational>>) -> Result<Self> {
        let dim = vectors.first().ok_or(Error::EmptyFamily)?.len();
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().all(ComplexRational::is_zero) {
                return Err(Error::ZeroVector(Some(k + 1)));
            }
        }
        Ok(ProjectorFamily { vectors })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| ComplexRational::from_integer(x)).collect())
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.vectors[0].len()
    }

    /// Vector of a 1-based vertex.
    pub fn vector(&self, vertex: usize) -> &[ComplexRational] {
        &self.vectors[vertex - 1]
    }

    pub fn vectors(&self) -> &[Vec<ComplexRational>] {
        &self.vectors
    }

    pub fn to_complex64(&self) -> Vec<Vec<Complex64>> {
        self.vectors
            .iter()
            .map(|v| v.iter().map(ComplexRational::to_complex64).collect())
            .collect()
    }
}

fn check_pair(a: &[ComplexRational], b: &[ComplexRational]) -> Result<(Rational, Rational)> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let na = norm_sqr(a);
    let nb = norm_sqr(b);
    if na.is_zero() || nb.is_zero() {
        return Err(Error::ZeroVector(None));
    }
    Ok((na, nb))
}

/// `|<ψ|v>|² / (|v|² |ψ|²)`, exactly.
pub fn vertex_probability(psi: &StateVector, v: &[ComplexRational]) -> Result<Rational> {
    let (np, nv) = check_pair(&psi.amplitudes, v)?;
    Ok(inner_product(&psi.amplitudes, v).norm_sqr() / (np * nv))
}

/// Floating-point evaluation of [`vertex_probability`].
pub fn vertex_probability_f64(psi: &[Complex64], v: &[Complex64]) -> Result<f64> {
    if psi.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: psi.len(),
            found: v.len(),
        });
    }
    let np: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if np == 0.0 || nv == 0.0 {
        return Err(Error::ZeroVector(None));
    }
    let ip: Complex64 = psi.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    Ok(ip.norm_sqr() / (np * nv))
}

pub fn vertex_probabilities(psi: &StateVector, fam: &ProjectorFamily) -> Result<Vec<Rational>> {
    fam.vectors
        .iter()
        .map(|v| vertex_probability(psi, v))
        .collect()
}

/// Σ_i |<ψ|v_i>|² / (|ψ|²|v_i|²).
pub fn quantum_sum(psi: &StateVector, fam: &ProjectorFamily) -> Result<Rational> {
    Ok(vertex_probabilities(psi, fam)?.into_iter().sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeOverlap {
    pub edge: (usize, usize),
    /// Exact normalized squared overlap `|<v_i|v_j>|² / (|v_i|²|v_j|²)`.
    pub overlap_sqr: Rational,
    /// `sqrt(overlap_sqr)`.
    pub overlap: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compatibility {
    pub edges: Vec<EdgeOverlap>,
    pub violations: Vec<EdgeOverlap>,
}

impl Compatibility {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}

fn normalized_overlap_sqr(a: &[ComplexRational], b: &[ComplexRational]) -> Rational {
    inner_product(a, b).norm_sqr() / (norm_sqr(a) * norm_sqr(b))
}

/// Overlap of every edge's vectors; an edge is a violation when its
/// normalized overlap exceeds `tol` (compared exactly on squares).
pub fn verify_compatibility(
    fam: &ProjectorFamily,
    g: &ExclusivityGraph,
    tol: f64,
) -> Result<Compatibility> {
    if fam.len() != g.vertex_count() {
        return Err(Error::IndexMismatch {
            vectors: fam.len(),
            vertices: g.vertex_count(),
        });
    }
    let tol = Rational::from_f64(tol)
        .filter(|t| !t.is_negative())
        .ok_or(Error::InvalidProbability(tol))?;
    let tol_sq = &tol * &tol;
    let edges: Vec<EdgeOverlap> = g
        .edges()
        .map(|(i, j)| {
            let overlap_sqr = normalized_overlap_sqr(fam.vector(i), fam.vector(j));
            EdgeOverlap {
                edge: (i, j),
                overlap: overlap_sqr.to_f64().sqrt(),
                overlap_sqr,
            }
        })
        .collect();
    let violations = edges
        .iter()
        .filter(|e| e.overlap_sqr > tol_sq)
        .cloned()
        .collect();
    Ok(Compatibility { edges, violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapKind {
    Orthogonal,
    Unbiased,
    Other,
}

impl OverlapKind {
    pub fn label(self) -> &'static str {
        match self {
            OverlapKind::Orthogonal => "orthogonal",
            OverlapKind::Unbiased => "unbiased",
            OverlapKind::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapMatrix {
    pub dimension: usize,
    /// `entries[i][j]` compares vertices `i + 1` and `j + 1`.
    pub entries: Vec<Vec<(OverlapKind, Rational)>>,
}

impl OverlapMatrix {
    pub fn get(&self, a: usize, b: usize) -> &(OverlapKind, Rational) {
        &self.entries[a - 1][b - 1]
    }
}

/// Classifies every pair's normalized squared overlap as 0, 1/d or other.
pub fn overlap_classification(fam: &ProjectorFamily) -> OverlapMatrix {
    let d = fam.dimension();
    let unbiased = Rational::new(1, d as i64);
    let entries = fam
        .vectors
        .iter()
        .map(|a| {
            fam.vectors
                .iter()
                .map(|b| {
                    let value = normalized_overlap_sqr(a, b);
                    let kind = if value.is_zero() {
                        OverlapKind::Orthogonal
                    } else if value == unbiased {
                        OverlapKind::Unbiased
                    } else {
                        OverlapKind::Other
                    };
                    (kind, value)
                })
                .collect()
        })
        .collect();
    OverlapMatrix {
        dimension: d,
        entries,
    }
}

/// A state together with its projector family, as read from a realization file.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub state: StateVector,
    pub family: ProjectorFamily,
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    ParseError::Field {
        field: field.into(),
        message: message.into(),
    }
    .into()
}

fn parse_real(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from_integer)
            .ok_or_else(|| field_err(field, format!("`{n}` is not an integer; use \"p/q\""))),
        Value::String(s) => s.parse().map_err(|e: ParseError| field_err(field, e.to_string())),
        other => Err(field_err(field, format!("expected a number or \"p/q\", got {other}"))),
    }
}

fn parse_entry(v: &Value, field: &str) -> Result<ComplexRational> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(ComplexRational::new(
            parse_real(&parts[0], field)?,
            parse_real(&parts[1], field)?,
        )),
        Value::Array(_) => Err(field_err(field, "complex entry must be [real, imag]")),
        other => parse_real(other, field).map(ComplexRational::real),
    }
}

fn parse_vector(v: &Value, field: &str, dim: usize) -> Result<Vec<ComplexRational>> {
    let items = v
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array"))?;
    if items.len() != dim {
        return Err(field_err(
            field,
            format!("has {} entries, dimension is {dim}", items.len()),
        ));
    }
    items.iter().map(|x| parse_entry(x, field)).collect()
}

fn render_entry(z: &ComplexRational) -> Value {
    json!([z.re.to_string(), z.im.to_string()])
}

impl Realization {
    pub fn new(state: StateVector, family: ProjectorFamily) -> Result<Self> {
        if state.dimension() != family.dimension() {
            return Err(Error::DimensionMismatch {
                expected: family.dimension(),
                found: state.dimension(),
            });
        }
        Ok(Realization { state, family })
    }

    pub fn dimension(&self) -> usize {
        self.state.dimension()
    }

    /// Reads `{"dimension": d, "state": [...], "vectors": {"1": [...], ...}}`.
    /// Entries are `[re, im]` pairs of integers or `"p/q"` strings, or a bare
    /// integer / `"p/q"` for a real entry. Vertex keys must be exactly `1..=n`.
    pub fn from_json(text: &str) -> Result<Self> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        let dim = root
            .get("dimension")
            .and_then(Value::as_u64)
            .filter(|&d| d >= 1)
            .ok_or_else(|| field_err("dimension", "expected a positive integer"))?
            as usize;
        let state = parse_vector(
            root.get("state").ok_or_else(|| field_err("state", "missing"))?,
            "state",
            dim,
        )?;
        let state =
            StateVector::new(state).map_err(|e| field_err("state", e.to_string()))?;
        let vectors = root
            .get("vectors")
            .and_then(Value::as_object)
            .ok_or_else(|| field_err("vectors", "expected an object keyed by vertex"))?;
        let mut by_vertex = BTreeMap::new();
        for (key, value) in vectors {
            let vertex: usize = key
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| field_err(format!("vectors.{key}"), "key is not a vertex index"))?;
            let field = format!("vectors.{key}");
            by_vertex.insert(vertex, parse_vector(value, &field, dim)?);
        }
        if by_vertex.is_empty() {
            return Err(field_err("vectors", "no vectors"));
        }
        if let Some((pos, (&k, _))) = by_vertex.iter().enumerate().find(|(p, (&k, _))| k != p + 1)
        {
            return Err(field_err(
                "vectors",
                format!("vertex keys must be 1..=n; found {k} at position {}", pos + 1),
            ));
        }
        let family = ProjectorFamily::new(by_vertex.into_values().collect())
            .map_err(|e| field_err("vectors", e.to_string()))?;
        Realization::new(state, family)
    }

    pub fn to_json(&self) -> Value {
        let vectors: serde_json::Map<String, Value> = self
            .family
            .vectors()
            .iter()
            .enumerate()
            .map(|(k, v)| ((k + 1).to_string(), Value::Array(v.iter().map(render_entry).collect())))
            .collect();
        json!({
            "dimension": self.dimension(),
            "state": self.state.amplitudes.iter().map(render_entry).collect::<Vec<_>>(),
            "vectors": vectors,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizationReport {
    pub per_vertex_probabilities: Vec<Rational>,
    pub quantum_sum: Rational,
    pub orthogonality_violations: Vec<EdgeOverlap>,
    pub checked_edges: usize,
    pub dimension: usize,
    pub overlaps: OverlapMatrix,
}

pub fn realization_report(
    r: &Realization,
    g: &ExclusivityGraph,
    tol: f64,
) -> Result<RealizationReport> {
    let compat = verify_compatibility(&r.family, g, tol)?;
    let per_vertex_probabilities = vertex_probabilities(&r.state, &r.family)?;
    let quantum_sum = per_vertex_probabilities.iter().sum();
    Ok(RealizationReport {
        per_vertex_probabilities,
        quantum_sum,
        checked_edges: compat.edges.len(),
        orthogonality_violations: compat.violations,
        dimension: r.dimension(),
        overlaps: overlap_classification(&r.family),
    })
}

impl RealizationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "dimension": self.dimension,
            "per_vertex_probabilities": self.per_vertex_probabilities
                .iter().map(ToString::to_string).collect::<Vec<_>>(),
            "quantum_sum": self.quantum_sum.to_string(),
            "quantum_sum_float": sig12(self.quantum_sum.to_f64()),
            "checked_edges": self.checked_edges,
            "orthogonality_violations": self.orthogonality_violations.iter().map(|v| json!({
                "edge": [v.edge.0, v.edge.1],
                "overlap": sig12(v.overlap),
                "overlap_sqr": v.overlap_sqr.to_string(),
            })).collect::<Vec<_>>(),
            "overlap_classification": {
                "labels": self.overlaps.entries.iter()
                    .map(|row| row.iter().map(|(k, _)| k.label()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "values": self.overlaps.entries.iter()
                    .map(|row| row.iter().map(|(_, v)| v.to_string()).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            },
        })
    }
}
