//! Monte Carlo model of the photon-counting experiment.
//!
//! Each measurement setting (prepared state, analyzer) gets its own ChaCha8
//! stream, derived from the run seed and the setting's indices, so results do
//! not depend on evaluation order.
//!
//! Noise has two parts:
//! * depolarizing weight `w` on the prepared state:
//!   `p -> (1 - w) p + w / d`;
//! * analyzer misalignment: each analyzer is rotated by a Gaussian angle
//!   `θ ~ N(0, σ)` towards a uniformly random orthogonal direction, once per
//!   setting.
//!
//! Counts are binomial in the number of shots; error bars are Poissonian,
//! `sqrt(counts) / shots`, with a single-count floor when nothing is detected.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal, StandardNormal};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{independence_number, ExclusivityGraph};
use crate::realization::Realization;
use crate::report::sig12;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_111_020;

/// Default histogram layout for edge probabilities.
pub const DEFAULT_BIN_WIDTH: f64 = 0.005;
pub const DEFAULT_HISTOGRAM_MAX: f64 = 0.08;

/// Depolarizing weight giving mean self-fidelity `f` in dimension `d`:
/// `f = 1 - w (d - 1) / d`.
pub fn calibrated_depolarizing_weight(fidelity: f64, d: usize) -> f64 {
    (1.0 - fidelity) * d as f64 / (d as f64 - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub depolarizing_weight: f64,
    /// Standard deviation of the analyzer rotation angle, radians.
    pub misalignment_sigma: f64,
    pub shots_per_setting: u64,
}

impl NoiseModel {
    pub fn ideal(shots: u64) -> Self {
        NoiseModel {
            depolarizing_weight: 0.0,
            misalignment_sigma: 0.0,
            shots_per_setting: shots,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.depolarizing_weight) {
            return Err(Error::InvalidNoise(format!(
                "depolarizing weight {} outside [0, 1]",
                self.depolarizing_weight
            )));
        }
        if !(self.misalignment_sigma >= 0.0 && self.misalignment_sigma.is_finite()) {
            return Err(Error::InvalidNoise(format!(
                "misalignment sigma {} must be finite and nonnegative",
                self.misalignment_sigma
            )));
        }
        if self.shots_per_setting == 0 {
            return Err(Error::InvalidNoise("shots per setting must be at least 1".into()));
        }
        Ok(())
    }

    /// Infinite-shot probability after depolarizing in dimension `d`.
    pub fn depolarized(&self, p: f64, d: usize) -> f64 {
        (1.0 - self.depolarizing_weight) * p + self.depolarizing_weight / d as f64
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depolarizing_weight": sig12(self.depolarizing_weight),
            "misalignment_sigma": sig12(self.misalignment_sigma),
            "shots_per_setting": self.shots_per_setting,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimatedProbability {
    pub value: f64,
    pub error: f64,
    pub counts: u64,
    pub shots: u64,
}

impl EstimatedProbability {
    pub fn from_counts(counts: u64, shots: u64) -> Self {
        let shots_f = shots as f64;
        EstimatedProbability {
            value: counts as f64 / shots_f,
            error: (counts.max(1) as f64).sqrt() / shots_f,
            counts,
            shots,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "value": sig12(self.value),
            "error": sig12(self.error),
            "counts": self.counts,
            "shots": self.shots,
        })
    }
}

#[derive(Clone, Copy)]
enum Stream {
    Single,
    Table(usize),
    Matrix(usize, usize),
}

fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let id = match stream {
        Stream::Single => 0,
        Stream::Table(j) => (1u64 << 48) | j as u64,
        Stream::Matrix(i, j) => (2u64 << 48) | ((i as u64) << 24) | j as u64,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn draw_counts(p: f64, shots: u64, rng: &mut ChaCha8Rng) -> EstimatedProbability {
    let p = p.clamp(0.0, 1.0);
    let counts = Binomial::new(shots, p)
        .expect("probability clamped to [0, 1]")
        .sample(rng);
    EstimatedProbability::from_counts(counts, shots)
}

/// Depolarizes `p` (in dimension 4, the ququart) and samples counts.
///
/// Misalignment needs analyzer vectors and is applied by the table and
/// matrix runs, not here.
pub fn simulate_counts(p: f64, noise: &NoiseModel, seed: u64) -> Result<EstimatedProbability> {
    simulate_counts_in(p, 4, noise, seed)
}

pub fn simulate_counts_in(
    p: f64,
    d: usize,
    noise: &NoiseModel,
    seed: u64,
) -> Result<EstimatedProbability> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    noise.validate()?;
    let mut rng = stream_rng(seed, Stream::Single);
    Ok(draw_counts(noise.depolarized(p, d), noise.shots_per_setting, &mut rng))
}

fn normalize(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter().map(|z| z / n).collect()
}

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Rotates unit vector `a` by a Gaussian angle towards a random direction
/// orthogonal to it.
fn misalign(a: &[Complex64], sigma: f64, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    if sigma == 0.0 || a.len() < 2 {
        return a.to_vec();
    }
    let theta: f64 = Normal::new(0.0, sigma).expect("sigma is finite").sample(rng);
    loop {
        let g: Vec<Complex64> = (0..a.len())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let proj = inner(a, &g);
        let u: Vec<Complex64> = g.iter().zip(a).map(|(x, y)| x - proj * y).collect();
        let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-9 {
            let (s, c) = theta.sin_cos();
            return a.iter().zip(&u).map(|(x, y)| x * c + y * (s / norm)).collect();
        }
    }
}

/// One noisy measurement of `analyzer` on the prepared `state` (both unit).
fn measure_setting(
    state: &[Complex64],
    analyzer: &[Complex64],
    noise: &NoiseModel,
    rng: &mut ChaCha8Rng,
) -> EstimatedProbability {
    let analyzer = misalign(analyzer, noise.misalignment_sigma, rng);
    let p = inner(&analyzer, state).norm_sqr();
    draw_counts(noise.depolarized(p, state.len()), noise.shots_per_setting, rng)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Run {
    pub ideal: Vec<f64>,
    pub estimates: Vec<EstimatedProbability>,
    pub sum: f64,
    /// Errors of the individual estimates added in quadrature.
    pub sum_error: f64,
}

/// Measures every vertex's analyzer on the realization's state.
pub fn run_table1(r: &Realization, noise: &NoiseModel, seed: u64) -> Result<Table1Run> {
    noise.validate()?;
    let psi = normalize(&r.state.to_complex64());
    let analyzers: Vec<Vec<Complex64>> =
        r.family.to_complex64().iter().map(|v| normalize(v)).collect();
    let ideal: Vec<f64> = analyzers.iter().map(|a| inner(a, &psi).norm_sqr()).collect();
    let estimates: Vec<EstimatedProbability> = analyzers
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let mut rng = stream_rng(seed, Stream::Table(j + 1));
            measure_setting(&psi, a, noise, &mut rng)
        })
        .collect();
    let sum = estimates.iter().map(|e| e.value).sum();
    let sum_error = estimates.iter().map(|e| e.error * e.error).sum::<f64>().sqrt();
    Ok(Table1Run {
        ideal,
        estimates,
        sum,
        sum_error,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExclusivityMatrix {
    /// `entries[i][j]`: analyzer of vertex `j + 1` on the state of vertex `i + 1`.
    pub entries: Vec<Vec<EstimatedProbability>>,
}

impl ExclusivityMatrix {
    /// 1-based access.
    pub fn get(&self, prepared: usize, analyzer: usize) -> &EstimatedProbability {
        &self.entries[prepared - 1][analyzer - 1]
    }

    pub fn diagonal_mean(&self) -> f64 {
        let n = self.entries.len();
        (0..n).map(|i| self.entries[i][i].value).sum::<f64>() / n as f64
    }

    /// Both orientations of every edge: `(i, j)` then `(j, i)`.
    pub fn edge_pairs(&self, g: &ExclusivityGraph) -> Vec<((usize, usize), EstimatedProbability)> {
        g.edges()
            .flat_map(|(i, j)| [((i, j), *self.get(i, j)), ((j, i), *self.get(j, i))])
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "value": self.entries.iter()
                .map(|row| row.iter().map(|e| sig12(e.value)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "error": self.entries.iter()
                .map(|row| row.iter().map(|e| sig12(e.error)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "counts": self.entries.iter()
                .map(|row| row.iter().map(|e| e.counts).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

/// Prepares each vertex's own state and measures every analyzer on it.
/// The diagonal holds the preparation/analysis fidelities.
pub fn run_exclusivity_matrix(
    r: &Realization,
    noise: &NoiseModel,
    seed: u64,
) -> Result<ExclusivityMatrix> {
    noise.validate()?;
    let vectors: Vec<Vec<Complex64>> =
        r.family.to_complex64().iter().map(|v| normalize(v)).collect();
    let entries = vectors
        .iter()
        .enumerate()
        .map(|(i, state)| {
            vectors
                .iter()
                .enumerate()
                .map(|(j, analyzer)| {
                    let mut rng = stream_rng(seed, Stream::Matrix(i + 1, j + 1));
                    measure_setting(state, analyzer, noise, &mut rng)
                })
                .collect()
        })
        .collect();
    Ok(ExclusivityMatrix { entries })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HistogramBin {
    pub left: f64,
    pub right: f64,
    pub occurrences: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub bins: Vec<HistogramBin>,
    /// Values at or beyond the last bin's right edge.
    pub overflow: usize,
}

impl Histogram {
    pub fn new(values: impl IntoIterator<Item = f64>, width: f64, max: f64) -> Result<Self> {
        if !(width > 0.0 && max > 0.0 && width.is_finite() && max.is_finite()) {
            return Err(Error::InvalidNoise(format!(
                "histogram width {width} and range {max} must be positive"
            )));
        }
        let count = (max / width).round().max(1.0) as usize;
        let mut bins: Vec<HistogramBin> = (0..count)
            .map(|k| HistogramBin {
                left: k as f64 * width,
                right: (k + 1) as f64 * width,
                occurrences: 0,
            })
            .collect();
        let mut overflow = 0;
        for v in values {
            let k = (v.max(0.0) / width).floor() as usize;
            match bins.get_mut(k) {
                Some(bin) => bin.occurrences += 1,
                None => overflow += 1,
            }
        }
        Ok(Histogram { bins, overflow })
    }

    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.occurrences).sum::<usize>() + self.overflow
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,occurrences\n");
        for b in &self.bins {
            out.push_str(&format!("{},{},{}\n", sig12(b.left), sig12(b.right), b.occurrences));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bins": self.bins.iter().map(|b| json!({
                "bin_left": sig12(b.left),
                "bin_right": sig12(b.right),
                "occurrences": b.occurrences,
            })).collect::<Vec<_>>(),
            "overflow": self.overflow,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeEpsilon {
    pub edge: (usize, usize),
    pub value: f64,
    pub error: f64,
}

/// Per-edge ε: mean of `p(i,j)` and `p(j,i)`, errors in quadrature.
pub fn per_edge_epsilon(m: &ExclusivityMatrix, g: &ExclusivityGraph) -> Vec<EdgeEpsilon> {
    g.edges()
        .map(|(i, j)| {
            let (a, b) = (m.get(i, j), m.get(j, i));
            EdgeEpsilon {
                edge: (i, j),
                value: 0.5 * (a.value + b.value),
                error: 0.5 * (a.error * a.error + b.error * b.error).sqrt(),
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonReport {
    pub sigma_measured: f64,
    pub classical_bound: usize,
    pub vertex_count: usize,
    /// `(Σ - C) / (n - C)`: the largest ε with `C(1-ε) + nε < Σ`.
    pub epsilon_threshold: f64,
    pub per_edge_epsilon: Vec<EdgeEpsilon>,
    pub mean_epsilon: f64,
    pub mean_epsilon_error: f64,
    pub max_epsilon: f64,
    /// `Σ > C`.
    pub advantage: bool,
    pub certified: bool,
}

/// ε-robustness check: would a classical model that drops every exclusivity
/// constraint with probability ε still fall short of Σ?
pub fn epsilon_certify(
    sigma_measured: f64,
    classical_bound: usize,
    vertex_count: usize,
    per_edge: &[EdgeEpsilon],
) -> Result<EpsilonReport> {
    if vertex_count <= classical_bound {
        return Err(Error::InvalidCertification(format!(
            "vertex count {vertex_count} must exceed the classical bound {classical_bound}"
        )));
    }
    if !sigma_measured.is_finite() {
        return Err(Error::InvalidCertification(format!("Σ = {sigma_measured}")));
    }
    let c = classical_bound as f64;
    let threshold = (sigma_measured - c) / (vertex_count as f64 - c);
    let advantage = sigma_measured > c;
    let count = per_edge.len().max(1) as f64;
    let mean = per_edge.iter().map(|e| e.value).sum::<f64>() / count;
    let mean_error = per_edge.iter().map(|e| e.error * e.error).sum::<f64>().sqrt() / count;
    let max = per_edge.iter().map(|e| e.value).fold(0.0, f64::max);
    let certified = advantage && per_edge.iter().all(|e| e.value < threshold);
    Ok(EpsilonReport {
        sigma_measured,
        classical_bound,
        vertex_count,
        epsilon_threshold: threshold,
        per_edge_epsilon: per_edge.to_vec(),
        mean_epsilon: if per_edge.is_empty() { 0.0 } else { mean },
        mean_epsilon_error: mean_error,
        max_epsilon: max,
        advantage,
        certified,
    })
}

impl EpsilonReport {
    pub fn to_json(&self) -> Value {
        json!({
            "sigma_measured": sig12(self.sigma_measured),
            "classical_bound": self.classical_bound,
            "vertex_count": self.vertex_count,
            "epsilon_threshold": sig12(self.epsilon_threshold),
            "per_edge_epsilon": self.per_edge_epsilon.iter().map(|e| json!({
                "edge": [e.edge.0, e.edge.1],
                "value": sig12(e.value),
                "error": sig12(e.error),
            })).collect::<Vec<_>>(),
            "mean_epsilon": sig12(self.mean_epsilon),
            "mean_epsilon_error": sig12(self.mean_epsilon_error),
            "max_epsilon": sig12(self.max_epsilon),
            "advantage": self.advantage,
            "certified": self.certified,
            "verdict": self.verdict(),
        })
    }

    pub fn verdict(&self) -> &'static str {
        if !self.advantage {
            "no advantage"
        } else if self.certified {
            "certified"
        } else {
            "not certified"
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub seed: u64,
    pub noise: NoiseModel,
    pub table: Table1Run,
    pub matrix: ExclusivityMatrix,
    pub histogram: Histogram,
    pub epsilon: EpsilonReport,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HistogramConfig {
    pub bin_width: f64,
    pub max: f64,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        HistogramConfig {
            bin_width: DEFAULT_BIN_WIDTH,
            max: DEFAULT_HISTOGRAM_MAX,
        }
    }
}

/// Full simulated experiment: vertex table, exclusivity matrix, histogram of
/// edge probabilities, and ε certification against the graph's α.
pub fn run_experiment(
    r: &Realization,
    g: &ExclusivityGraph,
    noise: &NoiseModel,
    seed: u64,
    histogram: HistogramConfig,
) -> Result<ExperimentReport> {
    if r.family.len() != g.vertex_count() {
        return Err(Error::IndexMismatch {
            vectors: r.family.len(),
            vertices: g.vertex_count(),
        });
    }
    let table = run_table1(r, noise, seed)?;
    let matrix = run_exclusivity_matrix(r, noise, seed)?;
    let hist = Histogram::new(
        matrix.edge_pairs(g).into_iter().map(|(_, e)| e.value),
        histogram.bin_width,
        histogram.max,
    )?;
    let (alpha, _) = independence_number(g);
    let epsilon = epsilon_certify(
        table.sum,
        alpha,
        g.vertex_count(),
        &per_edge_epsilon(&matrix, g),
    )?;
    Ok(ExperimentReport {
        seed,
        noise: *noise,
        table,
        matrix,
        histogram: hist,
        epsilon,
    })
}

impl ExperimentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "seed": self.seed,
            "noise": self.noise.to_json(),
            "table": {
                "vertices": self.table.estimates.iter().zip(&self.table.ideal).enumerate()
                    .map(|(k, (e, ideal))| {
                        let mut v = e.to_json();
                        v["vertex"] = json!(k + 1);
                        v["ideal"] = sig12(*ideal);
                        v
                    })
                    .collect::<Vec<_>>(),
                "sum": sig12(self.table.sum),
                "sum_error": sig12(self.table.sum_error),
            },
            "exclusivity_matrix": self.matrix.to_json(),
            "diagonal_mean": sig12(self.matrix.diagonal_mean()),
            "histogram": self.histogram.to_json(),
            "epsilon": self.epsilon.to_json(),
        })
    }
}
