//! Command-line front end: file I/O, subcommands and report emission.
//!
//! Exit codes: 0 success or certified, 1 negative verdict, 2 input error,
//! 3 solver failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use exclusivity_core::bounds::bounds_report;
use exclusivity_core::expsim::{
    epsilon_certify, run_experiment, EdgeEpsilon, EpsilonReport, HistogramConfig, NoiseModel,
    DEFAULT_BIN_WIDTH, DEFAULT_HISTOGRAM_MAX, DEFAULT_SEED,
};
use exclusivity_core::fixtures::{table_graph, table_realization};
use exclusivity_core::realization::{realization_report, Realization};
use exclusivity_core::report::sig12;
use exclusivity_core::{Error as CoreError, ExclusivityGraph};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

const FILE_SCHEMAS: &str = "\
File formats:
  graph        {\"n\": 10, \"edges\": [[1, 2], [1, 3], ...]}   vertices are 1..=n
  realization  {\"dimension\": 4, \"state\": [0, 0, 0, 1],
                \"vectors\": {\"1\": [0, 0, 1, 1], ...}}
               entries are integers, \"p/q\" strings, or [re, im] pairs of either
  report       JSON written by `simulate` (consumed by `certify --report`)

Without --graph / --realization the bundled ten-vertex instance is used.";

#[derive(Debug, Parser)]
#[command(name = "exclusivity", version, about = "Exclusivity-graph bounds, realizations and simulated experiments", after_help = FILE_SCHEMAS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Independence number, Lovász theta and fractional packing number of a graph.
    #[command(after_help = FILE_SCHEMAS)]
    Bounds {
        #[command(flatten)]
        io: IoArgs,
        /// Theta solver tolerance.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Check a realization against a graph; exits 1 on any orthogonality violation.
    #[command(after_help = FILE_SCHEMAS)]
    Verify {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_name = "PATH")]
        realization: Option<PathBuf>,
        /// Largest normalized edge overlap accepted as orthogonal.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
    /// Monte Carlo run of the vertex table, exclusivity matrix and ε certification.
    #[command(after_help = FILE_SCHEMAS)]
    Simulate {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// ε certification of a simulate report (or of a fresh run); exits 0 iff certified.
    #[command(after_help = FILE_SCHEMAS)]
    Certify {
        #[command(flatten)]
        io: IoArgs,
        /// Report written by `simulate`; when absent a fresh simulation is run.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Runs bounds and simulate on the inputs; timings go to stderr.
    #[command(after_help = FILE_SCHEMAS)]
    Bench {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
}

#[derive(Debug, Args)]
pub struct IoArgs {
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, value_name = "PATH")]
    pub realization: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Depolarizing weight w in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    pub depolarizing: f64,
    /// Standard deviation of the analyzer misalignment angle, radians.
    #[arg(long = "misalign-sigma", default_value_t = 0.0)]
    pub misalign_sigma: f64,
    #[arg(long, default_value_t = DEFAULT_BIN_WIDTH)]
    pub bin_width: f64,
    #[arg(long, default_value_t = DEFAULT_HISTOGRAM_MAX)]
    pub hist_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Input { path: String, source: CoreError },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::NonConvergence { .. } | CoreError::TooLarge { .. }) => EXIT_SOLVER,
            _ => EXIT_INPUT,
        }
    }
}

/// Rendered output of a subcommand plus its exit code and stderr notes.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub body: String,
    pub notes: Vec<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_graph(path: Option<&Path>) -> Result<ExclusivityGraph, CliError> {
    match path {
        None => Ok(table_graph()),
        Some(p) => ExclusivityGraph::from_json(&read(p)?).map_err(|source| CliError::Input {
            path: p.display().to_string(),
            source,
        }),
    }
}

fn load_realization(path: Option<&Path>) -> Result<Realization, CliError> {
    match path {
        None => Ok(table_realization()),
        Some(p) => Realization::from_json(&read(p)?).map_err(|source| CliError::Input {
            path: p.display().to_string(),
            source,
        }),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn noise_model(sim: &SimArgs) -> Result<NoiseModel, CliError> {
    if sim.shots == 0 {
        return Err(CliError::Usage("--shots must be at least 1".into()));
    }
    let noise = NoiseModel {
        depolarizing_weight: sim.depolarizing,
        misalignment_sigma: sim.misalign_sigma,
        shots_per_setting: sim.shots,
    };
    noise.validate()?;
    Ok(noise)
}

pub fn cmd_bounds(io: &IoArgs, tol: f64) -> Result<Outcome, CliError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let g = load_graph(io.graph.as_deref())?;
    let report = bounds_report(&g, tol)?.to_json();
    let body = match io.format {
        Format::Json => pretty(&report),
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for key in ["alpha", "theta", "theta_gap", "alpha_star", "no_postquantum_advantage"] {
                s += &format!("{key},{}\n", csv_value(&report[key]));
            }
            s
        }
    };
    Ok(Outcome { code: EXIT_OK, body, notes: vec![] })
}

pub fn cmd_verify(io: &IoArgs, realization: Option<&Path>, tol: f64) -> Result<Outcome, CliError> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(CliError::Usage("--tol must be nonnegative".into()));
    }
    let g = load_graph(io.graph.as_deref())?;
    let r = load_realization(realization)?;
    let report = realization_report(&r, &g, tol)?;
    let json = report.to_json();
    let body = match io.format {
        Format::Json => pretty(&json),
        Format::Csv => {
            let mut s = String::from("vertex,probability\n");
            for (k, p) in json["per_vertex_probabilities"].as_array().into_iter().flatten().enumerate() {
                s += &format!("{},{}\n", k + 1, csv_value(p));
            }
            s
        }
    };
    let violations = report.orthogonality_violations.len();
    let (code, notes) = if violations == 0 {
        (EXIT_OK, vec![])
    } else {
        (EXIT_NEGATIVE, vec![format!("{violations} orthogonality violation(s)")])
    };
    Ok(Outcome { code, body, notes })
}

fn experiment(io: &IoArgs, sim: &SimArgs) -> Result<Value, CliError> {
    let noise = noise_model(sim)?;
    let g = load_graph(io.graph.as_deref())?;
    let r = load_realization(sim.realization.as_deref())?;
    let hist = HistogramConfig {
        bin_width: sim.bin_width,
        max: sim.hist_max,
    };
    let report = run_experiment(&r, &g, &noise, sim.seed, hist).map_err(|e| match e {
        CoreError::IndexMismatch { .. } | CoreError::DimensionMismatch { .. } => CliError::Input {
            path: "realization".into(),
            source: e,
        },
        other => other.into(),
    })?;
    Ok(report.to_json())
}

pub fn cmd_simulate(io: &IoArgs, sim: &SimArgs) -> Result<Outcome, CliError> {
    let report = experiment(io, sim)?;
    let body = match io.format {
        Format::Json => pretty(&report),
        Format::Csv => histogram_csv(&report),
    };
    Ok(Outcome { code: EXIT_OK, body, notes: vec![] })
}

fn histogram_csv(report: &Value) -> String {
    let mut s = format!("# seed: {}\nbin_left,bin_right,occurrences\n", report["seed"]);
    for bin in report["histogram"]["bins"].as_array().into_iter().flatten() {
        s += &format!("{},{},{}\n", bin["bin_left"], bin["bin_right"], bin["occurrences"]);
    }
    s
}

fn field<'a>(v: &'a Value, path: &str) -> Result<&'a Value, CliError> {
    path.split('.')
        .try_fold(v, |node, key| node.get(key))
        .ok_or_else(|| CliError::Usage(format!("report field `{path}` is missing")))
}

fn number(v: &Value, path: &str) -> Result<f64, CliError> {
    field(v, path)?
        .as_f64()
        .ok_or_else(|| CliError::Usage(format!("report field `{path}` is not a number")))
}

fn count(v: &Value, path: &str) -> Result<usize, CliError> {
    field(v, path)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| CliError::Usage(format!("report field `{path}` is not a nonnegative integer")))
}

/// Rebuilds the certification inputs from a simulate report.
fn certify_from_report(report: &Value) -> Result<EpsilonReport, CliError> {
    let sigma = number(report, "table.sum")?;
    let c = count(report, "epsilon.classical_bound")?;
    let n = count(report, "epsilon.vertex_count")?;
    let edges = field(report, "epsilon.per_edge_epsilon")?
        .as_array()
        .ok_or_else(|| CliError::Usage("report field `epsilon.per_edge_epsilon` is not a list".into()))?;
    let per_edge = edges
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let at = format!("epsilon.per_edge_epsilon.{k}");
            let pair = e
                .get("edge")
                .and_then(Value::as_array)
                .filter(|p| p.len() == 2)
                .and_then(|p| Some((p[0].as_u64()? as usize, p[1].as_u64()? as usize)))
                .ok_or_else(|| CliError::Usage(format!("report field `{at}.edge` is not a vertex pair")))?;
            Ok(EdgeEpsilon {
                edge: pair,
                value: number(e, "value").map_err(|_| CliError::Usage(format!("report field `{at}.value` is not a number")))?,
                error: number(e, "error").map_err(|_| CliError::Usage(format!("report field `{at}.error` is not a number")))?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(epsilon_certify(sigma, c, n, &per_edge)?)
}

pub fn cmd_certify(io: &IoArgs, report: Option<&Path>, sim: &SimArgs) -> Result<Outcome, CliError> {
    let (seed, source) = match report {
        Some(p) => {
            let text = read(p)?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Io {
                path: p.display().to_string(),
                message: format!("invalid JSON: {e}"),
            })?;
            (v.get("seed").cloned().unwrap_or(Value::Null), v)
        }
        None => (json!(sim.seed), experiment(io, sim)?),
    };
    let eps = certify_from_report(&source)?;
    let body = match io.format {
        Format::Json => {
            let mut out = serde_json::Map::new();
            out.insert("seed".into(), seed);
            if let Value::Object(m) = eps.to_json() {
                out.extend(m);
            }
            pretty(&Value::Object(out))
        }
        Format::Csv => {
            let mut s = format!("# seed: {seed}\nedge_i,edge_j,epsilon,error\n");
            for e in &eps.per_edge_epsilon {
                s += &format!("{},{},{},{}\n", e.edge.0, e.edge.1, sig12(e.value), sig12(e.error));
            }
            s
        }
    };
    let code = if eps.certified { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome { code, body, notes: vec![format!("verdict: {}", eps.verdict())] })
}

pub fn cmd_bench(io: &IoArgs, sim: &SimArgs) -> Result<Outcome, CliError> {
    if io.format == Format::Csv {
        return Err(CliError::Usage("bench writes JSON only".into()));
    }
    let g = load_graph(io.graph.as_deref())?;
    let start = Instant::now();
    let bounds = bounds_report(&g, 1e-6)?;
    let bounds_time = start.elapsed();
    let start = Instant::now();
    let report = experiment(io, sim)?;
    let sim_time = start.elapsed();
    let body = pretty(&json!({
        "seed": sim.seed,
        "bounds": bounds.to_json(),
        "simulation": {
            "shots_per_setting": sim.shots,
            "sum": report["table"]["sum"],
            "diagonal_mean": report["diagonal_mean"],
            "mean_epsilon": report["epsilon"]["mean_epsilon"],
            "verdict": report["epsilon"]["verdict"],
        },
    }));
    Ok(Outcome {
        code: EXIT_OK,
        body,
        notes: vec![
            format!("bounds: {:.3} s", bounds_time.as_secs_f64()),
            format!("simulate: {:.3} s", sim_time.as_secs_f64()),
        ],
    })
}

pub fn execute(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let (outcome, io) = match &cli.command {
        Command::Bounds { io, tol } => (cmd_bounds(io, *tol)?, io),
        Command::Verify { io, realization, tol } => (cmd_verify(io, realization.as_deref(), *tol)?, io),
        Command::Simulate { io, sim } => (cmd_simulate(io, sim)?, io),
        Command::Certify { io, report, sim } => (cmd_certify(io, report.as_deref(), sim)?, io),
        Command::Bench { io, sim } => (cmd_bench(io, sim)?, io),
    };
    Ok((outcome, io.out.clone()))
}

/// Parses `args`, runs the subcommand and writes its output. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{rendered}");
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok((outcome, out)) => {
            for note in &outcome.notes {
                let _ = writeln!(stderr, "{note}");
            }
            match out {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &outcome.body) {
                        let _ = writeln!(stderr, "error: {}: {e}", path.display());
                        return EXIT_INPUT;
                    }
                }
                None => {
                    let _ = stdout.write_all(outcome.body.as_bytes());
                }
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
