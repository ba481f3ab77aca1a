//! `sidedisk` command-line tool.
//!
//! Exit codes: 0 success, 1 a check failed or the input was rejected,
//! 2 usage error, 3 file or format error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use sidedisk::bench::{run_bench, DEFAULT_SIZES};
use sidedisk::constructions::{extremal_polygon, random_convex_polygon, regular_polygon, run_c4_probe};
use sidedisk::decomposition::{build_tree_decomposition, validate_decomposition, width};
use sidedisk::graph::{graph_bruteforce, graph_from_decomposition, to_dot, to_edge_list, IntersectionGraph};
use sidedisk::io;
use sidedisk::medial_axis::compute_medial_axis;
use sidedisk::mis::{mis_bruteforce, mis_dp};
use sidedisk::realizer::{check_good, realize};
use sidedisk::svg::{render_svg, Layers};
use sidedisk::verify::{corpus, verify_corpus, CorpusConfig};
use sidedisk::{ConvexPolygon, IntersectionMode, Tolerance};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Check(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Format(_) => 3,
        }
    }
}

impl From<sidedisk::Error> for CliError {
    fn from(e: sidedisk::Error) -> Self {
        match e {
            sidedisk::Error::Format(m) => CliError::Format(format!("malformed input: {m}")),
            other => CliError::Check(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "sidedisk",
    version,
    about = "Side-disk intersection graphs of convex polygons"
)]
struct Cli {
    /// Intersection tolerance; overrides SIDEDISK_EPS.
    #[arg(long, global = true)]
    eps: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Extremal,
    Regular,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Closed,
    Open,
}

impl From<ModeArg> for IntersectionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Closed => IntersectionMode::Closed,
            ModeArg::Open => IntersectionMode::Open,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Fast,
    Oracle,
    Dp,
    Bruteforce,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphFormat {
    Json,
    Edges,
    Dot,
}

#[derive(Debug, Args)]
struct InOut {
    /// Input file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a polygon.
    Gen {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Medial axis of a polygon.
    MedialAxis {
        #[command(flatten)]
        io: InOut,
    },
    /// Width-3 tree decomposition of a polygon's side-disk graph.
    Treedecomp {
        #[command(flatten)]
        io: InOut,
        #[arg(long, value_enum, default_value = "closed")]
        mode: ModeArg,
    },
    /// Side-disk intersection graph.
    Graph {
        #[command(flatten)]
        io: InOut,
        #[arg(long, value_enum, default_value = "closed")]
        mode: ModeArg,
        /// `fast` (via the decomposition) or `oracle` (all pairs).
        #[arg(long, value_enum, default_value = "fast")]
        method: Method,
        #[arg(long, value_enum, default_value = "json")]
        format: GraphFormat,
    },
    /// Maximum independent set of the side disks.
    Mis {
        #[command(flatten)]
        io: InOut,
        #[arg(long, value_enum, default_value = "closed")]
        mode: ModeArg,
        /// `dp` (tree decomposition) or `bruteforce` (n <= 24).
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
    },
    /// Polygon whose side-disk graph is a given outerplanar Hamiltonian graph.
    Realize {
        #[command(flatten)]
        io: InOut,
    },
    /// Opposite side disks of random quadrilaterals.
    ProbeC4 {
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the standard corpus; the full report goes to --out.
    Verify {
        /// Number of random polygons.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also round-trip every outerplanar graph up to this many vertices.
        #[arg(long, default_value_t = 0)]
        outerplanar: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the pipeline stages.
    Bench {
        /// Comma-separated polygon sizes.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_SIZES)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Time budget per stage and size, in milliseconds.
        #[arg(long, default_value_t = 300)]
        budget_ms: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a polygon as SVG.
    Render {
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        disks: bool,
        #[arg(long)]
        axis: bool,
        /// Highlight a maximum independent set.
        #[arg(long)]
        mis: bool,
        /// Draw the decomposition tree.
        #[arg(long)]
        tree: bool,
        #[arg(long, value_enum, default_value = "closed")]
        mode: ModeArg,
    },
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        }),
        None => {
            emit(text);
            Ok(())
        }
    }
}

/// Prints to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn read_polygon(path: &Path, tol: Tolerance) -> CliResult<ConvexPolygon> {
    Ok(io::polygon_from_json(&read(path)?, tol)?)
}

fn tolerance(eps: Option<f64>) -> CliResult<Tolerance> {
    match eps {
        Some(e) => Tolerance::new(e).map_err(|e| CliError::Usage(e.to_string())),
        None => Tolerance::from_env().map_err(|e| CliError::Usage(e.to_string())),
    }
}

fn fast_graph(p: &ConvexPolygon, mode: IntersectionMode, tol: Tolerance) -> CliResult<IntersectionGraph> {
    let td = build_tree_decomposition(p, &compute_medial_axis(p, tol), tol)?;
    Ok(graph_from_decomposition(p, &td, mode, tol))
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = tolerance(cli.eps)?;
    match cli.command {
        Command::Gen { family, n, seed, out } => {
            if n < 3 {
                return Err(CliError::Usage(format!("--n must be at least 3, got {n}")));
            }
            let p = match family {
                Family::Extremal => extremal_polygon(n, tol)?,
                Family::Regular => regular_polygon(n, 1.0)?,
                Family::Random => random_convex_polygon(n, seed)?,
            };
            write(out.as_deref(), &io::polygon_to_json(&p))
        }
        Command::MedialAxis { io: f } => {
            let p = read_polygon(&f.input, tol)?;
            write(
                f.out.as_deref(),
                &io::medial_axis_to_json(&compute_medial_axis(&p, tol)),
            )
        }
        Command::Treedecomp { io: f, mode } => {
            let p = read_polygon(&f.input, tol)?;
            let td = build_tree_decomposition(&p, &compute_medial_axis(&p, tol), tol)?;
            write(f.out.as_deref(), &io::decomposition_to_json(&td))?;
            let report = validate_decomposition(&graph_bruteforce(&p, mode.into(), tol), &td);
            if !report.passed() || width(&td) > 3 {
                return Err(CliError::Check(format!(
                    "decomposition check failed (width {}): {report:?}",
                    width(&td)
                )));
            }
            Ok(())
        }
        Command::Graph {
            io: f,
            mode,
            method,
            format,
        } => {
            if !matches!(method, Method::Fast | Method::Oracle) {
                return Err(CliError::Usage(format!(
                    "graph supports --method fast|oracle, not {method:?}"
                )));
            }
            let p = read_polygon(&f.input, tol)?;
            let g = match method {
                Method::Fast => fast_graph(&p, mode.into(), tol)?,
                Method::Oracle => graph_bruteforce(&p, mode.into(), tol),
                _ => unreachable!("checked above"),
            };
            let text = match format {
                GraphFormat::Json => io::graph_to_json(&g),
                GraphFormat::Edges => to_edge_list(&g),
                GraphFormat::Dot => to_dot(&g),
            };
            write(f.out.as_deref(), text.trim_end())
        }
        Command::Mis { io: f, mode, method } => {
            if !matches!(method, Method::Dp | Method::Bruteforce) {
                return Err(CliError::Usage(format!(
                    "mis supports --method dp|bruteforce, not {method:?}"
                )));
            }
            let p = read_polygon(&f.input, tol)?;
            let g = graph_bruteforce(&p, mode.into(), tol);
            let m = match method {
                Method::Dp => mis_dp(&g, &build_tree_decomposition(&p, &compute_medial_axis(&p, tol), tol)?)?,
                Method::Bruteforce => mis_bruteforce(&g)?,
                _ => unreachable!("checked above"),
            };
            write(f.out.as_deref(), &io::mis_to_json(&m))
        }
        Command::Realize { io: f } => {
            let g = io::outerplanar_from_json(&read(&f.input)?)?;
            let p = realize(&g, tol)?;
            let good = check_good(&p, tol);
            if !good.is_good() {
                return Err(CliError::Check(format!("realized polygon is not good: {good:?}")));
            }
            write(f.out.as_deref(), &io::polygon_to_json(&p))
        }
        Command::ProbeC4 { trials, seed, out } => {
            let r = run_c4_probe(trials, seed, tol);
            let summary = json!({
                "trials": r.trials,
                "intersecting": r.intersecting,
                "midpoint_ok": r.midpoint_ok,
                "failures": r.failures,
            });
            write(out.as_deref(), &summary.to_string())?;
            if !r.passed() {
                return Err(CliError::Check(format!(
                    "{} of {} trials failed",
                    r.failures.len(),
                    r.trials
                )));
            }
            Ok(())
        }
        Command::Verify {
            trials,
            seed,
            outerplanar,
            out,
        } => {
            let cfg = CorpusConfig {
                random_count: trials,
                seed,
                outerplanar_max_n: outerplanar,
                ..CorpusConfig::default()
            };
            let report = verify_corpus(&corpus(&cfg), tol);
            if let Some(path) = out.as_deref() {
                write(Some(path), &io::to_json(&report))?;
            }
            let failures: Vec<_> = report
                .failures()
                .map(|(i, f)| json!({"id": i.id, "family": i.family, "n": i.n, "check": f.check, "mode": f.mode, "detail": f.detail}))
                .collect();
            let summary = json!({
                "instances": report.instances.len(),
                "failed_instances": report.instances.iter().filter(|r| !r.passed()).count(),
                "millis": report.millis,
                "failures": failures,
            });
            emit(&summary.to_string());
            if !report.passed() {
                return Err(CliError::Check(format!("{} check failures", failures.len())));
            }
            Ok(())
        }
        Command::Bench {
            sizes,
            seed,
            budget_ms,
            out,
        } => {
            if sizes.iter().any(|&n| n < 3) {
                return Err(CliError::Usage("bench sizes must be at least 3".into()));
            }
            let r = run_bench(&sizes, seed, Duration::from_millis(budget_ms), tol)?;
            let summary = json!({
                "report": r,
                "decomposition_vs_n": r.decomposition_fit(),
                "pipeline_vs_n_log_n": r.pipeline_fit(),
            });
            write(out.as_deref(), &summary.to_string())
        }
        Command::Render {
            io: f,
            disks,
            axis,
            mis,
            tree,
            mode,
        } => {
            let p = read_polygon(&f.input, tol)?;
            let medial = compute_medial_axis(&p, tol);
            let td = if mis || tree {
                Some(build_tree_decomposition(&p, &medial, tol)?)
            } else {
                None
            };
            let witness = match (&td, mis) {
                (Some(td), true) => Some(mis_dp(&graph_bruteforce(&p, mode.into(), tol), td)?.witness),
                _ => None,
            };
            let layers = Layers {
                disks,
                medial_axis: axis.then_some(&medial),
                mis_witness: witness.as_deref(),
                decomposition: if tree { td.as_ref() } else { None },
            };
            write(f.out.as_deref(), render_svg(&p, &layers).trim_end())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sidedisk: {e}");
            ExitCode::from(e.code())
        }
    }
}
