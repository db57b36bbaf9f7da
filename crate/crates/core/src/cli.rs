//! The `etf` command line.
//!
//! Exit codes: `0` success, `1` negative result (not a signature, conditions
//! violated, infeasible parameters), `2` usage or parse error, `3` an
//! internal size limit was hit.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::constructions::{frame_9_6, power_9, tensor_compose, ConstructionError, DEFAULT_SIZE_CAP};
use crate::digraph::Digraph;
use crate::feasibility::{feasibility_table, sieve, CandidateOutcome, SieveReport};
use crate::frames::{frame_of, validate_frame, FrameError, FrameFile};
use crate::search::{canonical_form, search_signatures, CanonicalForm, SearchConfig, SearchError};
use crate::seidel::{check_conditions, check_signature, derive_params, FrameParams, SeidelMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "etf", version, about = "Equiangular tight frames from cube-root Seidel matrices")]
struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, env = "ETF_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check Q² = (n−1)I + μQ exactly.
    Verify {
        file: PathBuf,
        /// Also check the pairwise conditions on the standard form.
        #[arg(long)]
        conditions: bool,
    },
    /// Derive (k, e, λ₁, λ₂) from (n, μ).
    Params {
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        mu: i64,
    },
    /// Switch to the form with first row and column all ones.
    StandardForm { file: PathBuf },
    /// Admissible parameter sets up to an order.
    Feasible {
        #[arg(long, default_value_t = 100)]
        max_n: i64,
        /// Show every sieve candidate for one order instead.
        #[arg(long)]
        explain: Option<i64>,
    },
    /// Matrix to digraph (.dg).
    ToGraph {
        file: PathBuf,
        /// Isolate this vertex (1-based) by switching and delete it.
        #[arg(long)]
        isolate: Option<usize>,
    },
    /// Digraph to matrix.
    FromGraph {
        file: PathBuf,
        /// Prepend an isolated vertex (a border of ones).
        #[arg(long)]
        border: bool,
    },
    /// Check regularity and the pairwise digraph equations.
    CheckGraph { file: PathBuf },
    /// Build known signature matrices.
    Construct {
        #[command(subcommand)]
        which: Construct,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Backtracking search for standard-form signature matrices.
    Search(SearchArgs),
    /// Synthesize and validate the frame vectors.
    Frame {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// The 9×9 matrix.
    Nine,
    /// m-fold Kronecker power of the 9×9 matrix.
    Power9 {
        #[arg(long)]
        m: u32,
        #[arg(long, env = "ETF_SIZE_CAP", default_value_t = DEFAULT_SIZE_CAP)]
        size_cap: usize,
    },
    /// (A+I)⊗(B+I)−I.
    Tensor { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    mu: i64,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    no_pairwise_prune: bool,
    #[arg(long)]
    emit_dir: Option<PathBuf>,
    /// Group solutions into switching classes.
    #[arg(long)]
    classify: bool,
}

/// Captured result of [`run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Negative(String),
    Usage(String),
    Limit(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Self::Negative(_) => EXIT_NEGATIVE,
            Self::Usage(_) => EXIT_USAGE,
            Self::Limit(_) => EXIT_LIMIT,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Negative(m) | Self::Usage(m) | Self::Limit(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub n: usize,
    pub signature: bool,
    pub mu: Option<i64>,
    pub k: Option<i64>,
    pub violation: Option<String>,
    pub conditions_mu: Option<i64>,
    pub conditions_violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardFormJson {
    pub matrix: String,
    /// Diagonal switch as exponents of ω.
    pub diagonal: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckGraphJson {
    pub m: usize,
    pub arcs: usize,
    pub e: Option<usize>,
    pub mu: Option<i64>,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionLine {
    pub solution: usize,
    pub path: Option<String>,
    pub rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchManifest {
    pub n: usize,
    pub mu: i64,
    pub prune_pairwise: bool,
    pub limit: Option<usize>,
    pub nodes: u64,
    pub solutions: usize,
    pub complete: bool,
    pub wall_time_s: f64,
    pub files: Vec<String>,
    pub switching_classes: Option<usize>,
}

/// Runs the CLI on `argv` (including the program name) and captures output.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let exit_code = run_with(argv, &mut out, &mut err);
    CommandOutcome {
        exit_code,
        stdout: String::from_utf8_lossy(&out).into_owned(),
        stderr: String::from_utf8_lossy(&err).into_owned(),
    }
}

/// Runs the CLI, streaming to `out` and `err`; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // the global pool can be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message());
            f.code()
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<SeidelMatrix, Failure> {
    SeidelMatrix::parse_crsm(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Digraph, Failure> {
    Digraph::parse_dg(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn json_line(out: &mut dyn Write, v: &impl Serialize) -> Outcome {
    writeln!(out, "{}", serde_json::to_string(v).expect("serializable"))?;
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Verify { file, conditions } => verify(&read_matrix(file)?, *conditions, format, out),
        Command::Params { n, mu } => params(*n, *mu, format, out),
        Command::StandardForm { file } => {
            let (q, d) = read_matrix(file)?.standard_form();
            match format {
                Format::Json => json_line(
                    out,
                    &StandardFormJson { matrix: q.to_crsm(), diagonal: d.0.iter().map(|r| r.exponent()).collect() },
                ),
                _ => Ok(write!(out, "{}", q.to_crsm())?),
            }
        }
        Command::Feasible { max_n, explain } => match explain {
            Some(n) => explain_order(&sieve(*n), format, out),
            None => feasible(&feasibility_table(*max_n), format, out),
        },
        Command::ToGraph { file, isolate } => {
            let mut g = Digraph::from_seidel(&read_matrix(file)?);
            if let Some(v) = isolate {
                if *v == 0 || *v > g.vertex_count() {
                    return Err(Failure::Usage(format!("vertex {v} is outside 1..={}", g.vertex_count())));
                }
                g = g.isolate_vertex(v - 1);
            }
            Ok(write!(out, "{}", g.to_dg())?)
        }
        Command::FromGraph { file, border } => {
            let g = read_graph(file)?;
            let q = if *border {
                g.bordered_seidel()
            } else {
                g.to_seidel().map_err(|e| Failure::Usage(e.to_string()))?
            };
            Ok(write!(out, "{}", q.to_crsm())?)
        }
        Command::CheckGraph { file } => check_graph(&read_graph(file)?, format, out),
        Command::Construct { which, out: path } => {
            let q = construct(which)?;
            match path {
                Some(p) => Ok(fs::write(p, q.to_crsm())?),
                None => Ok(write!(out, "{}", q.to_crsm())?),
            }
        }
        Command::Search(args) => search(args, out),
        Command::Frame { file, out: path } => frame(&read_matrix(file)?, path.as_deref(), format, out),
    }
}

fn verify(q: &SeidelMatrix, conditions: bool, format: Format, out: &mut dyn Write) -> Outcome {
    let n = q.order();
    let sig = check_signature(q);
    let k = sig.as_ref().ok().and_then(|&mu| derive_params(n as i64, mu).ok()).map(|p| p.k);
    let cond = conditions.then(|| check_conditions(&q.standard_form().0));
    let report = VerifyJson {
        n,
        signature: sig.is_ok(),
        mu: sig.as_ref().ok().copied(),
        k,
        violation: sig.as_ref().err().map(|v| v.to_string()),
        conditions_mu: cond.as_ref().and_then(|c| c.as_ref().ok().copied()),
        conditions_violation: cond.as_ref().and_then(|c| c.as_ref().err().map(|v| v.to_string())),
    };
    match format {
        Format::Json => json_line(out, &report)?,
        Format::Tsv => {
            writeln!(out, "n\tsignature\tmu\tk")?;
            let opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
            writeln!(out, "{n}\t{}\t{}\t{}", report.signature, opt(report.mu), opt(report.k))?;
        }
        Format::Human => {
            match (&sig, k) {
                (Ok(mu), Some(k)) => writeln!(out, "signature: mu={mu} n={n} k={k}")?,
                (Ok(mu), None) => writeln!(out, "signature: mu={mu} n={n} k=undefined")?,
                (Err(v), _) => writeln!(out, "not a signature matrix: {v}")?,
            }
            match &cond {
                Some(Ok(mu)) => writeln!(out, "conditions: mu={mu}")?,
                Some(Err(v)) => writeln!(out, "conditions violated: {v}")?,
                None => {}
            }
        }
    }
    if report.signature && report.conditions_violation.is_none() {
        Ok(())
    } else {
        Err(Failure::Negative(report.violation.or(report.conditions_violation).unwrap_or_default()))
    }
}

fn params(n: i64, mu: i64, format: Format, out: &mut dyn Write) -> Outcome {
    let p = derive_params(n, mu).map_err(|e| Failure::Negative(e.to_string()))?;
    match format {
        Format::Json => json_line(out, &p),
        _ => feasible(&[p], format, out),
    }
}

fn feasible(rows: &[FrameParams], format: Format, out: &mut dyn Write) -> Outcome {
    let e = |p: &FrameParams| p.e.map_or("-".to_string(), |e| e.to_string());
    match format {
        Format::Json => json_line(out, &rows),
        Format::Tsv => {
            writeln!(out, "n\tk\tmu\te\tlambda1\tlambda2")?;
            for p in rows {
                writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", p.n, p.k, p.mu, e(p), p.lambda1, p.lambda2)?;
            }
            Ok(())
        }
        Format::Human => {
            writeln!(out, "{:>5} {:>5} {:>5} {:>5} {:>8} {:>8}", "n", "k", "mu", "e", "lambda1", "lambda2")?;
            for p in rows {
                writeln!(out, "{:>5} {:>5} {:>5} {:>5} {:>8} {:>8}", p.n, p.k, p.mu, e(p), p.lambda1, p.lambda2)?;
            }
            Ok(())
        }
    }
}

fn explain_order(report: &SieveReport, format: Format, out: &mut dyn Write) -> Outcome {
    if format == Format::Json {
        return json_line(out, report);
    }
    if let Some(r) = report.rejection {
        writeln!(out, "n={}: rejected ({r:?})", report.n)?;
    }
    for c in &report.candidates {
        let k = c.k.map_or("-".to_string(), |(a, b)| if b == 1 { a.to_string() } else { format!("{a}/{b}") });
        let verdict = match c.outcome {
            CandidateOutcome::Admissible(_) => "admissible".to_string(),
            CandidateOutcome::Rejected(r) => format!("{r:?}"),
        };
        writeln!(out, "n={} e={} mu={} disc={} k={k}: {verdict}", report.n, c.e, c.mu, c.discriminant)?;
    }
    Ok(())
}

fn check_graph(g: &Digraph, format: Format, out: &mut dyn Write) -> Outcome {
    let m = g.vertex_count();
    let res = g.check_conditions();
    let report = CheckGraphJson {
        m,
        arcs: g.arc_count(),
        e: res.as_ref().ok().copied(),
        mu: res.as_ref().ok().map(|&e| m as i64 - 3 * e as i64 - 1),
        violation: res.as_ref().err().map(|v| v.to_string()),
    };
    match (format, &report.e) {
        (Format::Json, _) => json_line(out, &report)?,
        (_, Some(e)) => writeln!(out, "digraph: e={e} m={m} mu={}", report.mu.expect("set with e"))?,
        (_, None) => writeln!(out, "conditions violated: {}", report.violation.as_deref().unwrap_or(""))?,
    }
    match report.violation {
        None => Ok(()),
        Some(v) => Err(Failure::Negative(v)),
    }
}

fn construction_failure(e: ConstructionError) -> Failure {
    match e {
        ConstructionError::SizeLimit { .. } => Failure::Limit(e.to_string()),
        ConstructionError::ZeroPower => Failure::Usage(e.to_string()),
        ConstructionError::PreconditionMuNotMinus2 { .. } => Failure::Negative(e.to_string()),
    }
}

fn construct(which: &Construct) -> Result<SeidelMatrix, Failure> {
    match which {
        Construct::Nine => Ok(frame_9_6()),
        Construct::Power9 { m, size_cap } => power_9(*m, *size_cap).map_err(construction_failure),
        Construct::Tensor { a, b } => tensor_compose(&read_matrix(a)?, &read_matrix(b)?).map_err(construction_failure),
    }
}

fn search(args: &SearchArgs, out: &mut dyn Write) -> Outcome {
    let cfg = SearchConfig {
        limit: args.limit,
        prune_pairwise: !args.no_pairwise_prune,
        ..SearchConfig::new(args.n, args.mu)
    };
    if let Some(dir) = &args.emit_dir {
        fs::create_dir_all(dir)?;
    }
    let start = Instant::now();
    let mut files = Vec::new();
    let mut classes: Vec<CanonicalForm> = Vec::new();
    let mut failure: Option<Failure> = None;
    let result = search_signatures(&cfg, |q| {
        let index = files.len() + 1;
        let mut path = None;
        if let Some(dir) = &args.emit_dir {
            let name = format!("solution-{index:04}.crsm");
            if let Err(e) = fs::write(dir.join(&name), q.to_crsm()) {
                failure = Some(e.into());
                return ControlFlow::Break(());
            }
            path = Some(name);
        }
        if args.classify {
            match canonical_form(&q) {
                Ok(c) => {
                    if let Err(pos) = classes.binary_search(&c) {
                        classes.insert(pos, c);
                    }
                }
                Err(e) => {
                    failure = Some(Failure::Limit(e.to_string()));
                    return ControlFlow::Break(());
                }
            }
        }
        let rows = q.token_rows().map(|r| r.iter().map(char::to_string).collect::<Vec<_>>().join(" ")).collect();
        let line = SolutionLine { solution: index, path: path.clone(), rows };
        if writeln!(out, "{}", serde_json::to_string(&line).expect("serializable")).is_err() {
            return ControlFlow::Break(());
        }
        files.push(path.unwrap_or_default());
        ControlFlow::Continue(())
    });
    if let Some(f) = failure {
        return Err(f);
    }
    let stats = result.map_err(|e| match e {
        SearchError::InfeasibleParams { .. } => Failure::Negative(e.to_string()),
        SearchError::BadPrefix { .. } => Failure::Usage(e.to_string()),
    })?;
    let manifest = SearchManifest {
        n: args.n,
        mu: args.mu,
        prune_pairwise: cfg.prune_pairwise,
        limit: args.limit,
        nodes: stats.nodes,
        solutions: stats.solutions,
        complete: stats.complete,
        wall_time_s: start.elapsed().as_secs_f64(),
        files: if args.emit_dir.is_some() { files } else { Vec::new() },
        switching_classes: args.classify.then_some(classes.len()),
    };
    if let Some(dir) = &args.emit_dir {
        fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest).expect("serializable"))?;
    }
    json_line(out, &serde_json::json!({ "manifest": manifest }))
}

fn frame(q: &SeidelMatrix, path: Option<&Path>, format: Format, out: &mut dyn Write) -> Outcome {
    let fs_ = frame_of(q).map_err(|e| match e {
        FrameError::NotSignature(_) | FrameError::Params(_) | FrameError::Domain { .. } => Failure::Negative(e.to_string()),
        other => Failure::Limit(other.to_string()),
    })?;
    let report = validate_frame(&fs_);
    let file = FrameFile::new(&fs_, report);
    let json = file.to_json();
    if let Some(p) = path {
        fs::write(p, &json)?;
    }
    match format {
        Format::Json if path.is_none() => writeln!(out, "{json}")?,
        _ => writeln!(
            out,
            "frame: n={} k={} c={:.16e} max_deviation={:.3e} tolerance={:.0e} {}",
            file.n,
            file.k,
            file.c.0,
            report.max_deviation(),
            report.tolerance.0,
            if report.passed { "passed" } else { "FAILED" }
        )?,
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Negative("frame validation failed".into()))
    }
}
