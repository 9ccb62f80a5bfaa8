//! The `knotfoam` command line.
//!
//! `run` takes parsed arguments and two writers and returns the exit code,
//! so the binary is a thin wrapper and tests can drive it in-process.
//!
//! Exit codes: 0 success, 1 a relation failed, 2 bad input, 3 diagram over
//! the size limit, 4 an internal invariant was violated.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use knotfoam_core::foam::{load_fixture, relation_fixtures, RelationFixture, Verdict};
use knotfoam_core::{
    braid_to_pd, build_complex_with_limit, build_lee_with_limit, graded_euler_characteristic, integral_homology,
    lee_rank, parse_pd, s_invariant_of, slice_genus_lower_bound, ClosedFoam, Error, Flavor, HomologyTable, KhovanovError,
    LaurentQ, LeeError, PDCode, TrivalentGraph,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_RELATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SIZE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "knotfoam", version, about = "Foam evaluation and Khovanov, Lee and s-invariant computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jones polynomial, Khovanov homology, Lee rank and s-invariant of a diagram.
    Invariants(InvariantsArgs),
    /// Evaluate a closed foam given as JSON.
    EvalFoam { path: PathBuf },
    /// Graded dimension of the state space of a trivalent graph given as JSON.
    GraphDim { path: PathBuf },
    /// Check the local relation fixtures by closing them off.
    VerifyRelations {
        /// Directory of fixture files; the built-in set when omitted.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        max_dots: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Skip {
    Lee,
    S,
}

#[derive(Debug, clap::Args)]
pub struct InvariantsArgs {
    /// PD code, e.g. "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]". Empty means the unknot.
    #[arg(long, conflicts_with = "braid", required_unless_present = "braid")]
    pub pd: Option<String>,
    /// Braid word as signed generator indices, e.g. "1 1 1".
    #[arg(long, requires = "strands", allow_hyphen_values = true)]
    pub braid: Option<String>,
    #[arg(long)]
    pub strands: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, env = "KNOTFOAM_CACHE")]
    pub cache: Option<PathBuf>,
    #[arg(long, default_value_t = knotfoam_core::DEFAULT_MAX_CROSSINGS)]
    pub max_crossings: usize,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub skip: Vec<Skip>,
    /// Print per-stage timings to stderr.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pd: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub braid: Option<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub strands: Option<usize>,
}

/// Everything computed from a diagram. This is what the cache stores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub pd: String,
    pub components: usize,
    pub n_plus: usize,
    pub n_minus: usize,
    pub jones: LaurentQ,
    pub khovanov: HomologyTable,
    pub lee_rank: Option<usize>,
    pub s: Option<i32>,
    pub slice_genus_lower_bound: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    pub stages: Vec<(String, Duration)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub input: InputEcho,
    #[serde(flatten)]
    pub invariants: Invariants,
    /// Never part of stdout or the cache, so output stays byte-identical.
    #[serde(skip)]
    pub timings: Option<Timings>,
    #[serde(skip)]
    pub cached: bool,
}

/// A failure with its exit code and the message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(msg: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_INPUT, message: msg.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Diagram(_) | Error::Poly(_) => EXIT_INPUT,
            Error::Khovanov(KhovanovError::TooLarge { .. }) | Error::Lee(LeeError::Khovanov(_)) => EXIT_SIZE,
            _ => EXIT_INVARIANT,
        };
        let message = match &e {
            Error::Lee(l) => format!("{}: {e}", lee_error_name(l)),
            Error::Homology(h) => format!("{h:?}: {e}"),
            _ => e.to_string(),
        };
        Failure { code, message }
    }
}

fn lee_error_name(e: &LeeError) -> &'static str {
    match e {
        LeeError::Khovanov(_) => "TooLarge",
        LeeError::Homology(_) => "Homology",
        LeeError::NotAKnot(_) => "NotAKnot",
        LeeError::RankMismatch { .. } => "RankMismatch",
        LeeError::NotACycle => "NotACycle",
        LeeError::PropositionViolated { .. } => "PropositionViolated",
        LeeError::CorollaryViolated { .. } => "CorollaryViolated",
    }
}

pub fn parse_braid(text: &str) -> Result<Vec<i32>, Failure> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i32>().map_err(|_| Failure::input(format!("invalid braid letter {t:?}"))))
        .collect()
}

fn diagram(args: &InvariantsArgs) -> Result<(InputEcho, PDCode), Failure> {
    match (&args.pd, &args.braid) {
        (Some(pd), None) => {
            let code = parse_pd(pd).map_err(|e| Failure::from(Error::from(e)))?;
            Ok((InputEcho { pd: Some(pd.clone()), braid: None, strands: None }, code))
        }
        (None, Some(b)) => {
            let word = parse_braid(b)?;
            let strands = args.strands.ok_or_else(|| Failure::input("--braid needs --strands"))?;
            let code = braid_to_pd(&word, strands).map_err(|e| Failure::from(Error::from(e)))?;
            Ok((InputEcho { pd: None, braid: Some(word), strands: Some(strands) }, code))
        }
        _ => Err(Failure::input("give exactly one of --pd and --braid")),
    }
}

/// Cache file name: a hash of the tool version, the canonical diagram and
/// the skipped stages.
pub fn cache_key(pd: &PDCode, skip: &[Skip]) -> String {
    let mut skip = skip.to_vec();
    skip.sort();
    skip.dedup();
    let mut h = Sha256::new();
    h.update(format!("knotfoam {VERSION}\n{}\nskip={skip:?}\n", pd.canonical_key()));
    hex::encode(h.finalize())
}

fn cache_path(dir: &Path, pd: &PDCode, skip: &[Skip]) -> PathBuf {
    dir.join(format!("{}.json", cache_key(pd, skip)))
}

/// Compute the invariants of a diagram.
pub fn compute(
    pd: &PDCode,
    max_crossings: usize,
    skip: &[Skip],
    timings: &mut Vec<(String, Duration)>,
) -> Result<Invariants, Error> {
    let mut stage = |name: &str, start: Instant| timings.push((name.to_string(), start.elapsed()));
    let t = Instant::now();
    let kh = build_complex_with_limit(pd, Flavor::Kh, max_crossings)?;
    stage("khovanov complex", t);
    let t = Instant::now();
    let table = integral_homology(&kh)?;
    stage("homology", t);
    let jones = graded_euler_characteristic(&kh);
    let components = pd.components();
    let (mut rank, mut s) = (None, None);
    if !skip.contains(&Skip::Lee) {
        let t = Instant::now();
        let fc = build_lee_with_limit(pd, max_crossings)?;
        if components == 1 && !skip.contains(&Skip::S) {
            let details = s_invariant_of(pd, &fc)?;
            rank = Some(details.lee_rank);
            s = Some(details.s);
            stage("lee homology and s-invariant", t);
        } else {
            rank = Some(lee_rank(&fc, components)?);
            stage("lee homology", t);
        }
    }
    Ok(Invariants {
        pd: pd.canonical().to_string(),
        components,
        n_plus: pd.n_plus(),
        n_minus: pd.n_minus(),
        jones,
        khovanov: table,
        lee_rank: rank,
        s,
        slice_genus_lower_bound: s.map(slice_genus_lower_bound),
    })
}

pub fn invariants(args: &InvariantsArgs) -> Result<OutputRecord, Failure> {
    let (input, pd) = diagram(args)?;
    let mut stages = Vec::new();
    let path = args.cache.as_ref().map(|d| cache_path(d, &pd, &args.skip));
    if let Some(hit) = path.as_ref().and_then(|p| std::fs::read(p).ok()) {
        if let Ok(invariants) = serde_json::from_slice::<Invariants>(&hit) {
            return Ok(OutputRecord { input, invariants, timings: None, cached: true });
        }
    }
    let invariants = compute(&pd, args.max_crossings, &args.skip, &mut stages)?;
    if let Some(p) = &path {
        // a failed cache write only costs a recomputation later
        let _ = std::fs::create_dir_all(p.parent().expect("cache file has a directory"))
            .and_then(|_| std::fs::write(p, serde_json::to_vec(&invariants).expect("serializes")));
    }
    Ok(OutputRecord { input, invariants, timings: Some(Timings { stages }), cached: false })
}

fn describe_input(e: &InputEcho) -> String {
    match (&e.pd, &e.braid) {
        (Some(pd), _) => format!("pd {pd:?}"),
        (_, Some(b)) => {
            let word: Vec<String> = b.iter().map(i32::to_string).collect();
            format!("braid {} on {} strands", word.join(" "), e.strands.unwrap_or(0))
        }
        _ => String::new(),
    }
}

fn show<T: std::fmt::Display>(x: Option<T>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn render_table(r: &OutputRecord) -> String {
    let v = &r.invariants;
    let mut out = String::new();
    let _ = writeln!(out, "input       {}", describe_input(&r.input));
    let _ = writeln!(out, "pd          {}", if v.pd.is_empty() { "(crossingless)" } else { &v.pd });
    let _ = writeln!(out, "components  {}", v.components);
    let _ = writeln!(out, "n+ n-       {} {}", v.n_plus, v.n_minus);
    let _ = writeln!(out, "jones       {}", v.jones);
    let _ = writeln!(out, "lee rank    {}", show(v.lee_rank));
    let _ = writeln!(out, "s           {}", show(v.s));
    let _ = writeln!(out, "slice genus >= {}", show(v.slice_genus_lower_bound));
    let _ = writeln!(out, "{:>5} {:>5} {:>6}  torsion", "i", "q", "betti");
    for (&(i, q), e) in &v.khovanov.entries {
        let torsion: Vec<String> = e.torsion.iter().map(|t| format!("Z/{t}")).collect();
        let line = format!("{i:>5} {q:>5} {:>6}  {}", e.betti, torsion.join(" "));
        let _ = writeln!(out, "{}", line.trim_end());
    }
    out
}

pub fn render_json(r: &OutputRecord) -> String {
    serde_json::to_string_pretty(r).expect("serializes") + "\n"
}

fn eval_foam(path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let foam = ClosedFoam::from_json(&text).map_err(Failure::input)?;
    let value = knotfoam_core::evaluate_foam(&foam).map_err(|e| Failure::from(Error::from(e)))?;
    Ok(format!("{value}\nsymmetric: {}\n", value.is_symmetric()))
}

fn graph_dim(path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let g = TrivalentGraph::from_json(&text).map_err(Failure::input)?;
    let dim = g.graded_dimension().map_err(|e| Failure::from(Error::from(e)))?;
    let loops = g.blue_loop_count();
    let expected = LaurentQ::circle().pow(loops as u32);
    Ok(format!(
        "graded dimension: {dim}\nblue loops: {loops}\nmatches (q + q^-1)^{loops}: {}\n",
        dim == expected
    ))
}

fn verify_relations(dir: Option<&Path>, max_dots: u32, out: &mut String) -> Result<bool, Failure> {
    let fixtures: Vec<RelationFixture> = match dir {
        None => relation_fixtures(),
        Some(d) => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(d)
                .map_err(|e| Failure::input(format!("{}: {e}", d.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            paths
                .iter()
                .map(|p| load_fixture(p).map_err(|e| Failure::input(format!("{}: {e}", p.display()))))
                .collect::<Result<_, _>>()?
        }
    };
    let mut ok = true;
    for fx in &fixtures {
        match fx.verify(max_dots).map_err(|e| Failure::from(Error::from(e)))? {
            Verdict::Pass { closures } => {
                let _ = writeln!(out, "PASS {} ({closures} closures)", fx.name);
            }
            Verdict::Fail(w) => {
                ok = false;
                let caps: Vec<String> = w.caps.iter().map(|(k, d)| format!("{k}={d}")).collect();
                let _ = writeln!(
                    out,
                    "FAIL {}: caps [{}] give lhs {} and rhs {}",
                    fx.name,
                    caps.join(", "),
                    w.lhs,
                    w.rhs
                );
            }
        }
    }
    let _ = writeln!(out, "{} fixtures, {}", fixtures.len(), if ok { "all pass" } else { "failures" });
    Ok(ok)
}

fn invariants_command(args: &InvariantsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let record = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(Failure::input)?
            .install(|| invariants(args))?,
        None => invariants(args)?,
    };
    let text = match args.format {
        Format::Table => render_table(&record),
        Format::Json => render_json(&record),
    };
    out.write_all(text.as_bytes()).map_err(Failure::input)?;
    if args.timings {
        if record.cached {
            let _ = writeln!(err, "served from cache");
        }
        for (name, d) in record.timings.iter().flat_map(|t| &t.stages) {
            let _ = writeln!(err, "{name}: {:.3} s", d.as_secs_f64());
        }
    }
    Ok(0)
}

/// Run a parsed command line and return the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Invariants(args) => invariants_command(args, out, err),
        Command::EvalFoam { path } => eval_foam(path).map(|s| {
            let _ = out.write_all(s.as_bytes());
            0
        }),
        Command::GraphDim { path } => graph_dim(path).map(|s| {
            let _ = out.write_all(s.as_bytes());
            0
        }),
        Command::VerifyRelations { fixtures, max_dots } => {
            let mut report = String::new();
            let r = verify_relations(fixtures.as_deref(), *max_dots, &mut report);
            let _ = out.write_all(report.as_bytes());
            r.map(|ok| if ok { 0 } else { EXIT_RELATION })
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Entry point shared by the binary: parse `std::env::args` and run.
pub fn main_with_args(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { 0 };
        }
    };
    run(&cli, &mut io::stdout().lock(), &mut io::stderr().lock())
}
