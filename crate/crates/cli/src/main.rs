mod cache;
mod text;
mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use groth_core::bpd::{bpds_of, MarkedBpd};
use groth_core::bubbling::{bd_of, d_top, enumerate_sbd};
use groth_core::{BubblingDiagram, MultiPoly, Permutation};
use serde_json::{json, Value};

use crate::cache::PolyCache;

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(s: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(s.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

macro_rules! out {
    ($($t:tt)*) => { emit(&format!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => {{ emit(&format!($($t)*)); emit("\n"); }};
}

/// Largest `n` for diagram enumeration commands.
const ENUMERATION_BOUND: usize = 8;

#[derive(Parser)]
#[command(name = "groth", version, about = "Grothendieck polynomials, bubbling diagrams and Schubitope checks")]
struct Cli {
    /// Directory for cached Grothendieck polynomials. GROTH_CACHE_DIR, when
    /// set, takes precedence.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Format {
    /// Emit JSON.
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit aligned text (default).
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Grothendieck polynomial of a permutation.
    Groth {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Top-degree component.
    Top {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Homogeneous component of degree `d`.
    Component {
        w: String,
        d: u32,
        #[command(flatten)]
        format: Format,
    },
    /// Homogenized polynomial with an extra variable `z`.
    Homogenize {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Bubbling diagrams of `w`.
    Bd {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Bubbling diagrams whose dead squares lie in the top diagram's.
    Sbd {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Top bubbling diagram of a vexillary permutation.
    Dtop {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Bumpless pipe dreams of `w`.
    Bpd {
        w: String,
        #[command(flatten)]
        format: Format,
    },
    /// Render a bubbling diagram or pipe dream JSON file as SVG.
    Render {
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        /// theorem1, theorem2, theorem3, theorem4, sbd, removedead, matrices,
        /// onecolumn, counterexamples, conjecture1 or all.
        suite: String,
        #[arg(long)]
        nmax: Option<usize>,
        /// Worker threads; defaults to the available cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Remove every cached polynomial.
    Clear,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] groth_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("verification failed")]
    VerificationFailed,
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Core(groth_core::Error::BoundExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_perm(s: &str) -> CliResult<Permutation> {
    Ok(s.parse()?)
}

fn check_bound(w: &Permutation) -> CliResult<()> {
    if w.n() > ENUMERATION_BOUND {
        return Err(groth_core::Error::BoundExceeded {
            requested: w.n(),
            bound: ENUMERATION_BOUND,
        }
        .into());
    }
    Ok(())
}

fn emit_poly(p: &MultiPoly, format: &Format, homogenizing: bool) -> CliResult<()> {
    if format.json {
        outln!("{}", serde_json::to_string(p)?);
    } else {
        out!("{}", text::poly(p, homogenizing));
    }
    Ok(())
}

fn weight_counts(ds: &[BubblingDiagram]) -> BTreeMap<Vec<u32>, usize> {
    let mut counts = BTreeMap::new();
    for d in ds {
        *counts.entry(d.weight()).or_insert(0) += 1;
    }
    counts
}

fn emit_diagrams(w: &Permutation, ds: &[BubblingDiagram], format: &Format) -> CliResult<()> {
    let counts = weight_counts(ds);
    if format.json {
        let weights: Vec<Value> = counts.iter().map(|(k, v)| json!({ "weight": k, "multiplicity": v })).collect();
        let v = json!({
            "permutation": w.to_string(),
            "count": ds.len(),
            "weights": weights,
            "diagrams": ds,
        });
        outln!("{v}");
    } else {
        outln!("{} diagrams", ds.len());
        outln!("weights:");
        out!("{}", text::weights(&counts));
        for d in ds {
            outln!("");
            out!("{}", text::bubbling(d));
        }
    }
    Ok(())
}

fn render(input: &PathBuf, out: &PathBuf) -> CliResult<()> {
    let v: Value = serde_json::from_str(&fs::read_to_string(input)?)?;
    let svg = if v.get("squares").is_some() {
        serde_json::from_value::<BubblingDiagram>(v)?.to_svg()
    } else if v.get("tiles").is_some() {
        let mut v = v;
        if v.get("marks").is_none() {
            v["marks"] = json!([]);
        }
        serde_json::from_value::<MarkedBpd>(v)?.to_svg()
    } else {
        return Err(CliError::Usage(
            "input is neither a bubbling diagram (\"squares\") nor a pipe dream (\"tiles\")".into(),
        ));
    };
    fs::write(out, svg)?;
    Ok(())
}

fn run_verify(suite: &str, nmax: Option<usize>, jobs: Option<usize>, cache: &PolyCache) -> CliResult<()> {
    let names: Vec<&str> = if suite == "all" {
        verify::SUITES.iter().map(|s| s.0).collect()
    } else if verify::suite_bounds(suite).is_some() {
        vec![suite]
    } else {
        return Err(CliError::Usage(format!("unknown suite {suite:?}")));
    };
    let mut plan = Vec::new();
    for name in names {
        let (default, max) = verify::suite_bounds(name).expect("known suite");
        let n = match nmax {
            Some(n) if n > max && suite != "all" => {
                return Err(groth_core::Error::BoundExceeded { requested: n, bound: max }.into());
            }
            Some(n) => n.min(max),
            None => default,
        };
        plan.push((name, n));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be positive".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let mut failed = 0;
    let mut total = 0;
    for (name, n) in plan {
        let reports = pool.install(|| verify::run(name, n, cache));
        for r in reports {
            total += 1;
            if !r.pass {
                failed += 1;
            }
            outln!("{}", r.to_json());
        }
    }
    eprintln!("{} of {total} checks passed", total - failed);
    if failed > 0 {
        return Err(CliError::VerificationFailed);
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let env_dir = std::env::var_os("GROTH_CACHE_DIR").filter(|v| !v.is_empty()).map(PathBuf::from);
    let cache = PolyCache::new(env_dir.or(cli.cache_dir.clone()));
    match cli.command {
        Command::Groth { w, format } => {
            let w = parse_perm(&w)?;
            emit_poly(&cache.grothendieck(&w), &format, false)
        }
        Command::Top { w, format } => {
            let w = parse_perm(&w)?;
            emit_poly(&cache.grothendieck(&w).top_component()?, &format, false)
        }
        Command::Component { w, d, format } => {
            let w = parse_perm(&w)?;
            emit_poly(&cache.grothendieck(&w).homogeneous_component(d), &format, false)
        }
        Command::Homogenize { w, format } => {
            let w = parse_perm(&w)?;
            emit_poly(&cache.grothendieck(&w).homogenize()?, &format, true)
        }
        Command::Bd { w, format } => {
            let w = parse_perm(&w)?;
            check_bound(&w)?;
            let ds: Vec<BubblingDiagram> = bd_of(&w).into_iter().collect();
            emit_diagrams(&w, &ds, &format)
        }
        Command::Sbd { w, format } => {
            let w = parse_perm(&w)?;
            check_bound(&w)?;
            let ds: Vec<BubblingDiagram> = enumerate_sbd(&w)?.into_iter().collect();
            emit_diagrams(&w, &ds, &format)
        }
        Command::Dtop { w, format } => {
            let w = parse_perm(&w)?;
            let d = d_top(&w)?;
            if format.json {
                outln!("{}", serde_json::to_string(&d)?);
            } else {
                out!("{}", text::bubbling(&d));
            }
            Ok(())
        }
        Command::Bpd { w, format } => {
            let w = parse_perm(&w)?;
            let ps = bpds_of(&w)?;
            if format.json {
                outln!("{}", json!({ "permutation": w.to_string(), "count": ps.len(), "bpds": ps }));
            } else {
                outln!("{} pipe dreams", ps.len());
                for p in &ps {
                    outln!("");
                    out!("{}", p.render_text());
                }
            }
            Ok(())
        }
        Command::Render { input, svg } => render(&input, &svg),
        Command::Verify { suite, nmax, jobs } => run_verify(&suite, nmax, jobs, &cache),
        Command::Cache { action: CacheAction::Clear } => {
            let Some(dir) = cache.dir() else {
                return Err(CliError::Usage("no cache directory given (--cache-dir or GROTH_CACHE_DIR)".into()));
            };
            let n = cache.clear()?;
            outln!("removed {n} entries from {}", dir.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::VerificationFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
