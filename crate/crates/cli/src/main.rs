//! `fanforge`: load, validate and resolve conical complexes.
//!
//! Exit codes: 0 success, 1 violations or an invalid map, 2 unreadable or
//! malformed input, 3 an Ω order that is not total, 4 the iteration guard
//! fired, 5 a functoriality mismatch. Data goes to stdout, diagnostics to
//! stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use fanforge::complex::{check_map, MapKind};
use fanforge::io::{self, ComplexDocument, OmegaBlock};
use fanforge::relative::{resolve_relative, RelativeComplex};
use fanforge::resolve::{check_functoriality, replay_steps, resolve, Resolution};
use fanforge::valuation::{exceptional_coefficients, pl_function};
use fanforge::{CellId, ConicalComplex, IntVector, ResolveError, ResolveOptions};

#[derive(Parser)]
#[command(name = "fanforge", version, about = "Canonical resolution of conical complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex document; prints one violation per line.
    Validate { path: PathBuf },
    /// Resolve a complex and print the resolved document.
    Resolve {
        path: PathBuf,
        /// Resolve relative to the document's omega block.
        #[arg(long)]
        relative: bool,
        /// Write the subdivision trace as JSON lines.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Write each step's PL functions and exceptional coefficients here.
        #[arg(long, value_name = "DIR")]
        emit_divisors: Option<PathBuf>,
        /// Write the resolved document here instead of stdout.
        #[arg(long, short, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Classify a map and check that resolution commutes with it.
    CheckMap { path: PathBuf },
    /// Report the special vectors of one cone.
    Hilbert { path: PathBuf, cone_id: usize },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<ResolveError> for Failure {
    fn from(e: ResolveError) -> Failure {
        let code = match e {
            ResolveError::OrderNotTotal(_) => 3,
            ResolveError::GuardExceeded { .. } => 4,
            _ => 1,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path } => validate(&path),
        Command::Resolve { path, relative, trace, emit_divisors, output } => {
            resolve_cmd(&path, relative, trace.as_deref(), emit_divisors.as_deref(), output.as_deref())
        }
        Command::CheckMap { path } => check_map_cmd(&path),
        Command::Hilbert { path, cone_id } => hilbert(&path, CellId(cone_id)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fanforge: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<ComplexDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?;
    io::parse_document(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn options() -> Result<ResolveOptions, Failure> {
    ResolveOptions::from_env().map_err(|e| Failure::new(2, e))
}

fn validate(path: &Path) -> Result<(), Failure> {
    let doc = load(path)?;
    let mut lines = Vec::new();
    let mut report = |label: &str, k: &ConicalComplex| {
        for v in k.validate() {
            lines.push(format!("{label}{v}"));
        }
    };
    if let Some(k) = &doc.complex {
        report("", k);
    }
    if let Some(m) = &doc.map {
        report("source: ", &m.source);
        report("target: ", &m.target);
    }
    if lines.is_empty() {
        if let (Some(k), Some(o)) = (&doc.complex, &doc.omega) {
            if let Err(e) = RelativeComplex::new(k.clone(), o.cells.clone(), &o.order) {
                lines.push(format!("omega: {e}"));
            }
        }
        if let Some(m) = &doc.map {
            if let Err(v) = check_map(&m.map, &m.source, &m.target) {
                lines.push(format!("map: {v}"));
            }
        }
    }
    if lines.is_empty() {
        println!("ok");
        return Ok(());
    }
    for l in &lines {
        println!("{l}");
    }
    Err(Failure::new(1, format!("{} violation(s)", lines.len())))
}

fn resolve_cmd(
    path: &Path,
    relative: bool,
    trace: Option<&Path>,
    divisors: Option<&Path>,
    output: Option<&Path>,
) -> Result<(), Failure> {
    let doc = load(path)?;
    let k = doc.complex.ok_or_else(|| Failure::new(2, "document has no complex"))?;
    let opts = options()?;
    let (resolution, omega) = if relative {
        let o = doc.omega.ok_or_else(|| Failure::new(2, "--relative needs an omega block"))?;
        let rk = RelativeComplex::new(k.clone(), o.cells, &o.order)?;
        let r = resolve_relative(&rk, opts)?;
        let omega = OmegaBlock { cells: r.relative.omega().clone(), order: r.relative.order().clone() };
        (r.resolution, Some(omega))
    } else {
        (resolve(&k, opts)?, None)
    };
    if let Some(t) = trace {
        write(t, &resolution.trace.to_json_lines())?;
    }
    if let Some(dir) = divisors {
        emit_divisors(&k, &resolution, dir)?;
    }
    let out = ComplexDocument {
        complex: Some(resolution.complex),
        marking: Some(resolution.marking),
        omega,
        map: None,
    };
    let text = io::document_to_json(&out);
    match output {
        Some(p) => write(p, &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// One `step_N.json` per trace step: for each center, its PL function at the
/// least integral scale and the exceptional coefficients of that function.
fn emit_divisors(k: &ConicalComplex, r: &Resolution, dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::new(1, format!("{}: {e}", dir.display())))?;
    let mut files: Vec<(usize, Result<Value, String>)> = Vec::new();
    replay_steps(k, &r.trace, |before, _, centers| {
        let entries: Result<Vec<Value>, String> = centers
            .iter()
            .map(|c| {
                let unit = pl_function(c, 1, before).map_err(|e| e.to_string())?;
                let a = u64::try_from(&unit.min_integral_a).map_err(|e| e.to_string())?;
                let b = pl_function(c, a, before).map_err(|e| e.to_string())?;
                let coeffs: serde_json::Map<String, Value> = exceptional_coefficients(&b.function)
                    .into_iter()
                    .map(|(ray, x)| (ray.0.to_string(), Value::String(x.to_string())))
                    .collect();
                Ok(json!({
                    "carrier": c.carrier.0,
                    "vector": io::int_vector_json(&before.cone(c.carrier).to_ambient(&c.vector)),
                    "a": a,
                    "new_ray": b.new_ray.0,
                    "pl_function": io::pl_function_json(&b.function),
                    "exceptional": coeffs,
                }))
            })
            .collect();
        files.push((files.len(), entries.map(Value::Array)));
    })?;
    for (i, entries) in files {
        let value = entries.map_err(|e| Failure::new(1, format!("step {i}: {e}")))?;
        let text = serde_json::to_string_pretty(&json!({ "step": i, "centers": value })).expect("json");
        write(&dir.join(format!("step_{i}.json")), &text)?;
    }
    Ok(())
}

fn check_map_cmd(path: &Path) -> Result<(), Failure> {
    let doc = load(path)?;
    let m = doc.map.ok_or_else(|| Failure::new(2, "document has no map block"))?;
    let kind = check_map(&m.map, &m.source, &m.target).map_err(|v| Failure::new(1, format!("invalid map: {v}")))?;
    if kind == MapKind::General {
        println!("{kind}: no correspondence to check");
        return Ok(());
    }
    let (kind, same) = check_functoriality(&m.map, &m.source, &m.target, options()?)?;
    if !same {
        return Err(Failure::new(5, format!("{kind}: pushed trace differs from the target trace")));
    }
    println!("{kind}: traces correspond");
    Ok(())
}

fn hilbert(path: &Path, id: CellId) -> Result<(), Failure> {
    let doc = load(path)?;
    let k = doc.complex.ok_or_else(|| Failure::new(2, "document has no complex"))?;
    let cone = &k.cell(id).map_err(|e| Failure::new(1, e.to_string()))?.cone;
    let amb = |vs: Vec<IntVector>| Value::Array(vs.iter().map(|v| io::int_vector_json(&cone.to_ambient(v))).collect());
    let fail = |e: fanforge::ConeError| Failure::new(1, format!("cone {id}: {e}"));
    let report = json!({
        "cone": id.0,
        "vertices": amb(cone.vertices().to_vec()),
        "det": cone.det().map_err(fail)?.to_string(),
        "small": amb(cone.small_vectors().map_err(fail)?),
        "minimal": amb(cone.minimal_vectors().map_err(fail)?),
        "minimal_internal": amb(cone.minimal_internal_vectors()),
        "barycenter": if cone.is_regular() { Value::Null } else { amb(vec![cone.canonical_barycenter().map_err(fail)?]) },
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    Ok(())
}
