use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torusloc::cases::{self, CaseReport};
use torusloc::contactrr::{self, DEGREE, P1, P2};
use torusloc::localize::{certify_laurent, euler_characteristic, solve_multiplicities, FixedPointData};
use torusloc::models::ModelSpec;
use torusloc::polytope::edges_at_vertex;
use torusloc::rootsys::{build, root_polytope, RootSystemType};
use torusloc::weights::{fmt_rational, int, parse_rational, Rational, Weight};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "torusloc", version, about = "Exact torus-action computations for contact Fano manifolds")]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a root system in standard coordinates.
    Roots {
        #[arg(long = "type")]
        ty: String,
    },
    /// Convex hull of a root system with edge data at vertices.
    Polytope(PolytopeArgs),
    /// Localization on a fixed-point data file.
    Localize(LocalizeArgs),
    /// Build fixed-point data for a catalog model.
    Model {
        #[arg(long)]
        name: String,
        /// Weight list for `pspace`, e.g. `0,1^2,2`.
        #[arg(long)]
        weights: Option<String>,
        /// Write the data file here instead of printing it.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Hilbert polynomial of L on a contact manifold of the given dimension.
    Hilbert(HilbertArgs),
    /// Replay registered cases.
    Run {
        #[arg(long = "case", conflicts_with = "all", required_unless_present = "all")]
        cases: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Also write the JSON reports to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// List registered cases.
    List {
        #[arg(long)]
        module: Option<String>,
    },
}

#[derive(Args)]
struct PolytopeArgs {
    /// Root system type, e.g. `E8`.
    #[arg(long)]
    roots: String,
    /// `auto` (first vertex), `all`, or comma-separated coordinates such as `1,1,0,0`.
    #[arg(long)]
    edges_at_vertex: Option<String>,
}

#[derive(Args)]
struct LocalizeArgs {
    file: PathBuf,
    /// Reduce the localization sum to a Laurent polynomial.
    #[arg(long)]
    certify: bool,
    /// Solve for the unknown multiplicities.
    #[arg(long)]
    solve: bool,
    /// One-parameter subgroup used by `--solve`, comma separated.
    #[arg(long, default_value = "1")]
    specialize: String,
}

#[derive(Args)]
struct HilbertArgs {
    /// Odd dimension `2n + 1 >= 3`.
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    degree: Option<i64>,
    #[arg(long)]
    p1: Option<i64>,
    #[arg(long)]
    p2: Option<i64>,
}

/// Outcome of a subcommand: printed output plus whether every verdict passed.
struct Outcome {
    text: String,
    json: Value,
    pass: bool,
}

enum Failure {
    Usage(String),
    Compute(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute(e: impl std::fmt::Display) -> Failure {
    Failure::Compute(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    let result = match cli.command {
        Command::Roots { ty } => roots(&ty),
        Command::Polytope(a) => polytope(&a),
        Command::Localize(a) => localize(&a),
        Command::Model { name, weights, emit } => model(&name, weights.as_deref(), emit.as_ref()),
        Command::Hilbert(a) => hilbert(&a),
        Command::Run { cases, all, emit } => run(&cases, all, emit.as_ref()),
        Command::List { module } => list(module.as_deref()),
    };
    match result {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("JSON values serialize"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.pass { 0 } else { EXIT_FAIL })
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

/// Sizes the global rayon pool from `TORUSLOC_THREADS` when set.
fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("TORUSLOC_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().map_err(|_| format!("TORUSLOC_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("TORUSLOC_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn parse_type(s: &str) -> Result<RootSystemType, Failure> {
    s.parse().map_err(usage)
}

fn roots(ty: &str) -> Result<Outcome, Failure> {
    let rs = build(parse_type(ty)?).map_err(usage)?;
    let list = |ws: &[Weight]| ws.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    let mut text = format!("{}: {} roots in rank {}\n", rs.ty, rs.roots.len(), rs.ambient_rank);
    text.push_str(&format!("long ({}): {}\n", rs.long_roots.len(), list(&rs.long_roots)));
    if !rs.short_roots.is_empty() {
        text.push_str(&format!("short ({}): {}\n", rs.short_roots.len(), list(&rs.short_roots)));
    }
    let json = serde_json::to_value(&rs).map_err(compute)?;
    Ok(Outcome { text, json, pass: true })
}

fn parse_weight(s: &str) -> Result<Weight, Failure> {
    let coords = s.split(',').map(|x| parse_rational(x.trim())).collect::<Result<Vec<_>, _>>().map_err(usage)?;
    Ok(Weight::new(coords))
}

fn polytope(a: &PolytopeArgs) -> Result<Outcome, Failure> {
    let rs = build(parse_type(&a.roots)?).map_err(usage)?;
    let p = root_polytope(&rs);
    let targets: Vec<Weight> = match a.edges_at_vertex.as_deref() {
        None => vec![],
        Some("auto") => vec![p.vertices[0].clone()],
        Some("all") => p.vertices.clone(),
        Some(s) => vec![parse_weight(s)?],
    };
    let mut text = format!("{}: {} vertices, {} facets, dimension {}\n", rs.ty, p.vertices.len(), p.facets.len(), p.dim());
    let mut counts = BTreeMap::new();
    let mut directions = BTreeMap::new();
    for v in &targets {
        let dirs = edges_at_vertex(&p, v).map_err(usage)?;
        text.push_str(&format!("edges at {v}: {}\n", dirs.len()));
        for d in &dirs {
            text.push_str(&format!("  {d}\n"));
        }
        counts.insert(v.to_string(), dirs.len());
        directions.insert(v.to_string(), dirs);
    }
    let json = json!({
        "vertices": p.vertices,
        "facets": p.facets,
        "edge_counts": counts,
        "edge_directions": directions,
    });
    Ok(Outcome { text, json, pass: true })
}

fn localize(a: &LocalizeArgs) -> Result<Outcome, Failure> {
    let raw = std::fs::read_to_string(&a.file).map_err(|e| usage(format!("{}: {e}", a.file.display())))?;
    let data = FixedPointData::from_json(&raw).map_err(usage)?;
    let sum = euler_characteristic(&data).map_err(compute)?;
    let mut text = format!("sum: {sum}\n");
    let mut json = json!({ "sum": sum.to_string(), "rational_function": sum });
    if a.certify {
        let chi = certify_laurent(&data).map_err(compute)?;
        text.push_str(&format!("laurent: {chi}\nvalue at 1: {}\n", chi.eval_at_ones()));
        json["laurent"] = json!(chi.to_string());
        json["value_at_one"] = serde_json::to_value(chi.eval_at_ones()).map_err(compute)?;
    }
    if a.solve {
        let lambda = a
            .specialize
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("bad --specialize {:?}", a.specialize)))?;
        let sol = solve_multiplicities(&data, &lambda).map_err(compute)?;
        for c in &sol.conditions {
            text.push_str(&format!("condition: {c}\n"));
        }
        for (k, v) in &sol.values {
            text.push_str(&format!("{k} = {v}\n"));
        }
        text.push_str(&format!("character: {}\n", sol.character));
        json["solution"] = serde_json::to_value(&sol).map_err(compute)?;
    }
    Ok(Outcome { text, json, pass: true })
}

fn model(name: &str, weights: Option<&str>, emit: Option<&PathBuf>) -> Result<Outcome, Failure> {
    let spec = ModelSpec::parse(name, weights).map_err(usage)?;
    let data = spec.build().map_err(usage)?;
    let body = data.to_json();
    let text = match emit {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            format!("{spec}: {} points, {} curves written to {}\n", data.points.len(), data.curves.len(), path.display())
        }
        None => format!("{body}\n"),
    };
    let json = serde_json::from_str(&body).map_err(compute)?;
    Ok(Outcome { text, json, pass: true })
}

fn hilbert(a: &HilbertArgs) -> Result<Outcome, Failure> {
    if a.dim < 3 || a.dim % 2 == 0 {
        return Err(usage(format!("--dim must be odd and at least 3, got {}", a.dim)));
    }
    let n = (a.dim - 1) / 2;
    let hp = contactrr::hilbert_polynomial(n).map_err(compute)?;
    let mut text = format!("p(m) = {hp}\n");
    if !hp.verified {
        text.push_str("note: no reference values exist in this dimension\n");
    }
    let identities = contactrr::intersection_identities(n).ok();
    for id in identities.iter().flatten() {
        text.push_str(&format!("{id}\n"));
    }
    let bound = contactrr::bg_bound(n).ok();
    if let Some(b) = &bound {
        text.push_str(&format!("BG: {b}\n"));
    }
    let mut values: BTreeMap<String, Rational> = BTreeMap::new();
    for (k, v) in [(DEGREE, a.degree), (P1, a.p1), (P2, a.p2)] {
        if let Some(v) = v {
            values.insert(k.to_string(), int(v));
        }
    }
    let mut verdicts = BTreeMap::new();
    if let (Some(b), false) = (&bound, values.is_empty()) {
        if let Some(ok) = b.holds(&values) {
            verdicts.insert("bg", ok);
        }
    }
    if n == 4 {
        if let Some(d) = a.degree {
            let v = contactrr::parity_check(4, Some(d)).map_err(compute)?;
            verdicts.insert("parity", v.pass == Some(true));
        }
    }
    let mut table = Vec::new();
    if !values.is_empty() {
        for m in 0..=3 {
            let v = hp.eval_numeric(&int(m), &values);
            text.push_str(&format!("p({m}) = {v}\n"));
            table.push(json!({"m": m, "value": v.to_string()}));
        }
    }
    for (k, ok) in &verdicts {
        text.push_str(&format!("{k}: {}\n", if *ok { "pass" } else { "fail" }));
    }
    let pass = verdicts.values().all(|&b| b);
    let json = json!({
        "dim": a.dim,
        "p_coeffs": hp.binomial_coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "p_coeffs_basis": "C(m+k,k), k = 0..dim",
        "verified": hp.verified,
        "identities": identities.iter().flatten().map(ToString::to_string).collect::<Vec<_>>(),
        "bound": bound.as_ref().map(ToString::to_string),
        "values": table,
        "verdicts": verdicts,
        "substitutions": values.iter().map(|(k, v)| (k.clone(), fmt_rational(v))).collect::<BTreeMap<_, _>>(),
    });
    Ok(Outcome { text, json, pass })
}

fn report_text(r: &CaseReport) -> String {
    let mut s = format!("[{}] {} ({})\n", if r.pass { "PASS" } else { "FAIL" }, r.case_name, r.summary);
    for c in &r.checks {
        s.push_str(&format!("  {} {}: {}\n", if c.pass { "ok  " } else { "FAIL" }, c.name, c.computed));
        if !c.pass {
            s.push_str(&format!("       expected: {}\n", c.expected));
        }
    }
    if let Some(e) = &r.error {
        s.push_str(&format!("  error: {e}\n"));
    }
    s
}

fn run(names: &[String], all: bool, emit: Option<&PathBuf>) -> Result<Outcome, Failure> {
    let reports = if all {
        cases::run_all()
    } else {
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        cases::run_cases(&refs).map_err(usage)?
    };
    let pass = reports.iter().all(|r| r.pass);
    let mut text: String = reports.iter().map(report_text).collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    text.push_str(&format!("{passed}/{} cases passed\n", reports.len()));
    let json = serde_json::to_value(&reports).map_err(compute)?;
    if let Some(path) = emit {
        let body = serde_json::to_string_pretty(&json).map_err(compute)?;
        std::fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(Outcome { text, json, pass })
}

fn list(module: Option<&str>) -> Result<Outcome, Failure> {
    let defs = cases::list_cases(module);
    let text = defs.iter().map(|c| format!("{:<30} {:<10} {}\n", c.name, c.module, c.summary)).collect();
    let json = json!(defs.iter().map(|c| json!({"name": c.name, "module": c.module, "summary": c.summary})).collect::<Vec<_>>());
    Ok(Outcome { text, json, pass: true })
}
