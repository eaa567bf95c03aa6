//! Command-line front end: JSON I/O around the exact computations in
//! vecpic-core, plus batch grid sweeps.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::One;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use vecpic_core::balance::{is_balanced, saturated_subcurves, BalanceMode, Multidegree};
use vecpic_core::boundary::{boundary_indices, generic_multidegree};
use vecpic_core::graph::DualGraph;
use vecpic_core::hstab::{
    is_h_semistable_witness, witness_from, TwoComponentConfig, WitnessVerdict,
};
use vecpic_core::invariants::{
    make_context, poincare_bundle_exists, res_weights, weight_zero_basis, NumericalContext,
};
use vecpic_core::picard::{picard_presentation, StackTag};
use vecpic_core::taut::express_lambda;
use vecpic_core::testcurves::{independence_matrix, DegreeEntry};
use vecpic_core::Error;

#[derive(Parser)]
#[command(name = "vecpic", version, about = "Exact invariants of balanced vector bundles on nodal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ContextArgs {
    /// Rank (>= 1)
    #[arg(long)]
    r: i64,
    /// Total degree
    #[arg(long)]
    d: i64,
    /// Genus (>= 2)
    #[arg(long)]
    g: i64,
}

impl ContextArgs {
    fn context(&self) -> Result<NumericalContext, Error> {
        make_context(self.r, self.d, self.g)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Numerical invariants n, v, k, the weight vector, and the
    /// Poincare-bundle criterion
    Invariants {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        json: bool,
    },
    /// Boundary divisor table: indices (i, j), generic multidegrees, and
    /// extremality
    Boundary {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check a multidegree on a dual graph against the basic inequality
    Balance {
        /// dualgraph-v1 JSON document with a multidegree
        #[arg(long)]
        graph: String,
        /// all | connected-both-sides | one-sided-connected
        #[arg(long, default_value = "all")]
        mode: String,
        #[arg(long)]
        json: bool,
    },
    /// Expand a determinant-of-cohomology class in the standard basis
    Taut {
        #[arg(long)]
        r: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        #[arg(long)]
        l: i64,
        #[arg(long)]
        json: bool,
    },
    /// Picard group presentation for a moduli stack variant
    Picard {
        /// Stack tag, e.g. Vec, VecBar, V, VPss
        #[arg(long)]
        stack: String,
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        json: bool,
    },
    /// Existence of a Poincare bundle
    Poincare {
        #[command(flatten)]
        ctx: ContextArgs,
        #[arg(long)]
        json: bool,
    },
    /// Boundary-restriction degree matrix of the test families
    Intersect {
        #[command(flatten)]
        ctx: ContextArgs,
        /// Write the matrix as JSON to this file
        #[arg(long)]
        matrix_out: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Strict-semistability witness for a two-component extremal multidegree
    Hstab {
        #[arg(long)]
        g1: i64,
        #[arg(long)]
        g2: i64,
        #[arg(long = "N")]
        nodes: i64,
        #[arg(long)]
        r: i64,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        d: i64,
        /// Start of the twist-level window (default: smallest n making all
        /// Euler characteristics positive)
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        json: bool,
    },
    /// Run a subcommand over a parameter grid, one JSON record per line
    Sweep {
        /// invariants | boundary | poincare | intersect | picard
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        r_min: i64,
        #[arg(long)]
        r_max: i64,
        #[arg(long, default_value_t = 0)]
        d_min: i64,
        #[arg(long)]
        d_max: i64,
        #[arg(long, default_value_t = 2)]
        g_min: i64,
        #[arg(long)]
        g_max: i64,
        /// Stack tag for target=picard
        #[arg(long, default_value = "Vec")]
        stack: String,
    },
}

#[derive(Deserialize)]
struct GraphDoc {
    schema: String,
    vertices: Vec<VertexDoc>,
    edges: Vec<(String, String)>,
    multidegree: Option<MultidegreeDoc>,
}

#[derive(Deserialize)]
struct VertexDoc {
    id: String,
    genus: u32,
}

#[derive(Deserialize)]
struct MultidegreeDoc {
    rank: i64,
    degrees: std::collections::BTreeMap<String, i64>,
}

enum CliError {
    /// Exit 1: the parameters are outside the theory's domain
    Domain(String),
    /// Exit 2: malformed input
    Validation(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Validation(m) => CliError::Validation(m),
            Error::Domain(m) => CliError::Domain(format!("domain error: {m}")),
            Error::Internal(m) => CliError::Domain(format!("internal invariant violated: {m}")),
        }
    }
}

fn load_graph(path: &str) -> Result<(DualGraph, Multidegree), CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {path}: {e}")))?;
    let doc: GraphDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{path}: {e}")))?;
    if doc.schema != "dualgraph-v1" {
        return Err(CliError::Validation(format!(
            "{path}: unsupported schema {:?}, expected \"dualgraph-v1\"",
            doc.schema
        )));
    }
    let verts: Vec<(&str, u32)> = doc.vertices.iter().map(|v| (v.id.as_str(), v.genus)).collect();
    let edges: Vec<(&str, &str)> = doc.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let graph = DualGraph::new(&verts, &edges)?;
    let md = doc
        .multidegree
        .ok_or_else(|| CliError::Validation(format!("{path}: missing \"multidegree\"")))?;
    let md = Multidegree::new(md.rank, md.degrees)?;
    md.check_matches(&graph)?;
    Ok((graph, md))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

/// Emit `key value` lines in the same order as the JSON object so the two
/// forms are trivially comparable.
fn print_table(v: &Value) {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Array(items) if items.iter().all(Value::is_object) => {
                        for item in items {
                            let row: Vec<String> = item
                                .as_object()
                                .unwrap()
                                .iter()
                                .map(|(k, v)| format!("{k}={}", plain(v)))
                                .collect();
                            println!("{k} {}", row.join(" "));
                        }
                    }
                    _ => println!("{k} {}", plain(val)),
                }
            }
        }
        other => println!("{}", plain(other)),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(plain).collect();
            format!("[{}]", parts.join(","))
        }
        other => other.to_string(),
    }
}

fn emit(v: &Value, json: bool) {
    if json {
        print_json(v);
    } else {
        print_table(v);
    }
}

fn big(x: &num_bigint::BigInt) -> Value {
    Value::String(x.to_string())
}

fn rational(x: &num_rational::BigRational) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

fn invariants_record(ctx: &NumericalContext) -> Result<Value, CliError> {
    let basis = weight_zero_basis(ctx)?;
    Ok(json!({
        "r": ctx.r, "d": ctx.d, "g": ctx.g,
        "n": ctx.n_rd,
        "v": ctx.v_rdg,
        "k": ctx.k_rdg,
        "resWeights": res_weights(ctx),
        "poincare": poincare_bundle_exists(ctx)?,
        "alpha": basis.alpha,
        "beta": basis.beta,
    }))
}

fn boundary_record(ctx: &NumericalContext) -> Result<Value, CliError> {
    let mut rows = Vec::new();
    for b in boundary_indices(ctx)? {
        // level 0 is the irreducible boundary divisor: no two-component split
        let (d1, d2) = if b.i == 0 {
            (Value::Null, Value::Null)
        } else {
            let (d1, d2) = generic_multidegree(ctx, b.i, b.j)?;
            (json!(d1), json!(d2))
        };
        rows.push(json!({
            "i": b.i, "j": b.j, "d1": d1, "d2": d2, "extremal": b.extremal,
        }));
    }
    Ok(json!({ "r": ctx.r, "d": ctx.d, "g": ctx.g, "boundary": rows }))
}

fn picard_record(tag: StackTag, ctx: &NumericalContext) -> Result<Value, CliError> {
    let p = picard_presentation(tag, ctx)?;
    let relations: Vec<Vec<Value>> =
        p.relations.iter().map(|row| row.iter().map(big).collect()).collect();
    let factors: Vec<Value> = p.invariant_factors().iter().map(big).collect();
    Ok(json!({
        "stack": tag.label(),
        "r": ctx.r, "d": ctx.d, "g": ctx.g,
        "generators": p.generators,
        "relations": relations,
        "invariantFactors": factors,
        "freeRank": p.free_rank(),
    }))
}

fn intersect_record(ctx: &NumericalContext) -> Result<Value, CliError> {
    let m = independence_matrix(ctx)?;
    let rows: Vec<String> = m.rows.iter().map(|f| f.label()).collect();
    let cols: Vec<Value> = m.columns.iter().map(|b| json!([b.i, b.j])).collect();
    let entries: Vec<Vec<Value>> = m
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    DegreeEntry::Known(v) => json!(v),
                    DegreeEntry::Unknown => Value::Null,
                })
                .collect()
        })
        .collect();
    let mut rec = Map::new();
    rec.insert("r".into(), json!(ctx.r));
    rec.insert("d".into(), json!(ctx.d));
    rec.insert("g".into(), json!(ctx.g));
    rec.insert("rows".into(), json!(rows));
    rec.insert("columns".into(), Value::Array(cols));
    rec.insert("entries".into(), json!(entries));
    rec.insert("verdict".into(), json!(m.verdict));
    rec.insert("diagonalProduct".into(), json!(m.diagonal_product));
    if let Some(f) = &m.failure {
        rec.insert("failure".into(), json!(f));
    }
    Ok(Value::Object(rec))
}

fn parse_mode(s: &str) -> Result<BalanceMode, CliError> {
    match s.to_ascii_lowercase().as_str() {
        "all" => Ok(BalanceMode::All),
        "connected-both-sides" => Ok(BalanceMode::ConnectedBothSides),
        "one-sided-connected" => Ok(BalanceMode::OneSidedConnected),
        other => Err(CliError::Validation(format!(
            "unknown mode {other:?}; expected all, connected-both-sides, or one-sided-connected"
        ))),
    }
}

fn grid_limit() -> Result<Option<u64>, CliError> {
    match std::env::var("VECPIC_GRID_LIMIT") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .map(Some)
            .map_err(|_| CliError::Validation(format!("VECPIC_GRID_LIMIT={s:?} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Invariants { ctx, json } => {
            let ctx = ctx.context()?;
            emit(&invariants_record(&ctx)?, json);
        }
        Command::Boundary { ctx, json } => {
            let ctx = ctx.context()?;
            emit(&boundary_record(&ctx)?, json);
        }
        Command::Balance { graph, mode, json } => {
            let (g, md) = load_graph(&graph)?;
            let mode = parse_mode(&mode)?;
            let balanced = is_balanced(&g, &md, mode)?;
            let saturated: Vec<Vec<&str>> = saturated_subcurves(&g, &md)?
                .iter()
                .map(|z| g.subcurve_ids(z))
                .collect();
            emit(
                &json!({ "balanced": balanced, "saturated": saturated }),
                json,
            );
        }
        Command::Taut { r, m, n, l, json } => {
            let e = express_lambda(r, m, n, l)?;
            let coeffs: Vec<Value> = e.as_array().iter().map(rational).collect();
            emit(
                &json!({
                    "basis": ["Lambda(1,0,0)", "Lambda(0,1,0)", "Lambda(1,1,0)", "Lambda(0,0,1)", "delta"],
                    "coefficients": coeffs,
                    "integral": e.is_integral(),
                }),
                json,
            );
        }
        Command::Picard { stack, ctx, json } => {
            let tag = StackTag::parse(&stack)?;
            let ctx = ctx.context()?;
            emit(&picard_record(tag, &ctx)?, json);
        }
        Command::Poincare { ctx, json } => {
            let ctx = ctx.context()?;
            emit(&json!({ "exists": poincare_bundle_exists(&ctx)? }), json);
        }
        Command::Intersect { ctx, matrix_out, json } => {
            let ctx = ctx.context()?;
            let rec = intersect_record(&ctx)?;
            if let Some(path) = matrix_out {
                let text = serde_json::to_string_pretty(&rec).expect("serializable");
                fs::write(&path, text + "\n")
                    .map_err(|e| CliError::Validation(format!("cannot write {path}: {e}")))?;
            }
            emit(&rec, json);
        }
        Command::Hstab { g1, g2, nodes, r, q, d, n, json } => {
            let cfg = TwoComponentConfig::new(g1, g2, nodes, r, q, d)?;
            let rep = match n {
                Some(n0) => witness_from(&cfg, n0)?,
                None => is_h_semistable_witness(&cfg)?,
            };
            let verdict = match rep.verdict {
                WitnessVerdict::StrictlySemistable => "strictlySemistable",
                WitnessVerdict::Inconclusive => "inconclusive",
            };
            let positives: Vec<Value> = rep
                .positive_coefficients
                .iter()
                .map(|(t, n, msg)| json!({ "vertex": t, "n": n, "detail": msg }))
                .collect();
            emit(
                &json!({
                    "verdict": verdict,
                    "nZero": rep.n_zero,
                    "d1": cfg.d1(),
                    "d2": cfg.d2(),
                    "zeroVertices": rep.zero_vertices,
                    "positiveCoefficients": positives,
                }),
                json,
            );
        }
        Command::Sweep { target, r_min, r_max, d_min, d_max, g_min, g_max, stack } => {
            let mut points = Vec::new();
            for r in r_min..=r_max {
                for d in d_min..=d_max {
                    for g in g_min..=g_max {
                        points.push((r, d, g));
                    }
                }
            }
            if let Some(limit) = grid_limit()? {
                if points.len() as u64 > limit {
                    return Err(CliError::Validation(format!(
                        "sweep of {} points exceeds VECPIC_GRID_LIMIT={limit}",
                        points.len()
                    )));
                }
            }
            let tag = StackTag::parse(&stack)?;
            for (r, d, g) in points {
                let ctx = make_context(r, d, g)?;
                let rec = match target.as_str() {
                    "invariants" => invariants_record(&ctx)?,
                    "boundary" => boundary_record(&ctx)?,
                    "poincare" => {
                        json!({ "r": r, "d": d, "g": g, "exists": poincare_bundle_exists(&ctx)? })
                    }
                    "intersect" => intersect_record(&ctx)?,
                    "picard" => picard_record(tag, &ctx)?,
                    other => {
                        return Err(CliError::Validation(format!(
                            "unknown sweep target {other:?}"
                        )))
                    }
                };
                print_json(&rec);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
    }
}
