use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pilab_core::algebra::FDAlgebra;
use pilab_core::freealg::MultilinearPoly;
use pilab_core::generic::{
    colength_dimension, gk_dimension_formula, relfree_hilbert, repvariety_dimension, trace_ring_hilbert, HilbertOptions,
};
use pilab_core::identities::{cocharacter_with, find_nonvanishing, kemer_index_search, CodimOptions, EvalOptions, KemerConfig, Verdict};
use pilab_core::rational::format_q;
use pilab_core::series::{fit, NiceRational, DEFAULT_FIT_MARGIN};
use pilab_core::vpart::{
    big_cells, cell_quasipolynomial, check_nabla, cocircuits, count_bruteforce, deep_points, dm_dimension, zonotope_volume,
    VectorList,
};
use pilab_core::{Error, Q};

#[derive(Parser)]
#[command(name = "pilab", version, about = "Exact computations for algebras with polynomial identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Time budget in milliseconds (PILAB_BUDGET_MS overrides).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum VpartOp {
    Count,
    Cells,
    Delta,
    Cocircuits,
    Quasi,
}

#[derive(Subcommand)]
enum Command {
    /// Radical, Wedderburn blocks and t,s-index of an algebra.
    Inspect {
        #[arg(long)]
        input: PathBuf,
    },
    /// Codimensions c_1..c_n.
    Codim {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Cocharacters chi_1..chi_n.
    Cochar {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Kemer index search and fundamentality verdict.
    Kemer {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        mu: usize,
        #[arg(long, default_value_t = 200_000)]
        node_limit: u64,
    },
    /// Hilbert function of the relatively free algebra or the trace ring.
    Hilbert {
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'd')]
        d: usize,
        #[arg(long)]
        trace_ring: bool,
        #[arg(long)]
        multigraded: bool,
        /// Denominator exponents h1,h2,... for a rational fit.
        #[arg(long, value_delimiter = ',')]
        fit: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_FIT_MARGIN)]
        margin: usize,
    },
    /// Fits a rational series to a Hilbert function document.
    Fit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        fit: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_FIT_MARGIN)]
        margin: usize,
    },
    /// Expansion, dimension and quasi-polynomial of a rational series.
    Series {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        expand: usize,
    },
    /// Vector partition functions.
    Vpart {
        #[arg(value_enum)]
        op: VpartOp,
        #[arg(long)]
        input: PathBuf,
        /// Target vector for `count`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        b: Option<Vec<i64>>,
        /// Restrict `quasi` to one cell.
        #[arg(long)]
        cell: Option<usize>,
        /// Re-check `quasi` on 25 random deep points.
        #[arg(long)]
        verify: bool,
    },
    /// Closed-form dimension formulas.
    Dims {
        #[arg(long, value_delimiter = ',')]
        blocks: Option<Vec<u64>>,
        #[arg(short = 'm')]
        m: Option<u64>,
        #[arg(short = 't')]
        t: Option<u64>,
        #[arg(short = 'q')]
        q: Option<u64>,
    },
    /// Tests whether a multilinear polynomial is an identity.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        poly: String,
    },
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 2,
            Failure::Core(Error::BudgetExceeded(_)) => 3,
            Failure::Core(Error::Invariant(_) | Error::ValidationFailed(_)) => 4,
            Failure::Core(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Io(s) => s.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn load_algebra(path: &Path) -> Result<FDAlgebra, Failure> {
    let a = FDAlgebra::from_json_str(&read(path)?)?;
    a.check_associativity()?;
    Ok(a)
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Core(Error::Parse(e.to_string())))
}

fn q_str(x: &Q) -> Value {
    Value::String(format_q(x))
}

fn inspect(input: &Path) -> Outcome {
    let a = load_algebra(input)?;
    let r = a.structure_report()?;
    Ok((r.to_json(), 0))
}

fn codim(input: &Path, n: usize, workers: usize, cochar: bool) -> Outcome {
    let a = load_algebra(input)?;
    let opts = CodimOptions { workers, ..Default::default() };
    let mut rows = Vec::new();
    for k in 1..=n {
        let c = cocharacter_with(&a, k, opts)?;
        rows.push(if cochar { c.to_json() } else { json!({"n": k, "codimension": c.codimension, "colength": c.colength}) });
    }
    Ok((json!({"rows": rows}), 0))
}

fn kemer(input: &Path, mu: usize, node_limit: u64, cli: &Cli) -> Outcome {
    let a = load_algebra(input)?;
    let cfg = KemerConfig { mu_max: mu, budget_ms: cli.budget.or(Some(60_000)), seed: cli.seed, workers: cli.workers, node_limit };
    let r = kemer_index_search(&a, &cfg)?;
    let code = if matches!(r.verdict, Verdict::Inconclusive { .. }) { 3 } else { 0 };
    Ok((r.to_json(), code))
}

fn fit_report(dims: &[u64], exps: &[usize], margin: usize) -> Result<Value, Failure> {
    let prefix: Vec<_> = dims.iter().map(|&d| d.into()).collect();
    Ok(match fit(&prefix, exps, margin)? {
        Some(f) => json!({"status": "fit", "series": f.to_json(), "display": f.to_string(), "dimension": f.dimension()}),
        None => json!({"status": "NoFit", "denominator": exps}),
    })
}

#[allow(clippy::too_many_arguments)]
fn hilbert(input: &Path, m: usize, d: usize, trace: bool, multigraded: bool, fit_exps: Option<&[usize]>, margin: usize, cli: &Cli) -> Outcome {
    let a = load_algebra(input)?;
    let opts = HilbertOptions { multigraded, budget_ms: cli.budget, workers: cli.workers, ..Default::default() };
    let h = if trace { trace_ring_hilbert(&a, m, d, &opts)? } else { relfree_hilbert(&a, m, d, &opts)? };
    let mut out = h.to_json();
    out["kind"] = json!(if trace { "trace_ring" } else { "relatively_free" });
    if let Some(exps) = fit_exps {
        out["fit"] = fit_report(&h.dims, exps, margin)?;
    }
    Ok((out, 0))
}

fn fit_cmd(input: &Path, exps: &[usize], margin: usize) -> Outcome {
    let doc = load_json(input)?;
    let dims: Vec<u64> = doc
        .get("dims")
        .and_then(|d| d.as_array())
        .and_then(|d| d.iter().map(|x| x.as_u64()).collect())
        .ok_or_else(|| Failure::Core(Error::Parse("expected {\"dims\": [naturals]}".into())))?;
    Ok((fit_report(&dims, exps, margin)?, 0))
}

fn series(input: &Path, count: usize) -> Outcome {
    let f = NiceRational::from_json(&load_json(input)?)?;
    let qp = f.quasi_polynomial();
    let coeffs: Vec<String> = f.expand(count).iter().map(|c| c.to_string()).collect();
    Ok((
        json!({
            "series": f.to_json(),
            "display": f.to_string(),
            "dimension": f.dimension(),
            "expansion": coeffs,
            "quasi_polynomial": qp.to_json(),
        }),
        0,
    ))
}

fn vpart(op: VpartOp, input: &Path, b: Option<&[i64]>, cell: Option<usize>, verify: bool, seed: u64) -> Outcome {
    let s = VectorList::from_json(&load_json(input)?)?;
    let out = match op {
        VpartOp::Count => {
            let b = b.ok_or_else(|| Failure::Core(Error::InvalidParams("count needs --b".into())))?;
            json!({"b": b, "count": count_bruteforce(&s, b)?.to_string()})
        }
        VpartOp::Delta => json!({"delta": zonotope_volume(&s)?.to_string(), "dm_dimension": dm_dimension(&s)?.to_string()}),
        VpartOp::Cocircuits => json!({"cocircuits": cocircuits(&s)?}),
        VpartOp::Cells => big_cells(&s)?.to_json(),
        VpartOp::Quasi => {
            let dec = big_cells(&s)?;
            let cells: Vec<usize> = match cell {
                Some(c) => vec![c],
                None => (0..dec.cells.len()).collect(),
            };
            let mut reports = Vec::new();
            for c in cells {
                let qp = cell_quasipolynomial(&s, &dec, c)?;
                let mut r = json!({
                    "cell": c,
                    "representative": dec.cells.get(c).map(|x| x.representative.iter().map(q_str).collect::<Vec<_>>()),
                    "quasi_polynomial": qp.to_json(),
                    "nabla_checks": check_nabla(&s, &qp, 10, 20, seed)?,
                });
                if verify {
                    let pts = deep_points(&s, &dec, c, 25, seed.wrapping_add(c as u64));
                    let mut ok = true;
                    for p in &pts {
                        ok &= qp.value(p) == Q::from_integer(count_bruteforce(&s, p)?.into());
                    }
                    r["verified"] = json!(if ok { "verified" } else { "mismatch" });
                }
                reports.push(r);
            }
            json!({"p": s.p(), "cells": reports})
        }
    };
    Ok((out, 0))
}

fn dims(blocks: Option<&[u64]>, m: Option<u64>, t: Option<u64>, q: Option<u64>) -> Outcome {
    let mut out = serde_json::Map::new();
    let (t, q) = match blocks {
        Some(b) => (Some(t.unwrap_or(b.iter().map(|n| n * n).sum())), Some(q.unwrap_or(b.len() as u64))),
        None => (t, q),
    };
    if let (Some(t), Some(q)) = (t, q) {
        out.insert("t".into(), json!(t));
        out.insert("q".into(), json!(q));
        out.insert("colength_dimension".into(), json!(colength_dimension(t, q)));
        if let Some(m) = m {
            out.insert("gk_dimension".into(), json!(gk_dimension_formula(t, q, m)?));
        }
    }
    if let (Some(b), Some(m)) = (blocks, m) {
        out.insert("repvariety_dimension".into(), json!(repvariety_dimension(b, m)?));
    }
    if out.is_empty() {
        return Err(Failure::Core(Error::InvalidParams("give --blocks or -t and -q".into())));
    }
    Ok((Value::Object(out), 0))
}

fn check(input: &Path, poly: &str, workers: usize) -> Outcome {
    let a = load_algebra(input)?;
    let f = MultilinearPoly::parse(poly)?;
    let opts = EvalOptions { workers, ..Default::default() };
    Ok(match find_nonvanishing(&a, &f, opts)? {
        None => (json!({"polynomial": f.to_string(), "identity": true}), 0),
        Some(w) => (
            json!({
                "polynomial": f.to_string(),
                "identity": false,
                "witness": {
                    "assignment": w.assignment.iter().map(|(v, b)| json!([v, w.basis[*b]])).collect::<Vec<_>>(),
                    "value": w.value.iter().map(q_str).collect::<Vec<_>>(),
                }
            }),
            0,
        ),
    })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Inspect { input } => inspect(input),
        Command::Codim { input, n } => codim(input, *n, cli.workers, false),
        Command::Cochar { input, n } => codim(input, *n, cli.workers, true),
        Command::Kemer { input, mu, node_limit } => kemer(input, *mu, *node_limit, cli),
        Command::Hilbert { input, m, d, trace_ring, multigraded, fit, margin } => {
            hilbert(input, *m, *d, *trace_ring, *multigraded, fit.as_deref(), *margin, cli)
        }
        Command::Fit { input, fit, margin } => fit_cmd(input, fit, *margin),
        Command::Series { input, expand } => series(input, *expand),
        Command::Vpart { op, input, b, cell, verify } => vpart(*op, input, b.as_deref(), *cell, *verify, cli.seed),
        Command::Dims { blocks, m, t, q } => dims(blocks.as_deref(), *m, *t, *q),
        Command::Check { input, poly } => check(input, poly, cli.workers),
    }
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 2, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for i in items {
                            out.push_str(&format!("{pad}  -\n"));
                            render_text(i, indent + 4, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {x}\n")),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{v}\n")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((v, code)) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("report serializes")),
                Format::Text => {
                    let mut s = String::new();
                    render_text(&v, 0, &mut s);
                    print!("{s}");
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
