mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hivepoly::census::balanced_triples;
use hivepoly::flagcheck::{horn_numeric_check, verify_polynomial, PrimeField, DEFAULT_PRIME};
use hivepoly::hive::{enumerate_measures, lr_coeff};
use hivepoly::rigidity::{find_witness, Witness};
use hivepoly::skeleton::decompose;
use hivepoly::synth::{dual_measure, dual_sets, synthesize, synthesize_with_stats};
use hivepoly::{BoundaryData, Chirality, Error, Result, SetTriple, TriMeasure};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hivepoly", version, about = "Honeycomb measures and lattice polynomials for Schubert problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Littlewood-Richardson coefficient of a problem.
    Lr(Common),
    /// Every integer measure with the problem's boundary.
    Measures(Common),
    /// Rigidity verdict and witness for a measure (or each measure of a problem).
    Rigid(Common),
    /// Extremal components in precedence order.
    Decompose(Common),
    /// Dual problem and, when unique, the dual measure.
    Dual(Common),
    /// Lattice polynomial solving a problem with coefficient 1.
    Synth(Common),
    /// Synthesize, evaluate on random flags and check the intersection pattern.
    Verify(Common),
    /// Random-matrix check of the eigenvalue inequalities.
    Horn(HornArgs),
    /// Sweep every balanced problem of one size.
    Census(CensusArgs),
    /// SVG drawing of a measure's support.
    Render(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Svg,
}

#[derive(Args)]
struct Common {
    /// Inline JSON or a path to a JSON file.
    #[arg(long = "in", value_name = "JSON|FILE")]
    input: String,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of random flag triples (verify, census) or matrix triples (horn).
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct HornArgs {
    /// Matrix size.
    #[arg(long = "size", default_value_t = 12)]
    size: usize,
    /// Block counts, each dividing the size.
    #[arg(long = "blocks", value_delimiter = ',', default_values_t = vec![2, 3, 4, 6])]
    blocks: Vec<usize>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    n: u32,
    #[command(flatten)]
    opts: Opts,
}

enum Input {
    Problem(SetTriple),
    Measure(TriMeasure),
}

fn read_input(raw: &str) -> Result<Input> {
    let text = if raw.trim_start().starts_with('{') {
        raw.to_string()
    } else {
        std::fs::read_to_string(raw).map_err(|e| Error::InvalidInput(format!("cannot read {raw}: {e}")))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if value.get("edges").is_some() {
        Ok(Input::Measure(TriMeasure::from_json(&text)?))
    } else {
        Ok(Input::Problem(SetTriple::from_json(&text)?))
    }
}

fn problem(raw: &str) -> Result<SetTriple> {
    match read_input(raw)? {
        Input::Problem(s) => Ok(s),
        Input::Measure(m) => m.sets(),
    }
}

fn measures(raw: &str) -> Result<Vec<TriMeasure>> {
    match read_input(raw)? {
        Input::Measure(m) => Ok(vec![m]),
        Input::Problem(s) => {
            let ms = enumerate_measures(&BoundaryData::from_sets(&s, Chirality::Plus));
            if ms.is_empty() {
                return Err(Error::Infeasible(format!("no measure carries {s}")));
            }
            Ok(ms)
        }
    }
}

fn seeds(opts: &Opts, default: usize) -> Vec<u64> {
    let k = opts.trials.unwrap_or(default) as u64;
    (0..k).map(|i| opts.seed + i).collect()
}

fn field(opts: &Opts) -> Result<PrimeField> {
    PrimeField::new(opts.prime)
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::SixEdges { point } => format!("six support edges at {point}"),
        Witness::EvilLoop { points } => {
            let path: Vec<String> = points.iter().map(ToString::to_string).collect();
            format!("evil loop {}", path.join(" "))
        }
    }
}

fn triple_json(s: &SetTriple) -> Value {
    serde_json::to_value(s).expect("set triples serialize")
}

/// The rendered output plus whether a check inside it failed.
struct Output {
    body: String,
    check_failed: bool,
}

impl From<String> for Output {
    fn from(body: String) -> Self {
        Self { body, check_failed: false }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn run(cmd: &Cmd) -> Result<(Output, Option<&PathBuf>)> {
    let out = match cmd {
        Cmd::Lr(c) => {
            let s = problem(&c.input)?;
            let v = lr_coeff(&s);
            let body = match c.opts.format {
                Some(Format::Json) => pretty(&json!({"problem": triple_json(&s), "c": v})),
                _ => v.to_string(),
            };
            (body.into(), c.opts.out.as_ref())
        }
        Cmd::Measures(c) => {
            let s = problem(&c.input)?;
            let ms = enumerate_measures(&BoundaryData::from_sets(&s, Chirality::Plus));
            let body = match c.opts.format {
                Some(Format::Json) => {
                    pretty(&Value::Array(ms.iter().map(|m| serde_json::to_value(m.to_file()).expect("serializes")).collect()))
                }
                _ => ms.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
            };
            (body.into(), c.opts.out.as_ref())
        }
        Cmd::Rigid(c) => {
            let ms = measures(&c.input)?;
            let verdicts: Vec<Option<Witness>> = ms.iter().map(find_witness).collect();
            let body = match c.opts.format {
                Some(Format::Json) => pretty(&Value::Array(
                    verdicts.iter().map(|w| json!({"rigid": w.is_none(), "witness": w})).collect(),
                )),
                _ => verdicts
                    .iter()
                    .map(|w| match w {
                        None => "rigid".to_string(),
                        Some(w) => format!("not rigid: {}", witness_text(w)),
                    })
                    .collect::<Vec<_>>()
                    .join("\n"),
            };
            (body.into(), c.opts.out.as_ref())
        }
        Cmd::Decompose(c) => {
            let ms = measures(&c.input)?;
            let ds = ms.iter().map(decompose).collect::<Result<Vec<_>>>()?;
            let body = match c.opts.format {
                Some(Format::Json) => pretty(&serde_json::to_value(&ds).expect("serializes")),
                _ => ds
                    .iter()
                    .map(|d| {
                        let mut lines: Vec<String> = d
                            .components
                            .iter()
                            .enumerate()
                            .map(|(i, comp)| format!("{}: {} x root {} -> {}", i + 1, comp.coeff, comp.root, comp.mu))
                            .collect();
                        for (a, b) in &d.relations {
                            lines.push(format!("{} precedes {}", a + 1, b + 1));
                        }
                        lines.join("\n")
                    })
                    .collect::<Vec<_>>()
                    .join("\n\n"),
            };
            (body.into(), c.opts.out.as_ref())
        }
        Cmd::Dual(c) => {
            let s = problem(&c.input)?;
            let d = dual_sets(&s);
            let ms = enumerate_measures(&BoundaryData::from_sets(&s, Chirality::Plus));
            let dm = if ms.len() == 1 { Some(dual_measure(&ms[0])?) } else { None };
            let body = match c.opts.format {
                Some(Format::Json) => pretty(&json!({
                    "problem": triple_json(&s),
                    "dual": triple_json(&d),
                    "measure": dm.as_ref().map(|m| serde_json::to_value(m.to_file()).expect("serializes")),
                })),
                _ => match &dm {
                    Some(m) => format!("{d}\n{m}"),
                    None => d.to_string(),
                },
            };
            (body.into(), c.opts.out.as_ref())
        }
        Cmd::Synth(c) => {
            let s = problem(&c.input)?;
            let p = synthesize(&s)?;
            let body = match c.opts.format {
                Some(Format::Json) => p.to_json(),
                _ => p.to_text(),
            };
            (body.into(), c.opts.out.as_ref())
        }
        Cmd::Verify(c) => {
            let s = problem(&c.input)?;
            let (p, stats) = synthesize_with_stats(&s)?;
            let rep = verify_polynomial(&p, &s, field(&c.opts)?, &seeds(&c.opts, 5))?;
            let body = match c.opts.format {
                Some(Format::Json) => {
                    pretty(&json!({"polynomial": p.to_text(), "stats": stats, "report": rep, "pass": rep.all_pass()}))
                }
                _ => format!(
                    "{}\n{} on seeds {:?} over GF({}), dimensions {:?}",
                    p.to_text(),
                    if rep.all_pass() { "pass" } else { "FAIL" },
                    rep.seeds,
                    rep.prime,
                    rep.dims
                ),
            };
            (Output { body, check_failed: !rep.all_pass() }, c.opts.out.as_ref())
        }
        Cmd::Horn(h) => {
            let rep = horn_numeric_check(h.size, &h.blocks, h.opts.trials.unwrap_or(50), h.tol, h.opts.seed)?;
            let body = match h.opts.format {
                Some(Format::Json) => pretty(&serde_json::to_value(&rep).expect("serializes")),
                _ => format!(
                    "N={} blocks {:?}, {} trials, seed {}: {} inequalities, {} violations, max margin {:.3e}",
                    rep.size,
                    rep.blocks,
                    rep.trials,
                    rep.seed,
                    rep.inequalities_checked,
                    rep.violations,
                    rep.max_relative_margin
                ),
            };
            (Output { body, check_failed: rep.violations > 0 }, h.opts.out.as_ref())
        }
        Cmd::Census(a) => {
            let f = field(&a.opts)?;
            let sd = seeds(&a.opts, 5);
            let rows: Vec<Value> = balanced_triples(a.n)
                .into_par_iter()
                .map(|s| census_row(&s, f, &sd))
                .collect::<Result<_>>()?;
            let failed = rows.iter().any(|r| r["verified"] == json!(false));
            let body = match a.opts.format {
                Some(Format::Json) => pretty(&json!({"n": a.n, "prime": f.modulus(), "seeds": sd, "rows": rows})),
                _ => {
                    let mut lines = vec![format!("# n={} prime={} seeds={:?}", a.n, f.modulus(), sd)];
                    lines.push("n\tI\tJ\tK\tc\trigid\tpolynomial\tverified".to_string());
                    for r in &rows {
                        let cell = |k: &str| match &r[k] {
                            Value::Null => "-".to_string(),
                            Value::String(s) => s.clone(),
                            v => v.to_string(),
                        };
                        lines.push(
                            ["n", "I", "J", "K", "c", "rigid", "polynomial", "verified"].map(cell).join("\t"),
                        );
                    }
                    lines.join("\n")
                }
            };
            (Output { body, check_failed: failed }, a.opts.out.as_ref())
        }
        Cmd::Render(c) => {
            let ms = measures(&c.input)?;
            let body = match c.opts.format {
                Some(Format::Json) => {
                    pretty(&Value::Array(ms.iter().map(|m| serde_json::to_value(m.to_file()).expect("serializes")).collect()))
                }
                Some(Format::Text) => ms.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
                _ => render::svg(&ms),
            };
            (body.into(), c.opts.out.as_ref())
        }
    };
    Ok(out)
}

fn census_row(s: &SetTriple, f: PrimeField, seeds: &[u64]) -> Result<Value> {
    let ms = enumerate_measures(&BoundaryData::from_sets(s, Chirality::Plus));
    let c = ms.len();
    let rigid = (c > 0).then(|| ms.iter().all(|m| find_witness(m).is_none()));
    let (poly, verified) = if c == 1 {
        let p = synthesize(s)?;
        let ok = verify_polynomial(&p, s, f, seeds)?.all_pass();
        (Some(p.to_text()), Some(ok))
    } else {
        (None, None)
    };
    Ok(json!({"n": s.n, "I": s.i, "J": s.j, "K": s.k, "c": c, "rigid": rigid, "polynomial": poly, "verified": verified}))
}

fn emit(body: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{body}\n"))
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = run(&cli.cmd).and_then(|(out, path)| {
        emit(&out.body, path)?;
        Ok(out.check_failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: a verification check failed");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
