//! `palg`: validate, run and compare proto-algorithms written in `.palg` files.
//!
//! Exit codes: 0 ok/proven, 1 refuted or invalid, 2 unknown or inconclusive,
//! 3 unreadable input or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use protoalg::equiv::{check_equivalence, check_isomorphism, SimOptions, DEFAULT_ISO_BUDGET, DEFAULT_MAP_BUDGET};
use protoalg::exec::{Outcome, ProtoAlgorithm, Record, RunResult, StepKind, DEFAULT_MAX_STEPS};
use protoalg::frontend::generate::SizeParams;
use protoalg::frontend::pretty::{write_alphabet, write_graph, write_interp, write_process};
use protoalg::frontend::report::to_json;
use protoalg::frontend::selftest::selftest;
use protoalg::frontend::{parse, Document};
use protoalg::graph::validate_algorithm_graph;
use protoalg::interp::{check_interpretation, Value, DEFAULT_EXTENT_CAP};
use protoalg::prove::prove_aeqv;
use protoalg::translate::{graph_to_process, process_to_graph};

const EXIT_INVALID: u8 = 3;

#[derive(Parser)]
#[command(name = "palg", version, about = "Proto-algorithm checker")]
struct Cli {
    /// Machine-readable output
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Algorithmic,
    Computational,
}

impl From<Kind> for StepKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Algorithmic => StepKind::Algorithmic,
            Kind::Computational => StepKind::Computational,
        }
    }
}

#[derive(clap::Args)]
struct Inputs {
    /// Input value, e.g. `2` or `<1,3>`
    #[arg(long, conflicts_with = "all")]
    input: Option<String>,
    /// Every value of the input domain
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the graph clauses and the interpretation
    Validate { file: PathBuf },
    /// Run to an output
    Run {
        file: PathBuf,
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
        /// Include the algorithmic and computational traces
        #[arg(long)]
        trace: bool,
    },
    /// Print the state sequence for one input
    Trace {
        file: PathBuf,
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "algorithmic")]
        kind: Kind,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Search for an isomorphism
    Iso {
        left: PathBuf,
        right: PathBuf,
        /// Search budget
        #[arg(long, default_value_t = DEFAULT_ISO_BUDGET)]
        bound: u64,
    },
    /// Check algorithmic or computational equivalence
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "algorithmic")]
        kind: Kind,
        /// Maximum number of candidate input maps
        #[arg(long, default_value_t = DEFAULT_MAP_BUDGET)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: usize,
    },
    /// Print the process specification of a graph
    ToProcess { file: PathBuf },
    /// Rebuild a graph from a PROCESS section
    ToGraph { file: PathBuf },
    /// Prove algorithmic equivalence by unfolding the processes
    Prove {
        left: PathBuf,
        right: PathBuf,
        #[command(flatten)]
        inputs: Inputs,
        /// Maximum unfolding steps per input
        #[arg(long, default_value_t = 10_000)]
        bound: usize,
    },
    /// Check random instances against their known relations
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

/// Failure to get as far as a verdict.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

type Exit = Result<u8, Invalid>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if !e.use_stderr() {
                return ExitCode::SUCCESS;
            }
            eprintln!("\n{}", Cli::command().render_help());
            return ExitCode::from(EXIT_INVALID);
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Invalid(msg)) => {
            if cli.json {
                print!("{}", to_json(&json!({ "error": msg })));
            } else {
                eprintln!("palg: {msg}");
            }
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn read_document(path: &Path) -> Result<Document, Invalid> {
    let text = std::fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("{}:{d}", path.display())).collect();
        Invalid(lines.join("\n"))
    })
}

fn load(path: &Path) -> Result<ProtoAlgorithm, Invalid> {
    read_document(path)?.proto_algorithm().map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

/// Accepts `2`, `<2>`, `1,3` or `<1,3>`.
fn parse_value(s: &str) -> Result<Value, Invalid> {
    let inner = s.trim().trim_start_matches('<').trim_end_matches('>');
    let parts: Result<Vec<i64>, _> = inner.split(',').map(|c| c.trim().parse::<i64>()).collect();
    parts.map(Value::new).map_err(|_| Invalid(format!("cannot read value `{s}`")))
}

fn selected(a: &ProtoAlgorithm, inputs: &Inputs) -> Result<Vec<Value>, Invalid> {
    match &inputs.input {
        Some(s) => Ok(vec![parse_value(s)?]),
        None if inputs.all => Ok(a.input_values().to_vec()),
        None => Err(Invalid("give --input VALUE or --all".into())),
    }
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        print!("{}", to_json(value));
    } else {
        println!("{}", text());
    }
}

fn dispatch(cli: &Cli) -> Exit {
    let json = cli.json;
    match &cli.command {
        Command::Validate { file } => validate(json, file),
        Command::Run { file, inputs, max_steps, trace } => {
            let a = load(file)?;
            let record = if *trace { Record::BOTH } else { Record::NONE };
            #[derive(Serialize)]
            struct Entry {
                input: Value,
                #[serde(flatten)]
                result: RunResult,
            }
            let mut results = Vec::new();
            for d in selected(&a, inputs)? {
                let result = a.run(&d, *max_steps, record)?;
                results.push(Entry { input: d, result });
            }
            let diverged = results.iter().any(|e| !matches!(e.result.outcome, Outcome::Converged { .. }));
            emit(json, &results, || {
                let lines: Vec<String> = results
                    .iter()
                    .map(|e| match &e.result.outcome {
                        Outcome::Converged { output, nas } => format!("{} -> {output} in {nas} steps", e.input),
                        Outcome::DivergedAtBound { bound } => format!("{} -> no output within {bound} steps", e.input),
                    })
                    .collect();
                lines.join("\n")
            });
            Ok(if diverged { 2 } else { 0 })
        }
        Command::Trace { file, input, kind, max_steps } => {
            let a = load(file)?;
            let d = parse_value(input)?;
            let kind: StepKind = (*kind).into();
            let record = match kind {
                StepKind::Algorithmic => Record { algorithmic: true, computational: false },
                StepKind::Computational => Record { algorithmic: false, computational: true },
            };
            let r = a.run(&d, *max_steps, record)?;
            let trace = r.algorithmic_trace.or(r.computational_trace).unwrap_or_default();
            let done = trace.last().is_some_and(|s| s.is_output());
            emit(json, &trace, || trace.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("\n"));
            Ok(if done { 0 } else { 2 })
        }
        Command::Iso { left, right, bound } => {
            let (a, b) = (load(left)?, load(right)?);
            let v = check_isomorphism(&a, &b, *bound);
            emit(json, &v, || match (&v.witness(), &v.counterexample()) {
                (Some(w), _) => format!("isomorphic; vertices {:?}", w.vertices),
                (_, Some(c)) => format!("not isomorphic: {}", c.reason),
                _ => format!("unknown: {}", reason(&v)),
            });
            Ok(v.exit_code() as u8)
        }
        Command::Equiv { left, right, kind, bound, max_steps } => {
            let (a, b) = (load(left)?, load(right)?);
            let opts = SimOptions { bound: *max_steps, budget: *bound };
            let v = check_equivalence(&a, &b, (*kind).into(), opts)?;
            emit(json, &v, || match &v.counterexample() {
                Some(c) => format!("{}: not equivalent ({:?} direction)", v.name(), c.direction),
                None => v.name().to_string(),
            });
            Ok(v.exit_code() as u8)
        }
        Command::ToProcess { file } => {
            let a = load(file)?;
            let p = graph_to_process(a.graph());
            emit(json, &p, || {
                let mut out = String::new();
                write_alphabet(&mut out, a.alphabet());
                out.push('\n');
                write_process(&mut out, &p);
                out.trim_end().to_string()
            });
            Ok(0)
        }
        Command::ToGraph { file } => {
            let doc = read_document(file)?;
            let p = doc.process.as_ref().ok_or_else(|| Invalid("document has no PROCESS section".into()))?;
            let g = process_to_graph(p, &doc.alphabet)?;
            emit(json, g.graph(), || {
                let mut out = String::new();
                write_alphabet(&mut out, &doc.alphabet);
                out.push('\n');
                write_graph(&mut out, g.graph());
                if let Some(i) = &doc.interp {
                    out.push('\n');
                    write_interp(&mut out, i);
                }
                out.trim_end().to_string()
            });
            Ok(0)
        }
        Command::Prove { left, right, inputs, bound } => {
            let (a, b) = (load(left)?, load(right)?);
            let chosen = if inputs.input.is_some() || inputs.all { Some(selected(&a, inputs)?) } else { None };
            let r = prove_aeqv(&a, &b, chosen.as_deref(), *bound)?;
            emit(json, &r, || {
                let v = serde_json::to_value(&r.verdict).expect("serializable");
                let name = v["verdict"].as_str().unwrap_or("?").to_string();
                match v.get("input") {
                    Some(d) => format!("{name} (first at input {d})"),
                    None => name,
                }
            });
            Ok(r.verdict.exit_code() as u8)
        }
        Command::Selftest { seed, count } => {
            let r = selftest(*seed, *count, &SizeParams::default());
            emit(json, &r, || {
                let mut lines = vec![format!(
                    "{} instances, {} variants, {} failures",
                    r.instances,
                    r.variants_checked,
                    r.failures.len()
                )];
                lines.extend(r.failures.iter().map(|f| format!("seed {} {:?}: {}", f.seed, f.variant, f.message)));
                lines.join("\n")
            });
            Ok(if r.is_ok() { 0 } else { 1 })
        }
    }
}

fn reason<W, C>(v: &protoalg::equiv::Verdict<W, C>) -> String {
    match v {
        protoalg::equiv::Verdict::UnknownAtBound { reason, .. } => reason.clone(),
        _ => String::new(),
    }
}

fn validate(json: bool, file: &Path) -> Exit {
    let doc = read_document(file)?;
    let graph = doc.graph.as_ref().map(|g| validate_algorithm_graph(&doc.alphabet, g));
    let interp = match &doc.interp {
        Some(i) => Some(check_interpretation(&doc.alphabet, i, DEFAULT_EXTENT_CAP)?),
        None => None,
    };
    let ok = graph.as_ref().is_none_or(|r| r.is_ok()) && interp.as_ref().is_none_or(|r| r.is_ok());
    let report = json!({ "valid": ok, "graph": graph, "interpretation": interp });
    emit(json, &report, || {
        let mut lines = vec![if ok { "valid".to_string() } else { "invalid".to_string() }];
        if let Some(g) = &graph {
            lines.extend(g.violations.iter().map(|v| format!("  graph: {v}")));
        }
        if let Some(i) = &interp {
            lines.extend(i.violations.iter().map(|v| format!("  interpretation: {v}")));
        }
        lines.join("\n")
    });
    Ok(if ok { 0 } else { 1 })
}
