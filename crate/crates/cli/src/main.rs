use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use eap::acp::{traces, TraceSet};
use eap::action_algebra::{
    free_interleave, free_parallel, free_seq, mixed_seq_actions, mpar_cross, mpar_pairs, mpar_seq, mpar_seq_cross,
    strong_seq_actions, Pairing,
};
use eap::dsl::{parse_document, parse_expr, serialize_document, serialize_expr};
use eap::laws::{LawReport, Suite};
use eap::model::{
    classify_action_in, classify_process_in, realizations, Action, Document, Element, Object, Process, Status, System,
};
use eap::process_algebra::{mixed_seq_p, observable_trace, strong_seq_p, ProcessPairing};
use eap::{Error, Rational};
use serde_json::Value;

mod dot;

#[derive(Parser)]
#[command(
    name = "eap",
    version,
    about = "Parse, compose, measure and check event/action/process systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a document (.eap.json) or an expression file (.acp).
    Parse { path: PathBuf },
    /// Compose two actions or two processes and print the result as a document.
    Compose {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long, value_enum, default_value = "action")]
        level: Level,
        /// First operand, as file#name.
        a: String,
        /// Second operand, as file#name.
        b: String,
        /// Gap between the operands of a free sequential composition.
        #[arg(long, value_parser = parse_rational)]
        gap: Option<Rational>,
        /// JSON file pairing the ids of the first operand with ids of the second.
        #[arg(long)]
        pairing: Option<PathBuf>,
    },
    /// Print the parallelism measures of one object or a pair.
    Measure { a: String, b: Option<String> },
    /// Print the trace set of an expression or a process, one trace per line.
    Traces { source: String },
    /// Run a law suite and print its report.
    CheckLaws {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
    /// Print an action or process as a DOT digraph.
    Dot { r#ref: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Free,
    Meet,
    Seq,
    Interleave,
    Parallel,
    Strong,
    Mixed,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Action,
    Process,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Acp,
    Lattice,
    Measures,
    All,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(Error),
    /// A report was printed and some check failed.
    Laws,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type Out = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_capacity() { 3 } else { 1 })
        }
        Err(Failure::Laws) => ExitCode::from(1),
    }
}

fn run(cmd: Command) -> Out {
    match cmd {
        Command::Parse { path } => cmd_parse(&path),
        Command::Compose {
            op,
            level,
            a,
            b,
            gap,
            pairing,
        } => cmd_compose(op, level, &a, &b, gap, pairing.as_deref()),
        Command::Measure { a, b } => cmd_measure(&a, b.as_deref()),
        Command::Traces { source } => cmd_traces(&source),
        Command::CheckLaws { suite, seed, cases } => cmd_check_laws(suite, seed, cases),
        Command::Dot { r#ref } => {
            let (_, obj) = resolve(&r#ref)?;
            Ok(dot::render(&obj))
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = read(path)?;
    parse_document(&text).map_err(|e| Failure::Domain(locate(path, e)))
}

/// Prefixes schema paths with the file they came from.
fn locate(path: &Path, e: Error) -> Error {
    match e {
        Error::Schema { path: p, message } => Error::Schema {
            path: format!("{}: {p}", path.display()),
            message,
        },
        other => other,
    }
}

fn split_ref(r: &str) -> Result<(&str, &str), Failure> {
    match r.rsplit_once('#') {
        Some((file, name)) if !file.is_empty() && !name.is_empty() => Ok((file, name)),
        _ => Err(Failure::Usage(format!("reference {r:?} must have the form file#name"))),
    }
}

fn resolve(r: &str) -> Result<(Document, Object), Failure> {
    let (file, name) = split_ref(r)?;
    let doc = load(Path::new(file))?;
    let obj = doc.lookup(name)?;
    Ok((doc, obj))
}

fn cmd_parse(path: &Path) -> Out {
    let text = read(path)?;
    let mut out = String::new();
    if path.extension().is_some_and(|e| e == "acp") {
        let x = parse_expr(text.trim())?;
        writeln!(out, "expression ok").unwrap();
        writeln!(out, "{}", serialize_expr(&x)).unwrap();
        return Ok(out);
    }
    let doc = parse_document(&text).map_err(|e| locate(path, e))?;
    writeln!(out, "document ok").unwrap();
    writeln!(
        out,
        "space graph: {} nodes, {} edges",
        doc.space_graph.nodes.len(),
        doc.space_graph.edges.len()
    )
    .unwrap();
    for (name, a) in &doc.actions {
        let labels: Vec<&str> = classify_action_in(a, &doc.semantics)
            .into_iter()
            .map(|l| l.as_str())
            .collect();
        writeln!(
            out,
            "action {name}: {}",
            summary(a, format!("{} events", a.len()), &labels)
        )
        .unwrap();
    }
    for (name, p) in &doc.processes {
        let labels: Vec<&str> = classify_process_in(p, &doc.semantics)
            .into_iter()
            .map(|l| l.as_str())
            .collect();
        writeln!(
            out,
            "process {name}: {}",
            summary(
                p,
                format!("{} actions, {} events", p.len(), p.all_events().len()),
                &labels
            )
        )
        .unwrap();
    }
    Ok(out)
}

fn summary<T: Element>(s: &System<T>, size: String, labels: &[&str]) -> String {
    let labels = if labels.is_empty() {
        "none".to_string()
    } else {
        labels.join(", ")
    };
    format!("{size}, {}, labels: {labels}", s.status().as_str())
}

fn cmd_compose(op: Op, level: Level, a: &str, b: &str, gap: Option<Rational>, pairing: Option<&Path>) -> Out {
    let (da, oa) = resolve(a)?;
    let (db, ob) = resolve(b)?;
    let pairing = match pairing {
        Some(p) => Some(serde_json::from_str::<Value>(&read(p)?).map_err(|e| {
            Failure::Domain(Error::Schema {
                path: p.display().to_string(),
                message: e.to_string(),
            })
        })?),
        None => None,
    };
    if gap.is_some() && !matches!(op, Op::Seq) {
        return Err(Failure::Usage("--gap only applies to --op seq".into()));
    }
    if pairing.is_some() && !matches!(op, Op::Strong | Op::Mixed) {
        return Err(Failure::Usage(
            "--pairing only applies to --op strong and --op mixed".into(),
        ));
    }
    if matches!(op, Op::Strong) && pairing.is_none() {
        return Err(Failure::Usage("--op strong needs --pairing".into()));
    }
    let gap = gap.unwrap_or(Rational::ONE);
    let mut doc = merge_context(&da, &db)?;
    match level {
        Level::Action => {
            let (x, y) = (as_action(oa, a)?, as_action(ob, b)?);
            let pairing = pairing.as_ref().map(action_pairing).transpose()?.unwrap_or_default();
            let r = match op {
                Op::Strong => strong_seq_actions(&x, &y, &pairing)?,
                Op::Mixed => mixed_seq_actions(&x, &y, &pairing)?,
                _ => temporal(op, &x, &y, gap)?,
            };
            doc.actions.insert("result".into(), r);
        }
        Level::Process => {
            let (x, y) = (as_process(oa, a)?, as_process(ob, b)?);
            let pairing = pairing.as_ref().map(process_pairing).transpose()?.unwrap_or_default();
            let r = match op {
                Op::Strong => strong_seq_p(&x, &y, &pairing)?,
                Op::Mixed => mixed_seq_p(&x, &y, &pairing)?,
                _ => temporal(op, &x, &y, gap)?,
            };
            doc.processes.insert("result".into(), r);
        }
    }
    doc.validate()?;
    Ok(serialize_document(&doc))
}

fn temporal<T: Element>(op: Op, x: &System<T>, y: &System<T>, gap: Rational) -> Result<System<T>, Error> {
    match op {
        Op::Free => Ok(x.union(y)),
        Op::Meet => Ok(x.meet(y)),
        Op::Seq => free_seq(x, y, gap),
        Op::Interleave => free_interleave(x, y),
        Op::Parallel => free_parallel(x, y),
        Op::Strong | Op::Mixed => unreachable!("linked compositions are handled by the caller"),
    }
}

/// An empty document carrying both operands' space graphs and semantics.
fn merge_context(a: &Document, b: &Document) -> Result<Document, Failure> {
    let mut doc = Document {
        space_graph: a.space_graph.clone(),
        semantics: a.semantics.clone(),
        ..Document::default()
    };
    doc.space_graph.nodes.extend(b.space_graph.nodes.iter().cloned());
    doc.space_graph.edges.extend(b.space_graph.edges.iter().cloned());
    for (name, value) in &b.semantics.entries {
        match doc.semantics.entries.get(name) {
            Some(v) if v != value => {
                return Err(Failure::Domain(Error::Precondition(format!(
                    "operands give {name:?} different values ({v:?} and {value:?})"
                ))))
            }
            _ => {
                doc.semantics.entries.insert(name.clone(), value.clone());
            }
        }
    }
    Ok(doc)
}

fn as_action(o: Object, r: &str) -> Result<Action, Failure> {
    match o {
        Object::Action(a) => Ok(a),
        Object::Process(_) => Err(Failure::Usage(format!("{r} is a process; use --level process"))),
    }
}

fn as_process(o: Object, r: &str) -> Result<Process, Failure> {
    match o {
        Object::Process(p) => Ok(p),
        Object::Action(_) => Err(Failure::Usage(format!("{r} is an action; use --level action"))),
    }
}

fn pairing_error(path: &str, message: impl Into<String>) -> Failure {
    Failure::Domain(Error::Schema {
        path: format!("pairing{path}"),
        message: message.into(),
    })
}

/// `{"pairs": [["e0", "f0"], ...]}`, or a bare array of pairs.
fn action_pairing(v: &Value) -> Result<Pairing, Failure> {
    Ok(Pairing::new(id_pairs(v, "")?)?)
}

fn id_pairs(v: &Value, path: &str) -> Result<Vec<(String, String)>, Failure> {
    let list = match v {
        Value::Object(m) => m.get("pairs").unwrap_or(&Value::Null),
        other => other,
    };
    let list = list
        .as_array()
        .ok_or_else(|| pairing_error(path, "expected an array of [left, right] pairs"))?;
    list.iter()
        .enumerate()
        .map(|(i, p)| match p.as_array().map(Vec::as_slice) {
            Some([Value::String(x), Value::String(y)]) => Ok((x.clone(), y.clone())),
            _ => Err(pairing_error(
                &format!("{path}.pairs[{i}]"),
                "expected [left, right] strings",
            )),
        })
        .collect()
}

/// `{"pairs": [{"left": "a0", "right": "b0", "events": [["e0", "f0"]]}, ...]}`.
fn process_pairing(v: &Value) -> Result<ProcessPairing, Failure> {
    let list = v
        .get("pairs")
        .and_then(Value::as_array)
        .ok_or_else(|| pairing_error("", "expected an object with a \"pairs\" array"))?;
    let mut pairs = Vec::new();
    for (i, p) in list.iter().enumerate() {
        let at = format!(".pairs[{i}]");
        let field = |k: &str| {
            p.get(k)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| pairing_error(&at, format!("missing string field {k:?}")))
        };
        let (left, right) = (field("left")?, field("right")?);
        let events = match p.get("events") {
            Some(e) => Pairing::new(id_pairs(e, &at)?)?,
            None => Pairing::empty(),
        };
        pairs.push((left, right, events));
    }
    Ok(ProcessPairing::new(pairs)?)
}

fn cmd_measure(a: &str, b: Option<&str>) -> Out {
    let (_, oa) = resolve(a)?;
    let ob = b.map(resolve).transpose()?.map(|(_, o)| o);
    match (oa, ob) {
        (Object::Action(x), None) => measure_one(&x),
        (Object::Process(x), None) => measure_one(&x),
        (Object::Action(x), Some(Object::Action(y))) => measure_pair(&x, &y),
        (Object::Process(x), Some(Object::Process(y))) => measure_pair(&x, &y),
        _ => Err(Failure::Usage(
            "measured pairs must both be actions or both be processes".into(),
        )),
    }
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    writeln!(out, "{key:<12} {value}").unwrap();
}

/// The `k` up to which the object is `k`-parallel, or "undefined" when the
/// ratio has an empty denominator.
fn threshold(n: u64, d: usize) -> Result<String, Failure> {
    if d == 0 {
        return Ok("undefined".into());
    }
    let overflow = |_| Error::Overflow;
    let k = Rational::new(i64::try_from(n).map_err(overflow)?, i64::try_from(d).map_err(overflow)?)?;
    Ok(format!("k <= {k}"))
}

fn measure_one<T: Element>(a: &System<T>) -> Out {
    let n = a.all_events().len();
    let mut out = String::new();
    let (hi, lo) = (mpar_pairs(a)?, mpar_seq(a)?);
    row(&mut out, "|A|", n);
    row(&mut out, "m^par", hi);
    row(&mut out, "m_par", lo);
    row(&mut out, "k-parallel", threshold(lo, n)?);
    Ok(out)
}

fn measure_pair<T: Element>(a: &System<T>, b: &System<T>) -> Out {
    let (na, nb) = (a.all_events().len(), b.all_events().len());
    let mut out = String::new();
    let (hi, lo) = (mpar_cross(a, b)?, mpar_seq_cross(a, b)?);
    row(&mut out, "|A|", na);
    row(&mut out, "|B|", nb);
    row(&mut out, "m^par(A,B)", hi);
    row(&mut out, "m_par(A,B)", lo);
    row(&mut out, "k-parallel", threshold(lo, na.min(nb))?);
    Ok(out)
}

fn cmd_traces(source: &str) -> Out {
    let set = match source.rsplit_once('#') {
        Some((file, _)) if Path::new(file).is_file() => match resolve(source)?.1 {
            Object::Process(p) => process_traces(&p)?,
            Object::Action(_) => return Err(Failure::Usage(format!("{source} is an action, not a process"))),
        },
        _ => {
            let path = Path::new(source);
            let text = if path.extension().is_some_and(|e| e == "acp") && path.is_file() {
                read(path)?
            } else {
                source.to_string()
            };
            traces(&parse_expr(text.trim())?)?
        }
    };
    Ok(render_traces(&set))
}

/// Observable traces of every realization of `p`.
fn process_traces(p: &Process) -> Result<TraceSet, Error> {
    if *p.status() == Status::Actualized {
        return Ok(TraceSet::from([observable_trace(p)?]));
    }
    realizations(p)?.iter().map(observable_trace).collect()
}

/// Single-character names are written together, longer ones space-separated.
fn render_traces(set: &TraceSet) -> String {
    let compact = set.iter().flatten().all(|n| n.chars().count() == 1);
    let lines: BTreeSet<String> = set.iter().map(|t| t.join(if compact { "" } else { " " })).collect();
    lines.into_iter().map(|l| l + "\n").collect()
}

fn cmd_check_laws(suite: SuiteArg, seed: u64, cases: usize) -> Out {
    let suites: &[Suite] = match suite {
        SuiteArg::Acp => &[Suite::Acp],
        SuiteArg::Lattice => &[Suite::Lattice],
        SuiteArg::Measures => &[Suite::Measures],
        SuiteArg::All => &Suite::ALL,
    };
    let reports: Vec<LawReport> = suites.iter().map(|s| s.run(seed, cases)).collect::<Result<_, _>>()?;
    let out: String = reports.iter().map(|r| r.to_string()).collect();
    if reports.iter().all(LawReport::all_passed) {
        Ok(out)
    } else {
        print!("{out}");
        eprintln!("error: some laws failed");
        Err(Failure::Laws)
    }
}
