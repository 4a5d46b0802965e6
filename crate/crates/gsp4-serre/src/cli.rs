//! Batch front end: job files in, sorted-key JSON or plain text reports out.
//!
//! A job file is TOML or JSON:
//!
//! ```toml
//! prime = 7
//! type = "borel"
//! tasks = ["classify", "classical"]
//!
//! [params]
//! x = 4
//! y = 2
//! delta = 0
//!
//! [flags]
//! tau0 = "peu"
//! ```
//!
//! Exit codes: 0 success, 1 validation error, 2 parse error, 3 window exhausted.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::charlattice::{Prime, Unramified};
use crate::lifts::lift_gsp4;
use crate::localrep::{
    associated_weight, classify, enumerate_inputs, fl_obstruction_check, fl_reduction_pattern,
    inertia_pattern, is_generic, ExtensionFlag, FlagSlot, LocalRepresentation, RepError, RepParams,
    RepType, Twists,
};
use crate::serre::{classical_weight_in, enumerate_pdcris_weights, SerreError, Window};
use crate::weights::shifted_alcove;

pub const REPORT_SCHEMA: &str = "gsp4-serre/report/1";
pub const ENUMERATION_SCHEMA: &str = "gsp4-serre/enumeration/1";

/// Largest prime the enumerate mode runs without `--force`.
pub const ENUMERATE_COST_LIMIT: i64 = 11;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("window exhausted: {0}")]
    WindowExhausted(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Parse(_) => 2,
            CliError::WindowExhausted(_) => 3,
        }
    }
}

impl From<RepError> for CliError {
    fn from(e: RepError) -> Self {
        CliError::Validation(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    Classify,
    Weight,
    Generic,
    Lift,
    Classical,
    Pdcris,
    FlCheck,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Classify,
        Task::Weight,
        Task::Generic,
        Task::Lift,
        Task::Classical,
        Task::Pdcris,
        Task::FlCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Classify => "classify",
            Task::Weight => "weight",
            Task::Generic => "generic",
            Task::Lift => "lift",
            Task::Classical => "classical",
            Task::Pdcris => "pdcris",
            Task::FlCheck => "fl-check",
        }
    }

    pub fn parse(s: &str) -> Result<Task, CliError> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s.trim())
            .ok_or_else(|| CliError::Validation(format!("unknown task {s:?}")))
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub representation: LocalRepresentation,
    pub tasks: Vec<Task>,
    pub window: Window,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TaskOutcome {
    Ok { summary: String, result: Value },
    Error { kind: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub representation: LocalRepresentation,
    pub tasks: BTreeMap<String, TaskOutcome>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        let mut code = 0;
        for t in self.tasks.values() {
            if let TaskOutcome::Error { kind, .. } = t {
                code = code.max(if kind == "window_exhausted" { 3 } else { 1 });
            }
        }
        code
    }

    pub fn to_json(&self) -> String {
        canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let r = &self.representation;
        let mut out = format!(
            "p = {}, {} {}\n",
            r.prime(),
            r.rep_type(),
            params_text(r.params())
        );
        for (name, t) in &self.tasks {
            match t {
                TaskOutcome::Ok { summary, .. } => out.push_str(&format!("{name}: {summary}\n")),
                TaskOutcome::Error { kind, message } => {
                    out.push_str(&format!("{name}: {kind}: {message}\n"))
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub total: usize,
    pub generic: usize,
    pub non_generic: usize,
    pub no_weight: usize,
    pub obstructed: usize,
    pub not_obstructed: usize,
    pub out_of_domain: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub schema: String,
    pub prime: Prime,
    #[serde(rename = "type")]
    pub rep_type: RepType,
    pub summary: EnumerationSummary,
    pub reports: Vec<Report>,
}

impl EnumerationReport {
    pub fn exit_code(&self) -> i32 {
        self.reports
            .iter()
            .map(|r| r.exit_code())
            .filter(|&c| c == 3)
            .max()
            .unwrap_or(0)
    }
}

/// Serializes through `serde_json::Value`, whose maps keep keys sorted.
pub fn canonical_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("reports serialize");
    serde_json::to_string_pretty(&value).expect("values serialize")
}

fn params_text(p: &RepParams) -> String {
    match *p {
        RepParams::Borel { x, y, delta } | RepParams::Siegel { x, y, delta } => {
            format!("x={x} y={y} delta={delta}")
        }
        RepParams::Klingen { x, y, w } => format!("x={x} y={y} w={w}"),
        RepParams::Endoscopic { a, b, c, d, e } => format!("a={a} b={b} c={c} d={d} e={e}"),
        RepParams::Irreducible { exponent } => format!("exponent={exponent}"),
    }
}

fn ok(summary: impl Into<String>, result: Value) -> TaskOutcome {
    TaskOutcome::Ok {
        summary: summary.into(),
        result,
    }
}

fn err(kind: &str, message: impl fmt::Display) -> TaskOutcome {
    TaskOutcome::Error {
        kind: kind.into(),
        message: message.to_string(),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn run_task(r: &LocalRepresentation, task: Task, window: &Window) -> TaskOutcome {
    let p = r.prime();
    match task {
        Task::Classify => match classify(r) {
            Ok(t) => ok(
                t.name(),
                json!({ "type": t, "blocks": r.blocks(), "inertia": inertia_pattern(r) }),
            ),
            Err(e) => err("malformed", e),
        },
        Task::Weight => match associated_weight(r) {
            Some(l) => {
                let alcove = shifted_alcove(p, &l);
                ok(
                    format!("{l} [{alcove:?}]"),
                    json!({ "lambda": l, "shifted_alcove": alcove }),
                )
            }
            None => ok("none", json!({ "lambda": null })),
        },
        Task::Generic => match associated_weight(r) {
            Some(l) => match is_generic(r, &l) {
                Ok(g) => ok(g.to_string(), json!({ "generic": g, "lambda": l })),
                Err(e) => err("precondition", e),
            },
            None => err("precondition", RepError::NoAssociatedWeight),
        },
        Task::Lift => match lift_gsp4(r) {
            Ok(plan) => {
                let ht: Vec<String> = plan.ht.iter().map(|h| h.to_string()).collect();
                ok(
                    format!("HT {{{}}} {:?}", ht.join(","), plan.certificate),
                    to_value(&plan),
                )
            }
            Err(e) => err("no_plan", e),
        },
        Task::Classical => match classical_weight_in(r, window) {
            Ok((cw, entry)) => ok(
                cw.to_string(),
                json!({ "k1": cw.k1, "k2": cw.k2, "w": cw.w, "witness": entry, "window": window }),
            ),
            Err(e @ SerreError::WindowTooSmall(_)) => err("window_exhausted", e),
            Err(e) => err("validation", e),
        },
        Task::Pdcris => match enumerate_pdcris_weights(r, window) {
            Ok(rep) => {
                let labels: Vec<String> = rep.weights.iter().map(|w| w.label.to_string()).collect();
                ok(format!("{{{}}}", labels.join(", ")), to_value(&rep))
            }
            Err(e) => err("validation", e),
        },
        Task::FlCheck => match fl_obstruction_check(r) {
            Ok(b) => {
                let l = associated_weight(r).expect("checked");
                let pats = fl_reduction_pattern(r.rep_type(), &l, p).expect("checked");
                ok(
                    b.to_string(),
                    json!({ "obstructed": b, "inertia": inertia_pattern(r), "fl_patterns": pats }),
                )
            }
            Err(e) => err("precondition", e),
        },
    }
}

/// Runs every task of a job. Task failures are recorded in the report.
pub fn run(job: &JobSpec) -> Report {
    let tasks = job
        .tasks
        .iter()
        .map(|&t| {
            (
                t.name().to_string(),
                run_task(&job.representation, t, &job.window),
            )
        })
        .collect();
    Report {
        schema: REPORT_SCHEMA.into(),
        representation: job.representation.clone(),
        tasks,
    }
}

/// Applies overrides like `a=1..20,c=0..5,w=3` to a window.
pub fn parse_window(base: Window, overrides: &str) -> Result<Window, CliError> {
    let mut w = base;
    for part in overrides.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, range) = part
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("window entry {part:?} needs key=range")))?;
        let num = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Parse(format!("window bound {s:?} is not an integer")))
        };
        let (lo, hi) = match range.split_once("..") {
            Some((lo, hi)) => (num(lo)?, num(hi)?),
            None => {
                let v = num(range)?;
                (v, v)
            }
        };
        match key.trim() {
            "a" => w.a = (lo, hi),
            "b" => w.b = (lo, hi),
            "c" => w.c = (lo, hi),
            "w" => w.w = (lo, hi),
            k => return Err(CliError::Parse(format!("unknown window key {k:?}"))),
        }
    }
    Ok(w)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsFile {
    x: Option<i64>,
    y: Option<i64>,
    delta: Option<i64>,
    w: Option<i64>,
    a: Option<i64>,
    b: Option<i64>,
    c: Option<i64>,
    d: Option<i64>,
    e: Option<i64>,
    exponent: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    prime: Option<i64>,
    #[serde(rename = "type")]
    rep_type: String,
    #[serde(default)]
    params: ParamsFile,
    #[serde(default)]
    flags: BTreeMap<String, String>,
    #[serde(default)]
    twists: BTreeMap<String, String>,
    tasks: Option<Vec<String>>,
    window: Option<String>,
}

fn parse_flag(s: &str) -> Result<Option<ExtensionFlag>, CliError> {
    Ok(Some(match s {
        "peu" => ExtensionFlag::PeuRamifiee,
        "tres" => ExtensionFlag::TresRamifiee,
        "ramified" => ExtensionFlag::Ramified,
        "unramified" => ExtensionFlag::Unramified,
        "split" => return Ok(None),
        _ => {
            return Err(CliError::Validation(format!(
                "unknown extension flag {s:?}"
            )))
        }
    }))
}

fn build_params(t: RepType, f: &ParamsFile) -> Result<RepParams, CliError> {
    let fields = [
        ("x", f.x),
        ("y", f.y),
        ("delta", f.delta),
        ("w", f.w),
        ("a", f.a),
        ("b", f.b),
        ("c", f.c),
        ("d", f.d),
        ("e", f.e),
        ("exponent", f.exponent),
    ];
    let wanted: &[&str] = match t {
        RepType::BorelOrdinary | RepType::SiegelOrdinary => &["x", "y", "delta"],
        RepType::KlingenOrdinary => &["x", "y", "w"],
        RepType::Endoscopic => &["a", "b", "c", "d", "e"],
        RepType::Irreducible => &["exponent"],
    };
    for (name, v) in fields {
        if v.is_some() && !wanted.contains(&name) {
            return Err(CliError::Validation(format!(
                "param {name} is not used by {t} representations"
            )));
        }
    }
    let get = |name: &str| {
        fields
            .iter()
            .find(|(n, _)| *n == name)
            .and_then(|(_, v)| *v)
            .ok_or_else(|| CliError::Validation(format!("{t} representations need param {name}")))
    };
    Ok(match t {
        RepType::BorelOrdinary => RepParams::Borel {
            x: get("x")?,
            y: get("y")?,
            delta: get("delta")?,
        },
        RepType::SiegelOrdinary => RepParams::Siegel {
            x: get("x")?,
            y: get("y")?,
            delta: get("delta")?,
        },
        RepType::KlingenOrdinary => RepParams::Klingen {
            x: get("x")?,
            y: get("y")?,
            w: get("w")?,
        },
        RepType::Endoscopic => RepParams::Endoscopic {
            a: get("a")?,
            b: get("b")?,
            c: get("c")?,
            d: get("d")?,
            e: f.e.unwrap_or(0),
        },
        RepType::Irreducible => RepParams::Irreducible {
            exponent: get("exponent")?,
        },
    })
}

fn parse_document(text: &str, json_hint: bool) -> Result<JobFile, CliError> {
    if json_hint || text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    } else {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }
}

/// Parses and validates a job document. `prime` and `window` from the command
/// line take precedence over the document.
pub fn parse_job(
    text: &str,
    json_hint: bool,
    prime: Option<i64>,
    tasks: &[String],
    window: Option<&str>,
) -> Result<JobSpec, CliError> {
    let file = parse_document(text, json_hint)?;
    let p = match (prime, file.prime) {
        (Some(a), Some(b)) if a != b => {
            return Err(CliError::Validation(format!(
                "--prime {a} disagrees with prime {b} in the input"
            )))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(CliError::Validation("no prime given".into())),
    };
    let p = Prime::new(p).map_err(|e| CliError::Validation(e.to_string()))?;
    let t = RepType::parse(&file.rep_type).ok_or_else(|| {
        CliError::Validation(format!("unknown representation type {:?}", file.rep_type))
    })?;
    let params = build_params(t, &file.params)?;
    let mut twists = Twists::default();
    for (k, v) in &file.twists {
        let u = Unramified::parse(v).map_err(|e| CliError::Validation(e.to_string()))?;
        match k.as_str() {
            "psi0" => twists.psi0 = u,
            "psi1" => twists.psi1 = u,
            "psi2" => twists.psi2 = u,
            _ => return Err(CliError::Validation(format!("unknown twist {k:?}"))),
        }
    }
    let mut flags = BTreeMap::new();
    for (k, v) in &file.flags {
        let slot = FlagSlot::parse(k)
            .ok_or_else(|| CliError::Validation(format!("unknown extension slot {k:?}")))?;
        if let Some(f) = parse_flag(v)? {
            flags.insert(slot, f);
        }
    }
    let representation = LocalRepresentation::new(p, params, twists, flags)?;
    let names: Vec<String> = if !tasks.is_empty() {
        tasks.to_vec()
    } else {
        file.tasks.clone().unwrap_or_default()
    };
    if names.is_empty() {
        return Err(CliError::Validation("no tasks requested".into()));
    }
    let mut task_list = names
        .iter()
        .map(|s| Task::parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    task_list.sort();
    task_list.dedup();
    let mut w = Window::default_for(p);
    if let Some(s) = &file.window {
        w = parse_window(w, s)?;
    }
    if let Some(s) = window {
        w = parse_window(w, s)?;
    }
    Ok(JobSpec {
        representation,
        tasks: task_list,
        window: w,
    })
}

/// One report per enumerated input, merged in input order.
pub fn enumerate_mode(p: Prime, t: RepType, tasks: &[Task], window: &Window) -> EnumerationReport {
    let inputs = enumerate_inputs(p, t);
    let reports: Vec<Report> = inputs
        .par_iter()
        .map(|r| {
            run(&JobSpec {
                representation: r.clone(),
                tasks: tasks.to_vec(),
                window: *window,
            })
        })
        .collect();
    let mut s = EnumerationSummary {
        total: reports.len(),
        generic: 0,
        non_generic: 0,
        no_weight: 0,
        obstructed: 0,
        not_obstructed: 0,
        out_of_domain: 0,
    };
    for r in &reports {
        let lambda = associated_weight(&r.representation);
        match lambda {
            None => s.no_weight += 1,
            Some(l) => match is_generic(&r.representation, &l) {
                Ok(true) => s.generic += 1,
                _ => s.non_generic += 1,
            },
        }
        if lambda.is_some() {
            match fl_obstruction_check(&r.representation) {
                Ok(true) => s.obstructed += 1,
                Ok(false) => s.not_obstructed += 1,
                Err(_) => s.out_of_domain += 1,
            }
        }
    }
    EnumerationReport {
        schema: ENUMERATION_SCHEMA.into(),
        prime: p,
        rep_type: t,
        summary: s,
        reports,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

/// Mod-p weight calculus for GSp4 local Galois representations.
#[derive(Debug, Parser)]
#[command(name = "gsp4-serre", version)]
pub struct Args {
    /// Odd prime p. Must agree with the input file when both give one.
    #[arg(long)]
    pub prime: Option<i64>,
    /// Job file (TOML, or JSON with a .json extension or a leading brace).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Comma-separated tasks: classify, weight, generic, lift, classical, pdcris, fl-check.
    #[arg(long, value_delimiter = ',')]
    pub task: Vec<String>,
    /// Search window overrides, e.g. a=1..20,b=1..20,c=0..5,w=0..9.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Enumerate every input of a type: borel, siegel, klingen, endoscopic, irreducible.
    #[arg(long)]
    pub enumerate: Option<String>,
    /// Worker threads for enumerate mode.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Run enumerate mode past the cost limit.
    #[arg(long)]
    pub force: bool,
}

fn read_input(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

/// Executes the command line and returns (stdout text, exit code).
pub fn execute(args: &Args) -> Result<(String, i32), CliError> {
    if let Some(name) = &args.enumerate {
        let t = RepType::parse(name)
            .ok_or_else(|| CliError::Validation(format!("unknown representation type {name:?}")))?;
        let p = args
            .prime
            .ok_or_else(|| CliError::Validation("enumerate mode needs --prime".into()))?;
        let p = Prime::new(p).map_err(|e| CliError::Validation(e.to_string()))?;
        if p.get() > ENUMERATE_COST_LIMIT && !args.force {
            return Err(CliError::Validation(format!(
                "enumerating p = {p} exceeds the cost limit p <= {ENUMERATE_COST_LIMIT}; pass --force to proceed"
            )));
        }
        let tasks = if args.task.is_empty() {
            vec![Task::Classify, Task::Weight, Task::Generic, Task::FlCheck]
        } else {
            args.task
                .iter()
                .map(|s| Task::parse(s))
                .collect::<Result<Vec<_>, _>>()?
        };
        let mut window = Window::default_for(p);
        if let Some(s) = &args.window {
            window = parse_window(window, s)?;
        }
        let build = |n: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Validation(e.to_string()))
        };
        let rep = match args.jobs {
            Some(n) => build(n)?.install(|| enumerate_mode(p, t, &tasks, &window)),
            None => enumerate_mode(p, t, &tasks, &window),
        };
        let text = match args.format {
            Format::Json => canonical_json(&rep),
            Format::Text => {
                let mut out = String::new();
                for r in &rep.reports {
                    out.push_str(&r.to_text());
                }
                out.push_str(&format!(
                    "summary: {}\n",
                    serde_json::to_string(&rep.summary).unwrap()
                ));
                out
            }
        };
        return Ok((text, rep.exit_code()));
    }
    let path = args
        .input
        .as_ref()
        .ok_or_else(|| CliError::Validation("either --input or --enumerate is required".into()))?;
    let text = read_input(path)?;
    let json_hint = path.extension().is_some_and(|e| e == "json");
    let job = parse_job(
        &text,
        json_hint,
        args.prime,
        &args.task,
        args.window.as_deref(),
    )?;
    let report = run(&job);
    let out = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    Ok((out, report.exit_code()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BOREL: &str = r#"
prime = 7
type = "borel"
tasks = ["classify", "classical"]

[params]
x = 4
y = 2
delta = 0

[flags]
tau0 = "peu"
"#;

    #[test]
    fn window_overrides() {
        let base = Window::default_for(Prime::new(5).unwrap());
        let w = parse_window(base, "a=2..9, w=4").unwrap();
        assert_eq!(w.a, (2, 9));
        assert_eq!(w.w, (4, 4));
        assert_eq!(w.b, base.b);
        assert!(matches!(parse_window(base, "z=1"), Err(CliError::Parse(_))));
        assert!(matches!(
            parse_window(base, "a=x..2"),
            Err(CliError::Parse(_))
        ));
    }

    #[test]
    fn borel_job() {
        let job = parse_job(BOREL, false, None, &[], None).unwrap();
        let rep = run(&job);
        assert_eq!(rep.exit_code(), 0);
        match &rep.tasks["classical"] {
            TaskOutcome::Ok { summary, .. } => assert_eq!(summary, "(5, 4, 0)"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_job() {
        let text = r#"{"prime": 7, "type": "klingen", "params": {"x": 6, "y": 5, "w": 2},
                       "tasks": ["weight", "generic", "fl-check"]}"#;
        let job = parse_job(text, true, None, &[], None).unwrap();
        let rep = run(&job);
        match &rep.tasks["weight"] {
            TaskOutcome::Ok { result, .. } => {
                assert_eq!(result["lambda"], json!({"a": 4, "b": 0, "c": 2}))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn error_kinds() {
        let even = BOREL.replace("prime = 7", "prime = 8");
        assert_eq!(
            parse_job(&even, false, None, &[], None)
                .unwrap_err()
                .exit_code(),
            1
        );
        let junk = BOREL.replace("[flags]", "bogus = 1\n[flags]");
        assert_eq!(
            parse_job(&junk, false, None, &[], None)
                .unwrap_err()
                .exit_code(),
            2
        );
        let tres = BOREL.replace("\"peu\"", "\"tres\"");
        let e = parse_job(&tres, false, None, &[], None).unwrap_err();
        assert!(
            e.to_string().contains("tres flag requires ratio eps"),
            "{e}"
        );
        let narrow = parse_job(BOREL, false, None, &[], Some("a=1..2")).unwrap();
        assert_eq!(run(&narrow).exit_code(), 3);
    }
}
