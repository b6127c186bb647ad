use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use maintsched_core::costing::Reduction;
use maintsched_core::scenario::{
    export_gantt, gantt_to_csv, gantt_to_json, load_fixture_named, parse_dynamic_tasks, parse_scenario, replay,
};
use maintsched_core::scheduler::InsertionRecord;
use maintsched_core::{CostReport, Epoch, Error, Format, InsertionPolicy, Money, Run, Scenario};
use maintsched_service::{ServiceConfig, ServiceError};

use crate::args::{ExportArgs, ExportFormat, InputArgs, InputFormat, OutputFormat, Overrides, ReplayArgs, RunArgs, ServeArgs};

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io { path: PathBuf, source: std::io::Error },
    Service(ServiceError),
    /// The replayed fixture disagrees with its expected totals.
    ReplayMismatch(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ReplayMismatch(_) => 1,
            _ => 2,
        }
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        let body = match self {
            CliError::Core(e) => {
                let mut v = json!({ "kind": e.kind(), "message": e.to_string() });
                match e {
                    Error::Validation { path, message } => {
                        v["path"] = json!(path);
                        v["message"] = json!(message);
                    }
                    Error::Parse { line, column, .. } => {
                        v["line"] = json!(line);
                        v["column"] = json!(column);
                    }
                    _ => {}
                }
                v
            }
            CliError::Io { path, source } => json!({
                "kind": "io",
                "message": source.to_string(),
                "path": path.display().to_string(),
            }),
            CliError::Service(e) => json!({ "kind": e.kind(), "message": e.to_string() }),
            CliError::ReplayMismatch(fixture) => json!({
                "kind": "replay_mismatch",
                "message": format!("{fixture} does not reproduce its expected totals"),
            }),
        };
        json!({ "error": body }).to_string()
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_text(path: &Path) -> CliResult<String> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn emit(output: Option<&Path>, mut text: String) -> CliResult<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn load(path: &Path, format: Option<InputFormat>) -> CliResult<Scenario> {
    let format = match format {
        Some(InputFormat::Csv) => Format::Csv,
        Some(InputFormat::Json) => Format::Json,
        None if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) => Format::Csv,
        None => Format::Json,
    };
    Ok(parse_scenario(&read_text(path)?, format)?)
}

fn load_with(input: &InputArgs, o: &Overrides) -> CliResult<Scenario> {
    let mut s = load(&input.scenario, input.input_format)?;
    apply(&mut s, o)?;
    Ok(s)
}

fn apply(s: &mut Scenario, o: &Overrides) -> CliResult<()> {
    if let Some(rate) = o.rate {
        s.cost_params.hourly_rate = Money::new(rate);
    }
    if let Some(policy) = o.policy {
        s.policy = policy;
    }
    if let Some(path) = &o.dynamics {
        s.dynamic_tasks = parse_dynamic_tasks(&read_text(path)?, &s.epoch)?;
    }
    s.validate()?;
    Ok(())
}

pub fn validate(args: InputArgs) -> CliResult<()> {
    let s = load(&args.scenario, args.input_format)?;
    let text = match args.format {
        OutputFormat::Text => format!(
            "valid: {} preventive, {} dynamic, {} resources",
            s.preventive_tasks.len(),
            s.dynamic_tasks.len(),
            s.resources.len()
        ),
        OutputFormat::Json => json!({
            "valid": true,
            "name": s.name,
            "preventive_tasks": s.preventive_tasks.len(),
            "dynamic_tasks": s.dynamic_tasks.len(),
            "resources": s.resources.len(),
        })
        .to_string(),
    };
    emit(args.output.as_deref(), text)
}

pub fn schedule(args: RunArgs) -> CliResult<()> {
    let s = load_with(&args.input, &args.overrides)?;
    let plan = s.baseline()?;
    let report = s.report(&plan.schedule);
    let text = match args.input.format {
        OutputFormat::Text => {
            let mut out = report.to_text();
            if !plan.assignment.unassigned.is_empty() {
                let _ = writeln!(out, "unassigned: {}", plan.assignment.unassigned.join(", "));
            }
            out
        }
        OutputFormat::Json => pretty(&report),
    };
    emit(args.input.output.as_deref(), text)
}

#[derive(Serialize)]
struct RecordOut {
    task_id: String,
    start: String,
    end: String,
    window_index: Option<usize>,
    t1_minutes: i64,
    t2_minutes: i64,
    resource: Option<String>,
    appended: bool,
}

impl RecordOut {
    fn new(epoch: &Epoch, r: &InsertionRecord) -> Self {
        RecordOut {
            task_id: r.placement.task_id.clone(),
            start: epoch.iso(r.placement.start),
            end: epoch.iso(r.placement.end),
            window_index: r.window.map(|w| w.index),
            t1_minutes: r.placement.t1.minutes(),
            t2_minutes: r.placement.t2.minutes(),
            resource: r.placement.resource_id.clone(),
            appended: r.appended,
        }
    }
}

#[derive(Serialize)]
struct InsertOut<'a> {
    policy: InsertionPolicy,
    records: Vec<RecordOut>,
    baseline_window_cost: Money,
    reduction: Reduction,
    reduction_label: String,
    report: &'a CostReport,
}

fn reduction_line(run: &Run) -> String {
    let r = Reduction::between(&run.baseline_report, &run.report);
    format!(
        "reduction vs baseline {}: gain {} ({})",
        run.baseline_report.total_window_cost,
        r.gain,
        r.percent_label()
    )
}

pub fn insert(args: RunArgs) -> CliResult<()> {
    let s = load_with(&args.input, &args.overrides)?;
    let run = s.run()?;
    let records: Vec<_> = run.batch.records.iter().map(|r| RecordOut::new(&s.epoch, r)).collect();
    let text = match args.input.format {
        OutputFormat::Text => {
            let mut out = String::new();
            let appended = records.iter().filter(|r| r.appended).count();
            let _ = writeln!(out, "policy {}: {} dynamic task(s), {appended} appended", s.policy, records.len());
            for r in &records {
                let window = r.window_index.map_or("appended".to_string(), |i| format!("window {i}"));
                let _ = writeln!(
                    out,
                    "{:<8} {:<10} {} -> {}  t1 {}m  t2 {}m  {}",
                    r.task_id,
                    window,
                    r.start,
                    r.end,
                    r.t1_minutes,
                    r.t2_minutes,
                    r.resource.as_deref().unwrap_or("-")
                );
            }
            out.push('\n');
            out.push_str(&run.report.to_text());
            out.push_str(&reduction_line(&run));
            out
        }
        OutputFormat::Json => {
            let reduction = Reduction::between(&run.baseline_report, &run.report);
            pretty(&InsertOut {
                policy: s.policy,
                records,
                baseline_window_cost: run.baseline_report.total_window_cost,
                reduction_label: reduction.percent_label(),
                reduction,
                report: &run.report,
            })
        }
    };
    emit(args.input.output.as_deref(), text)
}

pub fn report(args: RunArgs) -> CliResult<()> {
    let s = load_with(&args.input, &args.overrides)?;
    let run = s.run()?;
    let text = match args.input.format {
        OutputFormat::Text => format!("{}{}", run.report.to_text(), reduction_line(&run)),
        OutputFormat::Json => pretty(&run.report),
    };
    emit(args.input.output.as_deref(), text)
}

pub fn replay_fixture(args: ReplayArgs) -> CliResult<()> {
    let fixture = load_fixture_named(&args.fixture)?;
    let outcome = replay(&fixture)?;
    let text = match args.format {
        OutputFormat::Text => outcome.to_text(),
        OutputFormat::Json => pretty(&outcome),
    };
    emit(args.output.as_deref(), text)?;
    if outcome.pass {
        Ok(())
    } else {
        Err(CliError::ReplayMismatch(fixture.name.to_string()))
    }
}

pub fn export(args: ExportArgs) -> CliResult<()> {
    let mut s = load(&args.scenario, args.input_format)?;
    apply(&mut s, &args.overrides)?;
    let run = s.run()?;
    let rows = export_gantt(run.schedule(), &run.report);
    let text = match args.format {
        ExportFormat::Csv => gantt_to_csv(&rows),
        ExportFormat::Json => gantt_to_json(&rows),
    };
    emit(args.output.as_deref(), text)
}

pub fn serve(args: ServeArgs) -> CliResult<()> {
    let mut config = ServiceConfig::from_env().map_err(CliError::Service)?;
    if let Some(listen) = args.listen {
        config.listen = listen;
    }
    if let Some(path) = args.event_log {
        config.event_log = Some(path);
    }
    if let Some(policy) = args.policy {
        config.default_policy = policy;
    }
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io {
        path: PathBuf::new(),
        source,
    })?;
    runtime
        .block_on(maintsched_service::serve(config))
        .map_err(|source| CliError::Io {
            path: PathBuf::new(),
            source,
        })
}
