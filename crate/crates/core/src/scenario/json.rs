//! Canonical JSON scenario format. Timestamps are ISO-8601 UTC on whole
//! minutes; money is integer units; competence values are decimal strings.

use serde::{Deserialize, Serialize};

use super::Scenario;
use crate::domain::{format_iso, parse_iso, CostParams, Competence, Duration, Epoch, Money, Resource, Task, TaskKind, TimeInterval, TimePoint};
use crate::error::{Error, Result};
use crate::scheduler::InsertionPolicy;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    epoch: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    horizon: Option<IntervalDoc>,
    #[serde(default)]
    cost_params: Option<CostParams>,
    #[serde(default)]
    policy: Option<InsertionPolicy>,
    #[serde(default)]
    resources: Vec<ResourceDoc>,
    #[serde(default)]
    preventive_tasks: Vec<TaskDoc>,
    #[serde(default)]
    dynamic_tasks: Vec<TaskDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntervalDoc {
    start: String,
    end: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ResourceDoc {
    id: String,
    note: Competence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    competence_row: Option<Vec<Competence>>,
    #[serde(default)]
    busy: Vec<IntervalDoc>,
}

/// One task as written in a scenario or dynamics file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDoc {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    pub release: String,
    pub due: String,
    /// Defaults to `due - release`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_minutes: Option<i64>,
    #[serde(default)]
    pub earliness_penalty: i64,
    #[serde(default)]
    pub tardiness_penalty: i64,
    #[serde(default)]
    pub base_cost: i64,
    #[serde(default)]
    pub required_type: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub due_window: Option<DueWindowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resource: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DueWindowDoc {
    pub earliest: String,
    pub latest: String,
}

fn point(epoch: &Epoch, text: &str, path: &str) -> Result<TimePoint> {
    let at = parse_iso(text).ok_or_else(|| {
        Error::validation(path, format!("malformed timestamp {text:?} (expected ISO-8601, e.g. 2009-01-02T08:00:00Z)"))
    })?;
    let t = epoch
        .point_of(at)
        .ok_or_else(|| Error::validation(path, format!("timestamp {text:?} is not on a whole minute")))?;
    if t.minutes() < 0 {
        return Err(Error::validation(path, format!("timestamp {text:?} precedes the epoch")));
    }
    Ok(t)
}

fn interval(epoch: &Epoch, doc: &IntervalDoc, path: &str) -> Result<TimeInterval> {
    let start = point(epoch, &doc.start, &format!("{path}.start"))?;
    let end = point(epoch, &doc.end, &format!("{path}.end"))?;
    TimeInterval::new(start, end).ok_or_else(|| Error::validation(format!("{path}.end"), "interval ends before it starts"))
}

impl TaskDoc {
    /// Converts to a task on `epoch`'s grid; `path` prefixes error fields.
    /// Only timestamps are checked here, see [`Task::validate`].
    pub fn into_task(self, epoch: &Epoch, kind: TaskKind, path: &str) -> Result<Task> {
        let release = point(epoch, &self.release, &format!("{path}.release"))?;
        let due = point(epoch, &self.due, &format!("{path}.due"))?;
        let duration = match self.duration_minutes {
            Some(m) => Duration::try_from_minutes(m)
                .ok_or_else(|| Error::validation(format!("{path}.duration_minutes"), "duration must be non-negative"))?,
            None => due.checked_since(release).unwrap_or(Duration::ZERO),
        };
        let due_window = match &self.due_window {
            Some(w) => {
                let earliest = point(epoch, &w.earliest, &format!("{path}.due_window.earliest"))?;
                let latest = point(epoch, &w.latest, &format!("{path}.due_window.latest"))?;
                Some(TimeInterval::new(earliest, latest).ok_or_else(|| {
                    Error::validation(format!("{path}.due_window"), "earliest due after latest due")
                })?)
            }
            None => None,
        };
        Ok(Task {
            title: self.title.unwrap_or_else(|| self.id.clone()),
            id: self.id,
            kind,
            release,
            due,
            duration,
            earliness_penalty: Money::new(self.earliness_penalty),
            tardiness_penalty: Money::new(self.tardiness_penalty),
            base_cost: Money::new(self.base_cost),
            required_type: self.required_type,
            due_window,
            pinned_resource: self.resource,
        })
    }

    pub fn from_task(t: &Task, epoch: &Epoch) -> Self {
        TaskDoc {
            id: t.id.clone(),
            title: Some(t.title.clone()),
            release: epoch.iso(t.release),
            due: epoch.iso(t.due),
            duration_minutes: Some(t.duration.minutes()),
            earliness_penalty: t.earliness_penalty.units(),
            tardiness_penalty: t.tardiness_penalty.units(),
            base_cost: t.base_cost.units(),
            required_type: t.required_type,
            due_window: t.due_window.map(|w| DueWindowDoc {
                earliest: epoch.iso(w.start),
                latest: epoch.iso(w.end),
            }),
            resource: t.pinned_resource.clone(),
        }
    }
}

/// Parses and fully validates a JSON scenario.
pub fn parse_json(text: &str) -> Result<Scenario> {
    let doc: ScenarioDoc = serde_json::from_str(text)?;
    let epoch_at = parse_iso(&doc.epoch)
        .ok_or_else(|| Error::validation("epoch", format!("malformed timestamp {:?}", doc.epoch)))?;
    let epoch = Epoch::new(epoch_at);

    let resources = doc
        .resources
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let path = format!("resources[{i}]");
            let busy = r
                .busy
                .iter()
                .enumerate()
                .map(|(j, b)| interval(&epoch, b, &format!("{path}.busy[{j}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Resource {
                competence_row: r.competence_row.unwrap_or_else(|| vec![r.note.clone()]),
                id: r.id,
                note: r.note,
                busy,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let tasks = |docs: Vec<TaskDoc>, list: &str, kind: TaskKind| {
        docs.into_iter()
            .enumerate()
            .map(|(i, d)| d.into_task(&epoch, kind, &format!("{list}[{i}]")))
            .collect::<Result<Vec<_>>>()
    };
    let preventive_tasks = tasks(doc.preventive_tasks, "preventive_tasks", TaskKind::Preventive)?;
    let dynamic_tasks = tasks(doc.dynamic_tasks, "dynamic_tasks", TaskKind::Dynamic)?;

    let horizon = match &doc.horizon {
        Some(h) => interval(&epoch, h, "horizon")?,
        None => preventive_tasks
            .iter()
            .map(Task::planned_interval)
            .reduce(|a, b| a.hull(&b))
            .unwrap_or(TimeInterval {
                start: TimePoint::ZERO,
                end: TimePoint::ZERO,
            }),
    };

    let scenario = Scenario {
        name: doc.name,
        epoch,
        horizon,
        preventive_tasks,
        dynamic_tasks,
        resources,
        cost_params: doc.cost_params.unwrap_or_default(),
        policy: doc.policy.unwrap_or_default(),
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Canonical, byte-deterministic JSON (pretty-printed, fixed key order).
pub fn to_json(s: &Scenario) -> String {
    let epoch = &s.epoch;
    let doc = ScenarioDoc {
        name: s.name.clone(),
        epoch: format_iso(epoch.datetime()),
        horizon: Some(IntervalDoc {
            start: epoch.iso(s.horizon.start),
            end: epoch.iso(s.horizon.end),
        }),
        cost_params: Some(s.cost_params.clone()),
        policy: Some(s.policy),
        resources: s
            .resources
            .iter()
            .map(|r| ResourceDoc {
                id: r.id.clone(),
                note: r.note.clone(),
                competence_row: Some(r.competence_row.clone()),
                busy: r
                    .busy
                    .iter()
                    .map(|b| IntervalDoc {
                        start: epoch.iso(b.start),
                        end: epoch.iso(b.end),
                    })
                    .collect(),
            })
            .collect(),
        preventive_tasks: s.preventive_tasks.iter().map(|t| TaskDoc::from_task(t, epoch)).collect(),
        dynamic_tasks: s.dynamic_tasks.iter().map(|t| TaskDoc::from_task(t, epoch)).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("scenario serializes");
    out.push('\n');
    out
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DynamicsDoc {
    List(Vec<TaskDoc>),
    Wrapped { dynamic_tasks: Vec<TaskDoc> },
}

/// Reads a dynamics file: a JSON array of tasks, or an object with a
/// `dynamic_tasks` array. Times are placed on `epoch`'s grid.
pub fn parse_dynamic_tasks(text: &str, epoch: &Epoch) -> Result<Vec<Task>> {
    // parse as a value first so syntax errors keep their line/column
    let value: serde_json::Value = serde_json::from_str(text)?;
    let docs = match serde_json::from_value::<DynamicsDoc>(value)
        .map_err(|e| Error::validation("dynamic_tasks", e.to_string()))?
    {
        DynamicsDoc::List(v) | DynamicsDoc::Wrapped { dynamic_tasks: v } => v,
    };
    let tasks = docs
        .into_iter()
        .enumerate()
        .map(|(i, d)| d.into_task(epoch, TaskKind::Dynamic, &format!("dynamic_tasks[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    for (i, t) in tasks.iter().enumerate() {
        t.validate(&format!("dynamic_tasks[{i}]"))?;
    }
    Ok(tasks)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "epoch": "2009-01-02T08:00:00Z",
        "resources": [{"id": "R1", "note": 12.5}],
        "preventive_tasks": [
            {"id": "T1", "release": "2009-01-02T08:00:00Z", "due": "2009-01-02T10:00:00Z"},
            {"id": "T2", "release": "2009-01-02T12:00:00Z", "due": "2009-01-02T16:00:00Z", "resource": "R1"}
        ]
    }"#;

    #[test]
    fn minimal_scenario_defaults() {
        let s = parse_json(MINIMAL).unwrap();
        assert_eq!(s.preventive_tasks.len(), 2);
        assert_eq!(s.preventive_tasks[1].duration, Duration::from_hours(4));
        assert_eq!(s.horizon.end, TimePoint::from_hours(8));
        assert_eq!(s.cost_params.hourly_rate, Money::new(100));
        assert_eq!(s.resources[0].competence_row, vec![s.resources[0].note.clone()]);
        assert_eq!(s.policy, InsertionPolicy::FirstFit);
    }

    #[test]
    fn round_trip() {
        let s = parse_json(MINIMAL).unwrap();
        let text = to_json(&s);
        assert_eq!(parse_json(&text).unwrap(), s);
        assert_eq!(to_json(&parse_json(&text).unwrap()), text);
    }

    #[test]
    fn release_equal_due_rejected_with_field() {
        let text = MINIMAL.replace("2009-01-02T10:00:00Z", "2009-01-02T08:00:00Z");
        let err = parse_json(&text).unwrap_err();
        assert_eq!(err.to_string().split(':').next().unwrap(), "preventive_tasks[0].due");
    }

    #[test]
    fn malformed_timestamp() {
        let text = MINIMAL.replace("2009-01-02T12:00:00Z", "2009-13-02 12h");
        let err = parse_json(&text).unwrap_err();
        assert!(err.to_string().starts_with("preventive_tasks[1].release"), "{err}");
    }

    #[test]
    fn unknown_resource() {
        let text = MINIMAL.replace("\"resource\": \"R1\"", "\"resource\": \"R9\"");
        let err = parse_json(&text).unwrap_err();
        assert!(err.to_string().contains("unknown resource reference"), "{err}");
    }

    #[test]
    fn duplicate_id_across_lists() {
        let text = MINIMAL.replace(
            "\"preventive_tasks\"",
            "\"dynamic_tasks\": [{\"id\": \"T1\", \"release\": \"2009-01-03T08:00:00Z\", \"due\": \"2009-01-03T09:00:00Z\"}],\n\"preventive_tasks\"",
        );
        let err = parse_json(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate task id"), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_json("{\n  \"epoch\": ,\n}").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_field_rejected() {
        let text = MINIMAL.replace("\"epoch\"", "\"colour\": 1, \"epoch\"");
        assert_eq!(parse_json(&text).unwrap_err().kind(), "parse");
    }

    #[test]
    fn empty_task_list_is_valid() {
        let s = parse_json(r#"{"epoch": "2009-01-02T08:00:00Z"}"#).unwrap();
        assert!(s.preventive_tasks.is_empty());
        assert!(s.horizon.is_empty());
    }

    #[test]
    fn dynamics_file_forms() {
        let epoch = Epoch::new(parse_iso("2009-01-02T08:00:00Z").unwrap());
        let list = r#"[{"id": "TD1", "release": "2009-01-02T10:00:00Z", "due": "2009-01-02T11:00:00Z"}]"#;
        let wrapped = format!("{{\"dynamic_tasks\": {list}}}");
        let a = parse_dynamic_tasks(list, &epoch).unwrap();
        let b = parse_dynamic_tasks(&wrapped, &epoch).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[0].kind, TaskKind::Dynamic);
        assert_eq!(a[0].release, TimePoint::from_hours(2));
    }
}
