//! Dynamic (corrective) task insertion into idle windows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::assign::Occupancy;
use crate::domain::{Duration, Placement, Resource, Schedule, Task, TaskKind, TimeInterval, TimePoint, Window};
use crate::error::{Error, Result};

/// Which window receives a dynamic task.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsertionPolicy {
    /// Earliest window at least as long as the task.
    #[default]
    FirstFit,
    /// Window with the least leftover time; earliest on ties.
    BestFit,
    /// Always after the last placement.
    Append,
}

impl InsertionPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            InsertionPolicy::FirstFit => "first_fit",
            InsertionPolicy::BestFit => "best_fit",
            InsertionPolicy::Append => "append",
        }
    }
}

impl fmt::Display for InsertionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InsertionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "first_fit" | "firstfit" => Ok(InsertionPolicy::FirstFit),
            "best_fit" | "bestfit" => Ok(InsertionPolicy::BestFit),
            "append" => Ok(InsertionPolicy::Append),
            other => Err(Error::validation(
                "policy",
                format!("unknown policy {other:?} (expected first_fit, best_fit or append)"),
            )),
        }
    }
}

/// Window chosen for a task of length `d`, or `None` if nothing fits (and
/// always `None` under [`InsertionPolicy::Append`]).
pub fn find_window(s: &Schedule, d: Duration, policy: InsertionPolicy) -> Option<Window> {
    let mut fitting = s.windows().into_iter().filter(|w| w.length() >= d);
    match policy {
        InsertionPolicy::FirstFit => fitting.next(),
        // min_by_key keeps the first of equal keys
        InsertionPolicy::BestFit => fitting.min_by_key(|w| w.length().saturating_sub(d)),
        InsertionPolicy::Append => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InsertionRecord {
    pub placement: Placement,
    /// Host window as it was before the insertion.
    pub window: Option<Window>,
    pub appended: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub schedule: Schedule,
    pub record: InsertionRecord,
}

/// Places one dynamic task.
///
/// The task goes to the start of the window picked by `policy`, leaving
/// `t1 = 0` and `t2 = window length − duration`. When no window fits it
/// is appended right after the last placement. The resource is the
/// best-ranked one free for the placed interval, counting both its
/// calendar and the tasks it already holds in `s`.
pub fn insert_dynamic(s: &Schedule, task: &Task, policy: InsertionPolicy, resources: &[Resource]) -> Result<Insertion> {
    check_insertable(task)?;
    let window = find_window(s, task.duration, policy);
    let (start, t2) = match window {
        Some(w) => (w.start, w.length().saturating_sub(task.duration)),
        None => (s.last_end().unwrap_or(s.horizon().start), Duration::ZERO),
    };
    let interval = TimeInterval::starting_at(start, task.duration);
    let resource_id = Occupancy::from_schedule(resources, s).take(task, interval);

    let placement = Placement {
        resource_id,
        t1: Duration::ZERO,
        t2,
        appended: window.is_none(),
        ..Placement::of(task, start)
    };
    let schedule = s.with_placement(placement.clone())?;
    Ok(Insertion {
        schedule,
        record: InsertionRecord {
            appended: placement.appended,
            placement,
            window,
        },
    })
}

/// Places a dynamic task at a start time chosen by the dispatcher instead
/// of by a policy. `start` must leave the task inside one window, or at or
/// after the end of the last placement (recorded as appended).
pub fn insert_at(s: &Schedule, task: &Task, start: TimePoint, resources: &[Resource]) -> Result<Insertion> {
    check_insertable(task)?;
    let interval = TimeInterval::starting_at(start, task.duration);
    let host = s
        .gaps()
        .into_iter()
        .find(|g| g.start <= interval.start && interval.end <= g.end)
        .and_then(|g| g.as_window());
    let appended = host.is_none() && s.last_end().is_none_or(|end| start >= end);
    let (t1, t2) = match host {
        Some(w) => (start - w.start, w.end - interval.end),
        None if !appended => {
            return Err(Error::validation(
                format!("task {}.start", task.id),
                "start does not leave the task inside an idle window",
            ))
        }
        None => (Duration::ZERO, Duration::ZERO),
    };
    let resource_id = Occupancy::from_schedule(resources, s).take(task, interval);
    let placement = Placement {
        resource_id,
        t1,
        t2,
        appended,
        ..Placement::of(task, start)
    };
    let schedule = s.with_placement(placement.clone())?;
    Ok(Insertion {
        schedule,
        record: InsertionRecord {
            placement,
            window: host,
            appended,
        },
    })
}

fn check_insertable(task: &Task) -> Result<()> {
    if task.kind != TaskKind::Dynamic {
        return Err(Error::validation(
            format!("task {}.kind", task.id),
            "only dynamic tasks can be inserted",
        ));
    }
    if task.duration.is_zero() {
        return Err(Error::validation(format!("task {}.duration", task.id), "duration must be positive"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchOutcome {
    pub schedule: Schedule,
    pub records: Vec<InsertionRecord>,
}

impl BatchOutcome {
    /// Ids of tasks that could not fit in any window.
    pub fn appended(&self) -> impl Iterator<Item = &str> {
        self.records
            .iter()
            .filter(|r| r.appended)
            .map(|r| r.placement.task_id.as_str())
    }

    pub fn all_in_window(&self) -> bool {
        self.records.iter().all(|r| !r.appended)
    }
}

/// Inserts tasks one after another in the given order; each insertion sees
/// the windows left by the previous ones, residual sub-windows included.
pub fn insert_batch(
    s: &Schedule,
    tasks: &[Task],
    policy: InsertionPolicy,
    resources: &[Resource],
) -> Result<BatchOutcome> {
    let mut schedule = s.clone();
    let mut records = Vec::with_capacity(tasks.len());
    for task in tasks {
        let Insertion { schedule: next, record } = insert_dynamic(&schedule, task, policy, resources)?;
        schedule = next;
        records.push(record);
    }
    Ok(BatchOutcome { schedule, records })
}
