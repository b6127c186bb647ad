use serde::{Deserialize, Serialize};

use super::time::{Duration, TimeInterval, TimePoint};
use super::value::Money;
use crate::error::{Error, Result};

/// Index into a resource's competence row.
pub type TaskType = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    /// Planned in advance; fixes the baseline schedule.
    Preventive,
    /// Corrective work that arrives while the plan is running.
    Dynamic,
}

impl TaskKind {
    pub fn label(self) -> &'static str {
        match self {
            TaskKind::Preventive => "preventive",
            TaskKind::Dynamic => "dynamic",
        }
    }
}

/// A maintenance job.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub id: String,
    pub title: String,
    pub kind: TaskKind,
    pub release: TimePoint,
    pub due: TimePoint,
    pub duration: Duration,
    /// Cost per hour of finishing before the due window opens.
    pub earliness_penalty: Money,
    /// Cost per hour of finishing after the due window closes.
    pub tardiness_penalty: Money,
    /// Minimal cost of doing the job at all.
    pub base_cost: Money,
    pub required_type: TaskType,
    /// Optional `[earliest, latest]` completion window. Defaults to `[due, due]`.
    pub due_window: Option<TimeInterval>,
    /// Resource fixed by the dispatcher, bypassing competence ranking.
    pub pinned_resource: Option<String>,
}

impl Task {
    /// Task whose duration spans exactly `[release, due)` with no penalties.
    pub fn new(id: impl Into<String>, kind: TaskKind, release: TimePoint, due: TimePoint) -> Self {
        let id = id.into();
        Task {
            title: id.clone(),
            id,
            kind,
            release,
            due,
            duration: due.checked_since(release).unwrap_or(Duration::ZERO),
            earliness_penalty: Money::ZERO,
            tardiness_penalty: Money::ZERO,
            base_cost: Money::ZERO,
            required_type: 0,
            due_window: None,
            pinned_resource: None,
        }
    }

    pub fn preventive(id: impl Into<String>, release: TimePoint, due: TimePoint) -> Self {
        Task::new(id, TaskKind::Preventive, release, due)
    }

    pub fn dynamic(id: impl Into<String>, release: TimePoint, due: TimePoint) -> Self {
        Task::new(id, TaskKind::Dynamic, release, due)
    }

    pub fn with_duration(mut self, duration: Duration) -> Self {
        self.duration = duration;
        self
    }

    pub fn with_title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn with_required_type(mut self, k: TaskType) -> Self {
        self.required_type = k;
        self
    }

    pub fn pinned_to(mut self, resource: impl Into<String>) -> Self {
        self.pinned_resource = Some(resource.into());
        self
    }

    /// Interval the task occupies when run from its release date.
    pub fn planned_interval(&self) -> TimeInterval {
        TimeInterval::starting_at(self.release, self.duration)
    }

    pub fn effective_due_window(&self) -> TimeInterval {
        self.due_window.unwrap_or(TimeInterval {
            start: self.due,
            end: self.due,
        })
    }

    /// Checks the invariants that hold for every task. `path` prefixes
    /// field names in the error.
    pub fn validate(&self, path: &str) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::validation(format!("{path}.id"), "task id must not be empty"));
        }
        if self.release.minutes() < 0 {
            return Err(Error::validation(
                format!("{path}.release"),
                "release precedes the scenario epoch",
            ));
        }
        if self.release >= self.due {
            return Err(Error::validation(
                format!("{path}.due"),
                format!(
                    "release must be before due (release {} min, due {} min)",
                    self.release.minutes(),
                    self.due.minutes()
                ),
            ));
        }
        if self.duration.is_zero() {
            return Err(Error::validation(format!("{path}.duration"), "duration must be positive"));
        }
        if self.earliness_penalty.units() < 0 {
            return Err(Error::validation(
                format!("{path}.earliness_penalty"),
                "penalty must be non-negative",
            ));
        }
        if self.tardiness_penalty.units() < 0 {
            return Err(Error::validation(
                format!("{path}.tardiness_penalty"),
                "penalty must be non-negative",
            ));
        }
        if let Some(w) = self.due_window {
            if w.start > w.end {
                return Err(Error::validation(format!("{path}.due_window"), "earliest due after latest due"));
            }
        }
        Ok(())
    }
}
