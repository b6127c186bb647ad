//! One dispatcher session: a scenario, its baseline plan and the live
//! schedule built by committed insertions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use maintsched_core::costing::{global_cost_with, DeviationPenalties, Reduction};
use maintsched_core::domain::parse_iso;
use maintsched_core::scenario::TaskDoc;
use maintsched_core::scheduler::{insert_at, insert_dynamic, Insertion, Plan};
use maintsched_core::{CostReport, Error, InsertionPolicy, Money, Scenario, Schedule, Task, TaskKind};

use crate::error::{ServiceError, ServiceResult};

/// A dynamic task submitted by the dispatcher.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Submission {
    pub task: TaskDoc,
    /// Overrides the session policy for this task only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<InsertionPolicy>,
    /// Forced start time (ISO-8601). Bypasses the policy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<String>,
}

/// An accepted state change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)] // short-lived, mostly the Commit variant
pub enum Mutation {
    Commit(Submission),
    Undo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HistoryEntry {
    /// Revision reached by this mutation.
    pub revision: u64,
    pub mutation: Mutation,
    pub snapshot: Schedule,
}

/// What an insertion would do (preview) or did (commit).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub task: Task,
    pub insertion: Insertion,
    pub report: CostReport,
    pub lost_before: Money,
}

impl Outcome {
    pub fn gain(&self) -> Money {
        self.lost_before - self.report.total_window_cost
    }
}

/// A validated mutation ready to be logged and applied.
#[derive(Debug, Clone)]
pub struct Pending {
    pub mutation: Mutation,
    schedule: Schedule,
    task: Option<Task>,
    outcome: Option<Outcome>,
}

impl Pending {
    pub fn outcome(&self) -> Option<&Outcome> {
        self.outcome.as_ref()
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    scenario: Scenario,
    policy: InsertionPolicy,
    baseline: Plan,
    baseline_report: CostReport,
    current: Schedule,
    undo_stack: Vec<Schedule>,
    history: Vec<HistoryEntry>,
    penalties: BTreeMap<String, DeviationPenalties>,
    revision: u64,
}

impl Session {
    /// Plans the scenario's preventive tasks. Its dynamic tasks are not
    /// inserted; they arrive through [`Session::prepare`].
    pub fn create(id: impl Into<String>, scenario: Scenario, policy: InsertionPolicy) -> Result<Session, Error> {
        scenario.validate()?;
        let baseline = scenario.baseline()?;
        let penalties = scenario.penalties();
        let baseline_report = global_cost_with(&baseline.schedule, &scenario.cost_params, &penalties);
        Ok(Session {
            id: id.into(),
            current: baseline.schedule.clone(),
            scenario,
            policy,
            baseline,
            baseline_report,
            undo_stack: Vec::new(),
            history: Vec::new(),
            penalties,
            revision: 0,
        })
    }

    /// Rebuilds a session by re-applying `mutations` in order.
    pub fn replay(
        id: impl Into<String>,
        scenario: Scenario,
        policy: InsertionPolicy,
        mutations: &[Mutation],
    ) -> ServiceResult<Session> {
        let mut s = Session::create(id, scenario, policy)?;
        for m in mutations {
            let p = s.prepare(m.clone(), None)?;
            s.accept(p);
        }
        Ok(s)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn policy(&self) -> InsertionPolicy {
        self.policy
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn baseline(&self) -> &Plan {
        &self.baseline
    }

    pub fn baseline_report(&self) -> &CostReport {
        &self.baseline_report
    }

    pub fn current(&self) -> &Schedule {
        &self.current
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn can_undo(&self) -> bool {
        !self.undo_stack.is_empty()
    }

    pub fn report(&self) -> CostReport {
        global_cost_with(&self.current, &self.scenario.cost_params, &self.penalties)
    }

    pub fn reduction(&self) -> Reduction {
        Reduction::between(&self.baseline_report, &self.report())
    }

    /// Evaluates a submission against the current schedule without
    /// changing anything.
    pub fn preview(&self, sub: &Submission) -> ServiceResult<Outcome> {
        let task = self.dynamic_task(&sub.task)?;
        let insertion = match &sub.start {
            Some(text) => {
                let at = parse_iso(text)
                    .and_then(|t| self.scenario.epoch.point_of(t))
                    .ok_or_else(|| Error::validation("start", format!("malformed timestamp {text:?}")))?;
                insert_at(&self.current, &task, at, &self.scenario.resources)?
            }
            None => insert_dynamic(
                &self.current,
                &task,
                sub.policy.unwrap_or(self.policy),
                &self.scenario.resources,
            )?,
        };
        let mut penalties = self.penalties.clone();
        penalties.insert(task.id.clone(), DeviationPenalties::from_task(&task));
        let report = global_cost_with(&insertion.schedule, &self.scenario.cost_params, &penalties);
        Ok(Outcome {
            lost_before: self.report().total_window_cost,
            task,
            insertion,
            report,
        })
    }

    /// Validates a mutation against the current revision.
    pub fn prepare(&self, mutation: Mutation, expected_revision: Option<u64>) -> ServiceResult<Pending> {
        if let Some(expected) = expected_revision {
            if expected != self.revision {
                return Err(ServiceError::Conflict {
                    message: format!("session is at revision {}, not {expected}", self.revision),
                    current_revision: self.revision,
                });
            }
        }
        match &mutation {
            Mutation::Commit(sub) => {
                let outcome = self.preview(sub)?;
                Ok(Pending {
                    schedule: outcome.insertion.schedule.clone(),
                    task: Some(outcome.task.clone()),
                    outcome: Some(outcome),
                    mutation,
                })
            }
            Mutation::Undo => {
                let previous = self.undo_stack.last().ok_or_else(|| ServiceError::Conflict {
                    message: "nothing to undo".to_string(),
                    current_revision: self.revision,
                })?;
                Ok(Pending {
                    schedule: previous.clone(),
                    task: None,
                    outcome: None,
                    mutation,
                })
            }
        }
    }

    /// Applies a mutation returned by [`Session::prepare`] on this same
    /// revision.
    pub fn accept(&mut self, p: Pending) {
        match &p.mutation {
            Mutation::Commit(_) => {
                let before = std::mem::replace(&mut self.current, p.schedule);
                self.undo_stack.push(before);
                if let Some(task) = &p.task {
                    self.penalties.insert(task.id.clone(), DeviationPenalties::from_task(task));
                }
            }
            Mutation::Undo => {
                self.undo_stack.pop();
                self.current = p.schedule;
            }
        }
        self.revision += 1;
        self.history.push(HistoryEntry {
            revision: self.revision,
            mutation: p.mutation,
            snapshot: self.current.clone(),
        });
    }

    fn dynamic_task(&self, doc: &TaskDoc) -> Result<Task, Error> {
        let task = doc.clone().into_task(&self.scenario.epoch, TaskKind::Dynamic, "task")?;
        task.validate("task")?;
        if self.current.placement(&task.id).is_some() {
            return Err(Error::validation("task.id", format!("task {} is already scheduled", task.id)));
        }
        Ok(task)
    }
}
