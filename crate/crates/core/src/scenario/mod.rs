//! Scenario model, file formats, bundled fixtures and exports.

mod csv;
pub mod fixtures;
mod gantt;
mod json;
mod replay;

use std::collections::{BTreeMap, BTreeSet};

pub use self::csv::parse_csv;
pub use fixtures::{bundled_file, load_fixture, load_fixture_named, Fixture, FixtureName, PrintedPlacement, PrintedTotals, PublishedPlacement};
pub use gantt::{export_gantt, gantt_to_csv, gantt_to_json, GanttRow, GanttRowType};
pub use json::{parse_dynamic_tasks, parse_json, to_json, TaskDoc};
pub use replay::{replay, ReplayOutcome, RowCheck};

use serde::{Deserialize, Serialize};

use crate::costing::{self, CostReport, DeviationPenalties};
use crate::domain::{CostParams, Epoch, Resource, Schedule, Task, TaskKind, TimeInterval};
use crate::error::{Error, Result};
use crate::scheduler::{self, insert_batch, BatchOutcome, InsertionPolicy, Plan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything needed to plan and evaluate one machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub name: Option<String>,
    pub epoch: Epoch,
    pub horizon: TimeInterval,
    pub preventive_tasks: Vec<Task>,
    /// In arrival order.
    pub dynamic_tasks: Vec<Task>,
    pub resources: Vec<Resource>,
    pub cost_params: CostParams,
    pub policy: InsertionPolicy,
}

/// Result of running a scenario end to end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub plan: Plan,
    pub baseline_report: CostReport,
    pub batch: BatchOutcome,
    pub report: CostReport,
}

impl Run {
    pub fn schedule(&self) -> &Schedule {
        &self.batch.schedule
    }
}

pub fn parse_scenario(text: &str, format: Format) -> Result<Scenario> {
    match format {
        Format::Json => parse_json(text),
        Format::Csv => parse_csv(text),
    }
}

impl Scenario {
    pub fn empty(epoch: Epoch) -> Self {
        Scenario {
            name: None,
            epoch,
            horizon: TimeInterval::new(Default::default(), Default::default()).expect("empty interval"),
            preventive_tasks: Vec::new(),
            dynamic_tasks: Vec::new(),
            resources: Vec::new(),
            cost_params: CostParams::default(),
            policy: InsertionPolicy::default(),
        }
    }

    pub fn all_tasks(&self) -> impl Iterator<Item = &Task> {
        self.preventive_tasks.iter().chain(&self.dynamic_tasks)
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.all_tasks().find(|t| t.id == id)
    }

    /// Checks every scenario invariant; the error names the offending field.
    pub fn validate(&self) -> Result<()> {
        self.cost_params.validate()?;
        if self.horizon.start.minutes() < 0 {
            return Err(Error::validation("horizon.start", "horizon starts before the epoch"));
        }

        let mut resource_ids = BTreeSet::new();
        for (i, r) in self.resources.iter().enumerate() {
            let path = format!("resources[{i}]");
            r.validate(&path)?;
            if !resource_ids.insert(r.id.as_str()) {
                return Err(Error::validation(format!("{path}.id"), format!("duplicate resource id {:?}", r.id)));
            }
        }

        let mut task_ids = BTreeSet::new();
        let lists = [
            ("preventive_tasks", &self.preventive_tasks, TaskKind::Preventive),
            ("dynamic_tasks", &self.dynamic_tasks, TaskKind::Dynamic),
        ];
        for (list, tasks, kind) in lists {
            for (i, t) in tasks.iter().enumerate() {
                let path = format!("{list}[{i}]");
                t.validate(&path)?;
                if t.kind != kind {
                    return Err(Error::validation(format!("{path}.kind"), format!("expected a {} task", kind.label())));
                }
                if !task_ids.insert(t.id.as_str()) {
                    return Err(Error::validation(format!("{path}.id"), format!("duplicate task id {:?}", t.id)));
                }
                if let Some(pin) = &t.pinned_resource {
                    if !resource_ids.contains(pin.as_str()) {
                        return Err(Error::validation(
                            format!("{path}.resource"),
                            format!("unknown resource reference {pin:?}"),
                        ));
                    }
                }
                if kind == TaskKind::Preventive && !self.horizon.contains_interval(&t.planned_interval()) {
                    return Err(Error::validation(
                        format!("{path}.due"),
                        format!("task {} runs outside the horizon", t.id),
                    ));
                }
            }
        }

        let mut planned: Vec<(usize, &Task)> = self.preventive_tasks.iter().enumerate().collect();
        planned.sort_by_key(|(_, t)| t.release);
        for pair in planned.windows(2) {
            let ((_, a), (j, b)) = (pair[0], pair[1]);
            if a.planned_interval().overlaps(&b.planned_interval()) {
                return Err(Error::validation(
                    format!("preventive_tasks[{j}].release"),
                    format!("{} overlaps {} on the single machine", b.id, a.id),
                ));
            }
        }
        Ok(())
    }

    /// Baseline plan of the preventive tasks.
    pub fn baseline(&self) -> Result<Plan> {
        scheduler::plan_preventive(self.epoch, self.horizon, &self.preventive_tasks, &self.resources)
    }

    pub fn penalties(&self) -> BTreeMap<String, DeviationPenalties> {
        self.all_tasks()
            .map(|t| (t.id.clone(), DeviationPenalties::from_task(t)))
            .collect()
    }

    pub fn report(&self, s: &Schedule) -> CostReport {
        costing::global_cost_with(s, &self.cost_params, &self.penalties())
    }

    /// Baseline plus insertion of the scenario's dynamic tasks under its policy.
    pub fn run(&self) -> Result<Run> {
        self.run_with(&self.dynamic_tasks, self.policy)
    }

    /// Baseline plus insertion of `dynamics`, in order, under `policy`.
    pub fn run_with(&self, dynamics: &[Task], policy: InsertionPolicy) -> Result<Run> {
        let plan = self.baseline()?;
        let baseline_report = self.report(&plan.schedule);
        let batch = insert_batch(&plan.schedule, dynamics, policy, &self.resources)?;
        let report = self.report(&batch.schedule);
        Ok(Run {
            plan,
            baseline_report,
            batch,
            report,
        })
    }
}
