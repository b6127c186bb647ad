//! Task ordering, resource assignment, window discovery and dynamic
//! insertion on a single machine.
//!
//! Every operation is a pure function: mutations return a fresh
//! [`Schedule`].

mod assign;
mod insert;
mod order;
mod rm;

pub use assign::{assign_resources, rank_resources, Assignment, RankedResource};
pub use insert::{find_window, insert_at, insert_batch, insert_dynamic, BatchOutcome, Insertion, InsertionPolicy, InsertionRecord};
pub use order::sort_tasks;
pub use rm::{check_schedulability, rm_bound, PeriodicTask, SchedulabilityReport};

use crate::domain::{Epoch, Gap, Placement, Resource, Schedule, Task, TaskKind, TimeInterval, Window};
use crate::error::{Error, Result};

/// Windows between consecutive placements; zero-length gaps are skipped.
pub fn compute_windows(s: &Schedule) -> Vec<Window> {
    s.windows()
}

/// One row per consecutive placement pair, zero-length gaps included.
pub fn compute_gaps(s: &Schedule) -> Vec<Gap> {
    s.gaps()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub schedule: Schedule,
    pub assignment: Assignment,
}

/// Builds the baseline schedule: preventive tasks run over their planned
/// interval, then receive resources.
pub fn plan_preventive(epoch: Epoch, horizon: TimeInterval, tasks: &[Task], resources: &[Resource]) -> Result<Plan> {
    let ordered = sort_tasks(tasks)?;
    if let Some(t) = ordered.iter().find(|t| t.kind != TaskKind::Preventive) {
        return Err(Error::validation(
            format!("task {}.kind", t.id),
            "baseline plans take preventive tasks only",
        ));
    }
    let assignment = assign_resources(&ordered, resources);
    let placements = ordered
        .iter()
        .map(|t| Placement {
            resource_id: assignment.resource_of(&t.id).map(str::to_string),
            ..Placement::of(t, t.release)
        })
        .collect();
    let schedule = Schedule::from_placements(epoch, horizon, placements)?;
    Ok(Plan { schedule, assignment })
}
