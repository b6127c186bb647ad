//! Competence-ranked resource binding.
//!
//! Resources are ranked by their competence for the task's type, highest
//! first. A resource is available for an interval when nothing already in
//! its busy set (calendar plus tasks bound so far) overlaps it, so one
//! technician may serve any number of disjoint tasks.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::domain::{Competence, Resource, Schedule, Task, TaskType, TimeInterval};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedResource {
    pub resource_id: String,
    /// `None` when the resource has no entry for the requested task type.
    pub competence: Option<Competence>,
    pub available: bool,
}

/// Ranks every resource for task type `k`, descending by competence with
/// ties broken by id. When `during` is given, resources whose calendar
/// overlaps it are kept but flagged unavailable.
pub fn rank_resources(resources: &[Resource], k: TaskType, during: Option<&TimeInterval>) -> Vec<RankedResource> {
    let mut ranked: Vec<RankedResource> = resources
        .iter()
        .map(|r| {
            let competence = r.competence(k).cloned();
            let free = during.is_none_or(|iv| r.is_free_during(iv));
            RankedResource {
                resource_id: r.id.clone(),
                available: competence.is_some() && free,
                competence,
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        // None ranks below any competence
        b.competence
            .cmp(&a.competence)
            .then_with(|| a.resource_id.cmp(&b.resource_id))
    });
    ranked
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    /// task id → resource id
    pub bindings: BTreeMap<String, String>,
    /// Tasks no resource could take, in processing order.
    pub unassigned: Vec<String>,
}

impl Assignment {
    pub fn resource_of(&self, task_id: &str) -> Option<&str> {
        self.bindings.get(task_id).map(String::as_str)
    }
}

/// Per-resource busy sets that grow as tasks are bound.
#[derive(Debug, Clone)]
pub(crate) struct Occupancy<'a> {
    resources: &'a [Resource],
    extra: HashMap<&'a str, Vec<TimeInterval>>,
}

impl<'a> Occupancy<'a> {
    pub(crate) fn new(resources: &'a [Resource]) -> Self {
        Occupancy {
            resources,
            extra: HashMap::new(),
        }
    }

    /// Seeds the busy sets with the placements already bound in `schedule`.
    pub(crate) fn from_schedule(resources: &'a [Resource], schedule: &Schedule) -> Self {
        let mut occ = Occupancy::new(resources);
        for p in schedule.placements() {
            if let Some(rid) = &p.resource_id {
                occ.reserve(rid, p.interval());
            }
        }
        occ
    }

    fn free(&self, r: &Resource, iv: &TimeInterval) -> bool {
        r.is_free_during(iv)
            && self
                .extra
                .get(r.id.as_str())
                .is_none_or(|taken| !taken.iter().any(|t| t.overlaps(iv)))
    }

    fn reserve(&mut self, resource_id: &str, iv: TimeInterval) {
        if let Some(r) = self.resources.iter().find(|r| r.id == resource_id) {
            self.extra.entry(r.id.as_str()).or_default().push(iv);
        }
    }

    /// Binds the task to its pinned resource or to the best-ranked free one.
    pub(crate) fn take(&mut self, task: &Task, iv: TimeInterval) -> Option<String> {
        let chosen = match &task.pinned_resource {
            Some(pin) => self.resources.iter().find(|r| &r.id == pin).filter(|r| self.free(r, &iv)),
            None => rank_resources(self.resources, task.required_type, None)
                .into_iter()
                .filter(|rr| rr.competence.is_some())
                .filter_map(|rr| self.resources.iter().find(|r| r.id == rr.resource_id))
                .find(|r| self.free(r, &iv)),
        }?;
        let id = chosen.id.clone();
        self.reserve(&id, iv);
        Some(id)
    }
}

/// Binds each task, run over its planned interval, to a resource.
///
/// Pinned tasks are bound first. The rest are taken longest first (ties:
/// earlier release, then id), each receiving the highest-ranked resource
/// that is free for the whole interval. Tasks nobody can take end up in
/// `unassigned`.
pub fn assign_resources(tasks: &[Task], resources: &[Resource]) -> Assignment {
    let mut order: Vec<&Task> = tasks.iter().collect();
    order.sort_by(|a, b| {
        b.pinned_resource
            .is_some()
            .cmp(&a.pinned_resource.is_some())
            .then(b.duration.cmp(&a.duration))
            .then(a.release.cmp(&b.release))
            .then_with(|| a.id.cmp(&b.id))
    });
    let mut occ = Occupancy::new(resources);
    let mut out = Assignment::default();
    for task in order {
        match occ.take(task, task.planned_interval()) {
            Some(rid) => {
                out.bindings.insert(task.id.clone(), rid);
            }
            None => out.unassigned.push(task.id.clone()),
        }
    }
    out
}
