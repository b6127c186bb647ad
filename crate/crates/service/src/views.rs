//! Response bodies. Timestamps are ISO-8601 UTC, money is integer units,
//! lengths are whole minutes plus an hour label.

use std::collections::BTreeMap;

use serde::Serialize;

use maintsched_core::costing::{hours_label, CostReport};
use maintsched_core::domain::Gap;
use maintsched_core::{Epoch, InsertionPolicy, Money, Placement, Reduction, Schedule, TaskKind, Window};

use crate::session::{Outcome, Session};

#[derive(Debug, Clone, Serialize)]
pub struct PlacementView {
    pub task_id: String,
    pub title: String,
    pub kind: TaskKind,
    pub start: String,
    pub end: String,
    pub duration_minutes: i64,
    pub resource: Option<String>,
    pub t1_minutes: i64,
    pub t2_minutes: i64,
    pub appended: bool,
}

impl PlacementView {
    pub fn new(epoch: &Epoch, p: &Placement) -> Self {
        PlacementView {
            task_id: p.task_id.clone(),
            title: p.title.clone(),
            kind: p.kind,
            start: epoch.iso(p.start),
            end: epoch.iso(p.end),
            duration_minutes: p.duration().minutes(),
            resource: p.resource_id.clone(),
            t1_minutes: p.t1.minutes(),
            t2_minutes: p.t2.minutes(),
            appended: p.appended,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowView {
    pub index: usize,
    pub start: String,
    pub end: String,
    pub length_minutes: i64,
    pub hours: String,
}

impl WindowView {
    pub fn new(epoch: &Epoch, w: &Window) -> Self {
        WindowView {
            index: w.index,
            start: epoch.iso(w.start),
            end: epoch.iso(w.end),
            length_minutes: w.length().minutes(),
            hours: hours_label(w.length()),
        }
    }

    fn gap(epoch: &Epoch, g: &Gap) -> Self {
        WindowView {
            index: g.index,
            start: epoch.iso(g.start),
            end: epoch.iso(g.end),
            length_minutes: g.length().minutes(),
            hours: hours_label(g.length()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Totals {
    pub total_window_cost: Money,
    pub total_task_cost: Money,
    pub global_cost: Money,
    pub idle_minutes: i64,
}

impl Totals {
    fn of(r: &CostReport) -> Self {
        Totals {
            total_window_cost: r.total_window_cost,
            total_task_cost: r.total_task_cost,
            global_cost: r.global_cost,
            idle_minutes: r.total_idle().minutes(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionSummary {
    pub session_id: String,
    pub name: Option<String>,
    pub revision: u64,
    pub policy: InsertionPolicy,
    pub placements: usize,
    pub windows: usize,
    pub baseline: Totals,
    pub current: Totals,
    pub unassigned: Vec<String>,
    pub can_undo: bool,
}

impl SessionSummary {
    pub fn new(s: &Session) -> Self {
        SessionSummary {
            session_id: s.id().to_string(),
            name: s.scenario().name.clone(),
            revision: s.revision(),
            policy: s.policy(),
            placements: s.current().len(),
            windows: s.current().windows().len(),
            baseline: Totals::of(s.baseline_report()),
            current: Totals::of(&s.report()),
            unassigned: unassigned(s.current()),
            can_undo: s.can_undo(),
        }
    }
}

fn unassigned(s: &Schedule) -> Vec<String> {
    s.placements()
        .iter()
        .filter(|p| p.resource_id.is_none())
        .map(|p| p.task_id.clone())
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleView {
    pub session_id: String,
    pub revision: u64,
    pub epoch: String,
    pub horizon_start: String,
    pub horizon_end: String,
    pub placements: Vec<PlacementView>,
    /// Idle windows of positive length, for highlighting.
    pub windows: Vec<WindowView>,
    /// Every gap between consecutive placements, zero-length ones included.
    pub gap_rows: usize,
    pub assignments: BTreeMap<String, String>,
    pub unassigned: Vec<String>,
}

impl ScheduleView {
    pub fn new(s: &Session) -> Self {
        let sched = s.current();
        let epoch = sched.epoch();
        ScheduleView {
            session_id: s.id().to_string(),
            revision: s.revision(),
            epoch: epoch.iso(Default::default()),
            horizon_start: epoch.iso(sched.horizon().start),
            horizon_end: epoch.iso(sched.horizon().end),
            placements: sched.placements().iter().map(|p| PlacementView::new(&epoch, p)).collect(),
            windows: sched.windows().iter().map(|w| WindowView::new(&epoch, w)).collect(),
            gap_rows: sched.gaps().len(),
            assignments: sched
                .placements()
                .iter()
                .filter_map(|p| Some((p.task_id.clone(), p.resource_id.clone()?)))
                .collect(),
            unassigned: unassigned(sched),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowsView {
    pub session_id: String,
    pub revision: u64,
    pub windows: Vec<WindowView>,
    pub gaps: Vec<WindowView>,
    pub idle_minutes: i64,
}

impl WindowsView {
    pub fn new(s: &Session) -> Self {
        let sched = s.current();
        let epoch = sched.epoch();
        WindowsView {
            session_id: s.id().to_string(),
            revision: s.revision(),
            windows: sched.windows().iter().map(|w| WindowView::new(&epoch, w)).collect(),
            gaps: sched.gaps().iter().map(|g| WindowView::gap(&epoch, g)).collect(),
            idle_minutes: sched.idle_time().minutes(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WindowRowView {
    pub index: usize,
    pub length_minutes: i64,
    pub hours: String,
    pub cost: Money,
}

#[derive(Debug, Clone, Serialize)]
pub struct TaskRowView {
    pub task_id: String,
    pub title: String,
    pub kind: TaskKind,
    pub start: String,
    pub end: String,
    pub duration_minutes: i64,
    pub cost: Money,
    pub resource: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportView {
    pub currency: String,
    pub hourly_rate: Money,
    pub window_rows: Vec<WindowRowView>,
    pub task_rows: Vec<TaskRowView>,
    pub total_window_cost: Money,
    pub total_task_cost: Money,
    pub global_cost: Money,
}

impl ReportView {
    pub fn new(r: &CostReport) -> Self {
        ReportView {
            currency: r.currency.clone(),
            hourly_rate: r.hourly_rate,
            window_rows: r
                .window_rows
                .iter()
                .map(|w| WindowRowView {
                    index: w.index,
                    length_minutes: w.length.minutes(),
                    hours: w.hours.clone(),
                    cost: w.cost,
                })
                .collect(),
            task_rows: r
                .task_rows
                .iter()
                .map(|t| TaskRowView {
                    task_id: t.task_id.clone(),
                    title: t.title.clone(),
                    kind: t.kind,
                    start: r.epoch.iso(t.start),
                    end: r.epoch.iso(t.end),
                    duration_minutes: t.duration.minutes(),
                    cost: t.cost,
                    resource: t.resource.clone(),
                })
                .collect(),
            total_window_cost: r.total_window_cost,
            total_task_cost: r.total_task_cost,
            global_cost: r.global_cost,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CostsView {
    pub session_id: String,
    pub revision: u64,
    pub report: ReportView,
    pub baseline_window_cost: Money,
    /// Lost-cost reduction since the baseline.
    pub gain: Money,
    pub reduction_per_mille: Option<i64>,
    pub reduction: String,
}

impl CostsView {
    pub fn new(s: &Session) -> Self {
        let report = s.report();
        let reduction = Reduction::between(s.baseline_report(), &report);
        CostsView {
            session_id: s.id().to_string(),
            revision: s.revision(),
            report: ReportView::new(&report),
            baseline_window_cost: s.baseline_report().total_window_cost,
            gain: reduction.gain,
            reduction_per_mille: reduction.per_mille,
            reduction: reduction.percent_label(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Preview,
    Commit,
}

#[derive(Debug, Clone, Serialize)]
pub struct InsertionView {
    pub session_id: String,
    pub mode: Mode,
    /// Revision after the request; unchanged by a preview.
    pub revision: u64,
    pub placement: PlacementView,
    pub window_index: Option<usize>,
    /// Host window before the insertion.
    pub window: Option<WindowView>,
    pub t1_minutes: i64,
    pub t2_minutes: i64,
    pub resource: Option<String>,
    pub appended: bool,
    pub lost_before: Money,
    pub lost_after: Money,
    /// Lost-cost decrease caused by this task.
    pub gain: Money,
    /// Lost-cost decrease since the baseline, this task included.
    pub total_gain: Money,
    pub reduction: String,
    pub report: ReportView,
}

impl InsertionView {
    pub fn new(s: &Session, mode: Mode, o: &Outcome) -> Self {
        let epoch = s.scenario().epoch;
        let rec = &o.insertion.record;
        let reduction = Reduction::between(s.baseline_report(), &o.report);
        InsertionView {
            session_id: s.id().to_string(),
            mode,
            revision: s.revision(),
            placement: PlacementView::new(&epoch, &rec.placement),
            window_index: rec.window.map(|w| w.index),
            window: rec.window.map(|w| WindowView::new(&epoch, &w)),
            t1_minutes: rec.placement.t1.minutes(),
            t2_minutes: rec.placement.t2.minutes(),
            resource: rec.placement.resource_id.clone(),
            appended: rec.appended,
            lost_before: o.lost_before,
            lost_after: o.report.total_window_cost,
            gain: o.gain(),
            total_gain: reduction.gain,
            reduction: reduction.percent_label(),
            report: ReportView::new(&o.report),
        }
    }
}
