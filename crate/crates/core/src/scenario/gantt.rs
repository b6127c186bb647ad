//! Flat row model for timeline tools. JSON and CSV share it.

use serde::{Deserialize, Serialize};

use crate::costing::CostReport;
use crate::domain::{Schedule, TimePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GanttRowType {
    Task,
    Window,
}

/// Column order is fixed: `row_type,id,title,start,end,duration_minutes,resource,kind,cost`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GanttRow {
    pub row_type: GanttRowType,
    pub id: String,
    pub title: String,
    pub start: String,
    pub end: String,
    pub duration_minutes: i64,
    pub resource: String,
    pub kind: String,
    pub cost: i64,
}

/// One row per placement and one per gap (zero-length gaps included),
/// sorted by start then end.
pub fn export_gantt(s: &Schedule, report: &CostReport) -> Vec<GanttRow> {
    let epoch = s.epoch();
    let mut keyed: Vec<((TimePoint, TimePoint), GanttRow)> = Vec::new();
    for (p, row) in s.placements().iter().zip(&report.task_rows) {
        keyed.push((
            (p.start, p.end),
            GanttRow {
                row_type: GanttRowType::Task,
                id: p.task_id.clone(),
                title: p.title.clone(),
                start: epoch.iso(p.start),
                end: epoch.iso(p.end),
                duration_minutes: p.duration().minutes(),
                resource: p.resource_id.clone().unwrap_or_default(),
                kind: p.kind.label().to_string(),
                cost: row.cost.units(),
            },
        ));
    }
    for (g, row) in s.gaps().iter().zip(&report.window_rows) {
        keyed.push((
            (g.start, g.end),
            GanttRow {
                row_type: GanttRowType::Window,
                id: format!("W{}", g.index),
                title: format!("fenetre N°{}", g.index),
                start: epoch.iso(g.start),
                end: epoch.iso(g.end),
                duration_minutes: g.length().minutes(),
                resource: String::new(),
                kind: "idle".to_string(),
                cost: row.cost.units(),
            },
        ));
    }
    keyed.sort_by_key(|(k, _)| *k);
    keyed.into_iter().map(|(_, r)| r).collect()
}

pub fn gantt_to_json(rows: &[GanttRow]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows serialize");
    out.push('\n');
    out
}

pub fn gantt_to_csv(rows: &[GanttRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record([
        "row_type",
        "id",
        "title",
        "start",
        "end",
        "duration_minutes",
        "resource",
        "kind",
        "cost",
    ])
    .expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costing::global_cost;
    use crate::domain::{CostParams, Epoch, TimeInterval};

    #[test]
    fn empty_schedule_is_header_only() {
        let s = Schedule::empty(Epoch::default(), TimeInterval::new(TimePoint::ZERO, TimePoint::ZERO).unwrap());
        let rows = export_gantt(&s, &global_cost(&s, &CostParams::default()));
        assert!(rows.is_empty());
        assert_eq!(gantt_to_csv(&rows), "row_type,id,title,start,end,duration_minutes,resource,kind,cost\n");
        assert_eq!(gantt_to_json(&rows), "[]\n");
    }
}
