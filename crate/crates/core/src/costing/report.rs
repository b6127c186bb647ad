use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domain::{CostParams, Duration, Epoch, Money, Placement, Schedule, TaskKind, TimePoint};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowRow {
    /// 1-based gap ordinal ("fenetre N°k").
    pub index: usize,
    pub length: Duration,
    pub hours: String,
    pub cost: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRow {
    pub task_id: String,
    pub title: String,
    pub kind: TaskKind,
    pub start: TimePoint,
    pub end: TimePoint,
    pub duration: Duration,
    pub cost: Money,
    pub resource: Option<String>,
}

/// Cost breakdown of one schedule.
///
/// `global_cost == total_window_cost + total_task_cost` and each total is
/// the exact sum of its rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub epoch: Epoch,
    pub currency: String,
    pub hourly_rate: Money,
    pub window_rows: Vec<WindowRow>,
    pub task_rows: Vec<TaskRow>,
    pub total_window_cost: Money,
    pub total_task_cost: Money,
    pub global_cost: Money,
}

/// `"2"` for whole hours, otherwise up to two decimals (`"1.5"`, `"0.33"`).
pub fn hours_label(d: Duration) -> String {
    match d.whole_hours() {
        Some(h) => h.to_string(),
        None => {
            let s = format!("{:.2}", d.hours_f64());
            s.trim_end_matches('0').to_string()
        }
    }
}

impl CostReport {
    pub(crate) fn build(s: &Schedule, p: &CostParams, price: impl Fn(&Placement) -> Money) -> Self {
        let window_rows: Vec<WindowRow> = s
            .gaps()
            .iter()
            .map(|g| WindowRow {
                index: g.index,
                length: g.length(),
                hours: hours_label(g.length()),
                cost: p.hourly_rate.for_span(g.length()),
            })
            .collect();
        let task_rows: Vec<TaskRow> = s
            .placements()
            .iter()
            .map(|pl| TaskRow {
                task_id: pl.task_id.clone(),
                title: pl.title.clone(),
                kind: pl.kind,
                start: pl.start,
                end: pl.end,
                duration: pl.duration(),
                cost: price(pl),
                resource: pl.resource_id.clone(),
            })
            .collect();
        let total_window_cost = window_rows.iter().map(|r| r.cost).sum();
        let total_task_cost = task_rows.iter().map(|r| r.cost).sum();
        CostReport {
            epoch: s.epoch(),
            currency: p.currency_label.clone(),
            hourly_rate: p.hourly_rate,
            window_rows,
            task_rows,
            total_window_cost,
            total_task_cost,
            global_cost: total_window_cost + total_task_cost,
        }
    }

    pub fn total_idle(&self) -> Duration {
        self.window_rows.iter().map(|r| r.length).sum()
    }

    /// Aligned plain-text rendering: task table, window table, totals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let cur = &self.currency;
        let id_w = self.task_rows.iter().map(|r| r.title.len()).max().unwrap_or(4).max(4);
        let res_w = self
            .task_rows
            .iter()
            .map(|r| r.resource.as_deref().map_or(1, str::len))
            .max()
            .unwrap_or(8)
            .max(8);
        let _ = writeln!(
            out,
            "{:>4}  {:<id_w$}  {:<10}  {:<20}  {:<20}  {:>6}  {:<res_w$}  {:>8}",
            "N°", "Task", "Kind", "Start", "End", "Hours", "Resource", "Cost"
        );
        for (i, r) in self.task_rows.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>4}  {:<id_w$}  {:<10}  {:<20}  {:<20}  {:>6}  {:<res_w$}  {:>8}",
                i + 1,
                r.title,
                r.kind.label(),
                self.epoch.iso(r.start),
                self.epoch.iso(r.end),
                hours_label(r.duration),
                r.resource.as_deref().unwrap_or("-"),
                r.cost.to_string(),
            );
        }
        out.push('\n');
        for r in &self.window_rows {
            let label = format!("fenetre N°{}", r.index);
            let _ = writeln!(out, "{label:<15} {:>6}  {:>8}", r.hours, r.cost.to_string());
        }
        if !self.window_rows.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "Cout Total fenetre {} {cur} / Cout Total Taches {} {cur} / Cout Global {} {cur}",
            self.total_window_cost, self.total_task_cost, self.global_cost
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hours_labels() {
        assert_eq!(hours_label(Duration::from_hours(14)), "14");
        assert_eq!(hours_label(Duration::ZERO), "0");
        assert_eq!(hours_label(Duration::from_minutes(90)), "1.5");
        assert_eq!(hours_label(Duration::from_minutes(20)), "0.33");
    }
}
