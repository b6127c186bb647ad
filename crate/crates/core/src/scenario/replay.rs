use std::fmt::Write as _;

use serde::Serialize;

use super::fixtures::{Fixture, FixtureName};
use crate::costing::{CostReport, Reduction};
use crate::domain::{Money, Schedule};
use crate::error::Result;

/// One gap row compared with the printed listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowCheck {
    pub index: usize,
    pub hours: String,
    pub cost: Money,
    /// Printed value for this row (hours or cost, depending on listing).
    pub printed: Option<String>,
    pub agrees: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayOutcome {
    pub fixture: FixtureName,
    #[serde(skip)]
    pub schedule: Schedule,
    pub report: CostReport,
    pub rows: Vec<RowCheck>,
    pub baseline_window_cost: Money,
    pub reduction: Reduction,
    pub printed_reduction_percent: Option<i64>,
    pub expected_window_cost: Money,
    pub printed_window_cost: i64,
    pub expected_gap_rows: usize,
    /// The listing prints per-row hours (as opposed to costs or nothing).
    pub hours_listed: bool,
    pub printed_task_cost: Option<i64>,
    pub printed_global_cost: Option<i64>,
    pub pass: bool,
}

impl ReplayOutcome {
    pub fn window_total_ok(&self) -> bool {
        self.report.total_window_cost == self.expected_window_cost
    }

    pub fn gap_rows_ok(&self) -> bool {
        self.report.window_rows.len() == self.expected_gap_rows
    }

    /// True unless a printed hour list exists and some row disagrees.
    /// Printed per-row costs are only flagged, never failed.
    pub fn printed_hours_ok(&self) -> bool {
        !self.hours_listed || self.rows.iter().all(|r| r.agrees == Some(true))
    }

    /// Printed percentage within one point of the recomputed one.
    pub fn reduction_ok(&self) -> Option<bool> {
        let printed = self.printed_reduction_percent?;
        let mille = self.reduction.per_mille?;
        Some((mille - printed * 10).abs() <= 10)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let r = &self.report;
        let _ = writeln!(out, "replay {}: {} placements, {} gap rows", self.fixture, r.task_rows.len(), r.window_rows.len());
        let _ = writeln!(out, "{:<15} {:>6} {:>8}  {:<14} status", "gap", "hours", "cost", "printed");
        for row in &self.rows {
            let status = match row.agrees {
                Some(true) => "ok",
                Some(false) => "DIFFERS",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{:<15} {:>6} {:>8}  {:<14} {}",
                format!("fenetre N°{}", row.index),
                row.hours,
                row.cost.to_string(),
                row.printed.as_deref().unwrap_or("-"),
                status
            );
        }
        let mark = |ok: bool| if ok { "ok" } else { "MISMATCH" };
        let _ = writeln!(
            out,
            "window total: computed {} / expected {} / printed {}  {}",
            r.total_window_cost,
            self.expected_window_cost,
            self.printed_window_cost,
            mark(self.window_total_ok())
        );
        match self.printed_task_cost {
            Some(p) if p != r.total_task_cost.units() => {
                let _ = writeln!(out, "task total: printed {p} / computed {}  FLAGGED", r.total_task_cost);
            }
            Some(p) => {
                let _ = writeln!(out, "task total: printed {p} / computed {}  ok", r.total_task_cost);
            }
            None => {
                let _ = writeln!(out, "task total: computed {} (not printed)", r.total_task_cost);
            }
        }
        if let Some(p) = self.printed_global_cost {
            let flag = if p == r.global_cost.units() { "ok" } else { "FLAGGED" };
            let _ = writeln!(out, "global: printed {p} / computed {}  {flag}", r.global_cost);
        }
        let _ = write!(
            out,
            "reduction vs baseline {}: gain {} ({})",
            self.baseline_window_cost,
            self.reduction.gain,
            self.reduction.percent_label()
        );
        match (self.printed_reduction_percent, self.reduction_ok()) {
            (Some(p), Some(ok)) => {
                let _ = writeln!(out, ", printed {p}% {}", if ok { "within 1 pt" } else { "OUTSIDE 1 pt" });
            }
            _ => out.push('\n'),
        }
        let _ = writeln!(out, "verdict: {}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// Replays a fixture's published placements and checks the recomputed
/// costs against its strict totals and printed values.
pub fn replay(f: &Fixture) -> Result<ReplayOutcome> {
    let schedule = f.published_schedule()?;
    let report = f.scenario.report(&schedule);
    let baseline = f.scenario.baseline()?;
    let baseline_window_cost = f.scenario.report(&baseline.schedule).total_window_cost;

    let printed = &f.as_printed;
    let rows = report
        .window_rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let (printed_value, agrees) = if let Some(hours) = &printed.window_hours {
                let p = hours.get(i).copied();
                (p.map(|h| h.to_string()), p.map(|h| row.length.whole_hours() == Some(h)))
            } else if let Some(costs) = &printed.window_costs {
                let p = costs.get(i).copied();
                (p.map(|c| format!("{c} units")), p.map(|c| row.cost.units() == c))
            } else {
                (None, None)
            };
            RowCheck {
                index: row.index,
                hours: row.hours.clone(),
                cost: row.cost,
                printed: printed_value,
                agrees,
            }
        })
        .collect();

    let mut out = ReplayOutcome {
        fixture: f.name,
        reduction: Reduction::of(baseline_window_cost, report.total_window_cost),
        schedule,
        rows,
        baseline_window_cost,
        printed_reduction_percent: printed.reduction_percent,
        expected_window_cost: f.expected.total_window_cost,
        printed_window_cost: printed.total_window_cost,
        expected_gap_rows: f.expected.gap_rows,
        hours_listed: printed.window_hours.is_some(),
        printed_task_cost: printed.total_task_cost,
        printed_global_cost: printed.global_cost,
        report,
        pass: false,
    };
    out.pass = out.window_total_ok() && out.gap_rows_ok() && out.printed_hours_ok() && out.reduction_ok() != Some(false);
    Ok(out)
}
