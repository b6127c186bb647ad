//! Cost evaluation: idle-window (lost) cost, per-task cost, earliness and
//! tardiness deviation, the global objective and gain between two reports.
//!
//! All amounts are whole currency units. A span is priced as
//! `minutes × rate / 60`, rounded half up per row; totals are exact sums of
//! their rows.

mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use report::{hours_label, CostReport, TaskRow, WindowRow};

use crate::domain::{CostParams, Competence, Duration, Money, Placement, Schedule, Task, TaskCostMode, TimeInterval, TimePoint};
use crate::error::{Error, Result};

/// Idle cost of every gap between consecutive placements.
pub fn lost_cost(s: &Schedule, p: &CostParams) -> Money {
    s.gaps().iter().map(|g| p.hourly_rate.for_span(g.length())).sum()
}

/// Duration × hourly rate.
pub fn task_cost(t: &Task, p: &CostParams) -> Money {
    p.hourly_rate.for_span(t.duration)
}

/// Earliness/tardiness terms for one task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationPenalties {
    /// Per hour late past `due_window.end`.
    pub tardiness_rate: Money,
    /// Per hour early before `due_window.start`.
    pub earliness_rate: Money,
    pub base_cost: Money,
    pub due_window: TimeInterval,
}

impl DeviationPenalties {
    pub fn from_task(t: &Task) -> Self {
        DeviationPenalties {
            tardiness_rate: t.tardiness_penalty,
            earliness_rate: t.earliness_penalty,
            base_cost: t.base_cost,
            due_window: t.effective_due_window(),
        }
    }
}

/// Positive (late) and negative (early) deviation of a completion time.
/// At most one of the two is non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deviation {
    pub late: Duration,
    pub early: Duration,
}

pub fn deviation(completion: TimePoint, due_window: &TimeInterval) -> Deviation {
    Deviation {
        late: completion.checked_since(due_window.end).unwrap_or(Duration::ZERO),
        early: due_window.start.checked_since(completion).unwrap_or(Duration::ZERO),
    }
}

/// `W·θ⁺ + h·θ⁻ + C₀` for the placement's completion time, where the
/// penalty part is rounded once as a whole.
pub fn deviation_cost(pl: &Placement, d: &DeviationPenalties) -> Money {
    deviation_cost_at(pl.end, d)
}

pub fn deviation_cost_at(completion: TimePoint, d: &DeviationPenalties) -> Money {
    let dev = deviation(completion, &d.due_window);
    let penalty_minutes = d.tardiness_rate.units() as i128 * dev.late.minutes() as i128
        + d.earliness_rate.units() as i128 * dev.early.minutes() as i128;
    let penalty = (penalty_minutes + 30) / 60;
    d.base_cost + Money::new(i64::try_from(penalty).expect("money overflow"))
}

/// Global cost with task cost = duration × rate.
pub fn global_cost(s: &Schedule, p: &CostParams) -> CostReport {
    CostReport::build(s, p, |pl| p.hourly_rate.for_span(pl.duration()))
}

/// Global cost honouring `p.task_cost_mode`. In deviation mode each task
/// with an entry in `penalties` is priced by [`deviation_cost`]; tasks
/// without one fall back to duration × rate.
pub fn global_cost_with(s: &Schedule, p: &CostParams, penalties: &BTreeMap<String, DeviationPenalties>) -> CostReport {
    match p.task_cost_mode {
        TaskCostMode::Fixture => global_cost(s, p),
        TaskCostMode::Deviation => CostReport::build(s, p, |pl| match penalties.get(&pl.task_id) {
            Some(d) => deviation_cost(pl, d),
            None => p.hourly_rate.for_span(pl.duration()),
        }),
    }
}

/// Lost-cost reduction from `before` to `after`.
pub fn gain(before: &CostReport, after: &CostReport) -> Money {
    before.total_window_cost - after.total_window_cost
}

/// Gain with its share of the `before` lost cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub gain: Money,
    /// Percentage × 10, rounded half up (366 means 36.6 %).
    pub per_mille: Option<i64>,
}

impl Reduction {
    pub fn between(before: &CostReport, after: &CostReport) -> Self {
        Reduction::of(before.total_window_cost, after.total_window_cost)
    }

    pub fn of(before: Money, after: Money) -> Self {
        let gain = before - after;
        let per_mille = (before.units() > 0).then(|| {
            let num = gain.units() as i128 * 1000;
            let den = before.units() as i128;
            let q = if num >= 0 {
                (2 * num + den) / (2 * den)
            } else {
                (2 * num - den) / (2 * den)
            };
            q as i64
        });
        Reduction { gain, per_mille }
    }

    pub fn percent(&self) -> Option<f64> {
        self.per_mille.map(|m| m as f64 / 10.0)
    }

    /// `"36.6%"`, or `"n/a"` when the baseline was zero.
    pub fn percent_label(&self) -> String {
        match self.per_mille {
            Some(m) => {
                let sign = if m < 0 { "-" } else { "" };
                format!("{sign}{}.{}%", m.abs() / 10, m.abs() % 10)
            }
            None => "n/a".to_string(),
        }
    }
}

/// A quantity a performance objective can bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "unit", content = "value", rename_all = "snake_case")]
pub enum Measure {
    Cost(Money),
    Duration(Duration),
    Quality(Competence),
}

impl Measure {
    fn unit(&self) -> &'static str {
        match self {
            Measure::Cost(_) => "cost",
            Measure::Duration(_) => "duration",
            Measure::Quality(_) => "quality",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveDirection {
    /// Durations and costs: performance ≤ objective.
    AtMost,
    /// Quality: performance ≥ objective.
    AtLeast,
}

pub fn check_performance_objective(value: &Measure, objective: &Measure, direction: ObjectiveDirection) -> Result<bool> {
    use std::cmp::Ordering;
    let ord: Ordering = match (value, objective) {
        (Measure::Cost(a), Measure::Cost(b)) => a.cmp(b),
        (Measure::Duration(a), Measure::Duration(b)) => a.cmp(b),
        (Measure::Quality(a), Measure::Quality(b)) => a.cmp(b),
        _ => {
            return Err(Error::UnitMismatch {
                value: value.unit(),
                objective: objective.unit(),
            })
        }
    };
    Ok(match direction {
        ObjectiveDirection::AtMost => ord != Ordering::Greater,
        ObjectiveDirection::AtLeast => ord != Ordering::Less,
    })
}
