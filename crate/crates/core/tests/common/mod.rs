//! Random scenario generation shared by the property tests.

#![allow(dead_code)]

use chrono::{TimeZone, Utc};
use num_rational::Ratio;
use proptest::prelude::*;

use maintsched_core::domain::{Competence, CostParams, Duration, Epoch, Money, Resource, TaskCostMode, TimeInterval, TimePoint};
use maintsched_core::{InsertionPolicy, Scenario, Task};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_tasks: usize,
    pub max_dynamics: usize,
    pub max_resources: usize,
    /// Time grid in minutes; 60 keeps every length a whole hour.
    pub grid: i64,
}

impl Shape {
    pub const HOURLY: Shape = Shape {
        max_tasks: 12,
        max_dynamics: 6,
        max_resources: 4,
        grid: 60,
    };
    pub const MINUTES: Shape = Shape { grid: 1, ..Shape::HOURLY };
}

fn epoch() -> impl Strategy<Value = Epoch> {
    (0i64..10 * 365 * 24 * 60).prop_map(|m| {
        let base = Utc.with_ymd_and_hms(2005, 1, 1, 0, 0, 0).unwrap();
        Epoch::new(base + chrono::Duration::minutes(m))
    })
}

fn note() -> impl Strategy<Value = Competence> {
    (0i64..=80).prop_map(|q| Competence::new(Ratio::new(q, 4)))
}

/// (gap, length) pairs in grid units laid out back to back from `origin`.
fn chain(pairs: &[(i64, i64)], origin: i64, grid: i64) -> Vec<TimeInterval> {
    let mut at = origin;
    pairs
        .iter()
        .map(|&(gap, len)| {
            let start = at + gap * grid;
            at = start + len * grid;
            TimeInterval::new(TimePoint::from_minutes(start), TimePoint::from_minutes(at)).unwrap()
        })
        .collect()
}

prop_compose! {
    fn resource(index: usize, grid: i64)(
        note in note(),
        extra_row in prop::collection::vec(note(), 0..3),
        busy in prop::collection::vec((0i64..40, 1i64..12), 0..3),
    ) -> Resource {
        let mut row = vec![note.clone()];
        row.extend(extra_row);
        Resource { id: format!("R{}", index + 1), note, competence_row: row, busy: chain(&busy, 0, grid) }
    }
}

fn resources(max: usize, grid: i64) -> impl Strategy<Value = Vec<Resource>> {
    (0..=max).prop_flat_map(move |n| (0..n).map(|i| resource(i, grid)).collect::<Vec<_>>())
}

#[derive(Debug, Clone)]
struct Extras {
    title: Option<String>,
    earliness: i64,
    tardiness: i64,
    base: i64,
    due_window: Option<(i64, i64)>,
    pin: Option<usize>,
    required_type: usize,
}

fn extras() -> impl Strategy<Value = Extras> {
    (
        prop::option::of("[a-z ]{1,8}"),
        0i64..300,
        0i64..300,
        0i64..2000,
        prop::option::of((-600i64..600, 0i64..600)),
        prop::option::weighted(0.2, 0usize..8),
        prop::option::weighted(0.2, 1usize..3),
    )
        .prop_map(|(title, earliness, tardiness, base, due_window, pin, k)| Extras {
            title,
            earliness,
            tardiness,
            base,
            due_window,
            pin,
            required_type: k.unwrap_or(0),
        })
}

fn decorate(mut t: Task, x: &Extras, n_resources: usize) -> Task {
    if let Some(title) = &x.title {
        t.title = title.clone();
    }
    t.earliness_penalty = Money::new(x.earliness);
    t.tardiness_penalty = Money::new(x.tardiness);
    t.base_cost = Money::new(x.base);
    t.required_type = x.required_type;
    t.due_window = x.due_window.and_then(|(offset, len)| {
        let start = (t.due.minutes() + offset).max(0);
        TimeInterval::new(TimePoint::from_minutes(start), TimePoint::from_minutes(start + len))
    });
    t.pinned_resource = match (x.pin, n_resources) {
        (Some(i), n) if n > 0 => Some(format!("R{}", i % n + 1)),
        _ => None,
    };
    t
}

/// A valid scenario: non-overlapping preventive tasks, arbitrary dynamic
/// tasks, resources with calendars and every optional field exercised.
pub fn scenario(shape: Shape) -> impl Strategy<Value = Scenario> {
    let grid = shape.grid;
    (
        epoch(),
        prop::collection::vec(((0i64..30, 1i64..12), extras()), 0..=shape.max_tasks),
        prop::collection::vec(((0i64..200, 1i64..24), extras()), 0..=shape.max_dynamics),
        resources(shape.max_resources, grid),
        (0i64..10, 0i64..10),
        prop::option::of("[A-Za-z0-9_-]{1,12}"),
        prop_oneof![Just(InsertionPolicy::FirstFit), Just(InsertionPolicy::BestFit), Just(InsertionPolicy::Append)],
        (1i64..500, any::<bool>()),
    )
        .prop_map(move |(epoch, prev, dyns, resources, (lead, tail), name, policy, (rate, deviation))| {
            let pairs: Vec<_> = prev.iter().map(|(p, _)| *p).collect();
            let intervals = chain(&pairs, lead * grid, grid);
            let preventive_tasks: Vec<Task> = intervals
                .iter()
                .zip(&prev)
                .enumerate()
                .map(|(i, (iv, (_, x)))| decorate(Task::preventive(format!("T{}", i + 1), iv.start, iv.end), x, resources.len()))
                .collect();
            let dynamic_tasks: Vec<Task> = dyns
                .iter()
                .enumerate()
                .map(|(i, ((release, len), x))| {
                    let release = TimePoint::from_minutes(release * grid);
                    let due = release + Duration::from_minutes(len * grid);
                    decorate(Task::dynamic(format!("TD{}", i + 1), release, due), x, resources.len())
                })
                .collect();
            let horizon = match (intervals.first(), intervals.last()) {
                (Some(a), Some(b)) => TimeInterval::new(
                    TimePoint::from_minutes((a.start.minutes() - lead * grid).max(0)),
                    b.end + Duration::from_minutes(tail * grid),
                )
                .unwrap(),
                _ => TimeInterval::new(TimePoint::ZERO, TimePoint::from_minutes(tail * grid)).unwrap(),
            };
            let mut cost_params = CostParams::new(Money::new(rate));
            if deviation {
                cost_params.task_cost_mode = TaskCostMode::Deviation;
            }
            Scenario {
                name,
                epoch,
                horizon,
                preventive_tasks,
                dynamic_tasks,
                resources,
                cost_params,
                policy,
            }
        })
}

pub fn policy() -> impl Strategy<Value = InsertionPolicy> {
    prop_oneof![Just(InsertionPolicy::FirstFit), Just(InsertionPolicy::BestFit), Just(InsertionPolicy::Append)]
}
