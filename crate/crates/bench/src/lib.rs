//! Synthetic workloads for the benchmarks in `benches/`.

use maintsched_core::domain::{parse_iso, Competence, CostParams, Money, Resource, TimeInterval, TimePoint};
use maintsched_core::{Epoch, InsertionPolicy, Scenario, Task};

/// A plan of `preventive` hour-aligned tasks separated by gaps of 1..=12 h,
/// plus `dynamic` tasks of 1..=8 h, over `resources` ranked resources.
/// Deterministic: the same arguments always produce the same scenario.
pub fn synthetic(preventive: usize, dynamic: usize, resources: usize) -> Scenario {
    let hour = |h: i64| TimePoint::from_minutes(h * 60);
    let mut at = 0;
    let preventive_tasks: Vec<Task> = (0..preventive as i64)
        .map(|i| {
            let start = at + 1 + i * 7 % 12;
            at = start + 1 + i * 5 % 8;
            Task::preventive(format!("T{}", i + 1), hour(start), hour(at))
        })
        .collect();
    let dynamic_tasks = (0..dynamic as i64)
        .map(|i| {
            let release = i * 3 % (at.max(1));
            Task::dynamic(format!("TD{}", i + 1), hour(release), hour(release + 1 + i * 3 % 8))
        })
        .collect();
    let resources = (0..resources as i64)
        .map(|i| Resource::with_note(format!("R{}", i + 1), Competence::from_integer(i * 7 % 20)))
        .collect();
    Scenario {
        name: Some(format!("synthetic-{preventive}x{dynamic}")),
        epoch: Epoch::new(parse_iso("2009-01-02T08:00:00Z").expect("valid timestamp")),
        horizon: TimeInterval::new(hour(0), hour(at.max(1))).expect("non-empty horizon"),
        preventive_tasks,
        dynamic_tasks,
        resources,
        cost_params: CostParams::new(Money::new(100)),
        policy: InsertionPolicy::FirstFit,
    }
}
