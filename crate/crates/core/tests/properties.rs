mod common;

use std::collections::BTreeMap;

use num_rational::Ratio;
use proptest::prelude::*;

use common::{policy, scenario, Shape};
use maintsched_core::costing::{deviation, global_cost, lost_cost};
use maintsched_core::domain::{Competence, CostParams, Duration, Money, Schedule, TaskCostMode, TimeInterval, TimePoint};
use maintsched_core::scenario::{parse_json, to_json};
use maintsched_core::scheduler::{assign_resources, compute_windows, insert_batch, insert_dynamic, rank_resources};
use maintsched_core::{InsertionPolicy, Scenario};

fn assert_no_overlap(s: &Schedule, sc: &Scenario) {
    for pair in s.placements().windows(2) {
        assert!(pair[0].end <= pair[1].start, "{} overlaps {}", pair[0].task_id, pair[1].task_id);
    }
    for r in &sc.resources {
        let held: Vec<_> = s.placements_of(&r.id).map(|p| p.interval()).collect();
        for (i, a) in held.iter().enumerate() {
            assert!(r.busy.iter().all(|b| !b.overlaps(a)), "{} booked while busy", r.id);
            for b in &held[i + 1..] {
                assert!(!a.overlaps(b), "{} double-booked", r.id);
            }
        }
    }
}

fn in_window_minutes(out: &maintsched_core::scheduler::BatchOutcome) -> i64 {
    out.records.iter().filter(|r| !r.appended).map(|r| r.placement.duration().minutes()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn conservation_and_no_overlap(sc in scenario(Shape::HOURLY), policy in policy()) {
        let before = sc.baseline().unwrap().schedule;
        let out = insert_batch(&before, &sc.dynamic_tasks, policy, &sc.resources).unwrap();
        let inserted = in_window_minutes(&out);

        prop_assert_eq!(out.schedule.idle_time().minutes(), before.idle_time().minutes() - inserted);
        if out.all_in_window() {
            let total: Duration = sc.dynamic_tasks.iter().map(|t| t.duration).sum();
            prop_assert_eq!(out.schedule.idle_time(), before.idle_time().saturating_sub(total));
            let p = &sc.cost_params;
            prop_assert_eq!(lost_cost(&out.schedule, p), lost_cost(&before, p) - p.hourly_rate.for_span(total));
        }
        assert_no_overlap(&out.schedule, &sc);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn conservation_on_minute_grid(sc in scenario(Shape::MINUTES), policy in policy()) {
        let before = sc.baseline().unwrap().schedule;
        let out = insert_batch(&before, &sc.dynamic_tasks, policy, &sc.resources).unwrap();
        prop_assert_eq!(out.schedule.idle_time().minutes(), before.idle_time().minutes() - in_window_minutes(&out));
        assert_no_overlap(&out.schedule, &sc);
    }

    #[test]
    fn appended_tasks_extend_past_last_placement(sc in scenario(Shape::HOURLY)) {
        let before = sc.baseline().unwrap().schedule;
        let out = insert_batch(&before, &sc.dynamic_tasks, InsertionPolicy::Append, &sc.resources).unwrap();
        prop_assert_eq!(out.schedule.idle_time(), before.idle_time());
        let appended: Duration = out.records.iter().map(|r| r.placement.duration()).sum();
        if let Some(end) = before.last_end() {
            prop_assert_eq!(out.schedule.last_end(), Some(end + appended));
        }
    }

    #[test]
    fn fitting_insertion_lowers_lost_cost_by_its_price(sc in scenario(Shape::HOURLY)) {
        let before = sc.baseline().unwrap().schedule;
        for t in &sc.dynamic_tasks {
            let ins = insert_dynamic(&before, t, InsertionPolicy::FirstFit, &sc.resources).unwrap();
            let p = &sc.cost_params;
            if !ins.record.appended {
                prop_assert_eq!(lost_cost(&before, p) - lost_cost(&ins.schedule, p), p.hourly_rate.for_span(t.duration));
                let w = ins.record.window.unwrap();
                prop_assert_eq!(ins.record.placement.t1 + t.duration + ins.record.placement.t2, w.length());
            }
        }
    }

    #[test]
    fn interval_partition(sc in scenario(Shape::MINUTES)) {
        let run = sc.run().unwrap();
        let s = run.schedule();
        let windows: i64 = compute_windows(s).iter().map(|w| w.length().minutes()).sum();
        prop_assert_eq!(windows, s.idle_time().minutes());
        prop_assert_eq!(windows + s.busy_time().minutes(), s.span().minutes());
    }

    #[test]
    fn rate_scales_costs_linearly(sc in scenario(Shape::HOURLY), alpha in 1i64..50) {
        let run = sc.run().unwrap();
        let p = CostParams::new(sc.cost_params.hourly_rate);
        let scaled = CostParams::new(Money::new(sc.cost_params.hourly_rate.units() * alpha));
        let a = global_cost(run.schedule(), &p);
        let b = global_cost(run.schedule(), &scaled);
        prop_assert_eq!(a.window_rows.len(), b.window_rows.len());
        for (x, y) in a.window_rows.iter().zip(&b.window_rows) {
            prop_assert_eq!(x.cost * alpha, y.cost);
        }
        for (x, y) in a.task_rows.iter().zip(&b.task_rows) {
            prop_assert_eq!(x.cost * alpha, y.cost);
        }
        prop_assert_eq!(a.global_cost * alpha, b.global_cost);
    }

    #[test]
    fn report_totals_are_row_sums(sc in scenario(Shape::MINUTES)) {
        let run = sc.run().unwrap();
        for r in [&run.baseline_report, &run.report] {
            let windows: Money = r.window_rows.iter().map(|w| w.cost).sum();
            let tasks: Money = r.task_rows.iter().map(|t| t.cost).sum();
            prop_assert_eq!(r.total_window_cost, windows);
            prop_assert_eq!(r.total_task_cost, tasks);
            prop_assert_eq!(r.global_cost, windows + tasks);
        }
    }

    #[test]
    fn reduction_law(sc in scenario(Shape::HOURLY)) {
        let mut sc = sc;
        sc.cost_params.task_cost_mode = TaskCostMode::Fixture;
        let run = sc.run_with(&sc.dynamic_tasks.clone(), InsertionPolicy::FirstFit).unwrap();
        if run.batch.all_in_window() {
            let total: Duration = sc.dynamic_tasks.iter().map(|t| t.duration).sum();
            let gain = run.baseline_report.total_window_cost - run.report.total_window_cost;
            prop_assert_eq!(gain, sc.cost_params.hourly_rate.for_span(total));
        }
    }

    #[test]
    fn deviation_is_one_sided(completion in -5000i64..5000, start in -3000i64..3000, len in 0i64..3000) {
        let w = TimeInterval::new(TimePoint::from_minutes(start), TimePoint::from_minutes(start + len)).unwrap();
        let d = deviation(TimePoint::from_minutes(completion), &w);
        prop_assert_eq!(d.late.minutes() * d.early.minutes(), 0);
    }

    #[test]
    fn scenario_round_trips(sc in scenario(Shape::MINUTES)) {
        let text = to_json(&sc);
        let back = parse_json(&text).unwrap();
        prop_assert_eq!(&back, &sc);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn runs_are_deterministic(sc in scenario(Shape::MINUTES)) {
        let a = sc.run().unwrap();
        let b = sc.clone().run().unwrap();
        prop_assert_eq!(
            serde_json::to_string(a.schedule()).unwrap(),
            serde_json::to_string(b.schedule()).unwrap()
        );
        prop_assert_eq!(a.report.to_text(), b.report.to_text());
    }

    #[test]
    fn ranking_invariant_under_scaling(sc in scenario(Shape::MINUTES), num in 1i64..40, den in 1i64..40) {
        let factor = Ratio::new(num, den);
        let mut scaled = sc.resources.clone();
        for r in &mut scaled {
            r.note = r.note.scaled(factor);
            r.competence_row = r.competence_row.iter().map(|c| c.scaled(factor)).collect();
        }
        for k in 0..3 {
            let ids = |rs: &[maintsched_core::Resource]| {
                rank_resources(rs, k, None).into_iter().map(|r| r.resource_id).collect::<Vec<_>>()
            };
            prop_assert_eq!(ids(&sc.resources), ids(&scaled));
        }
        let tasks: Vec<_> = sc.all_tasks().cloned().collect();
        prop_assert_eq!(assign_resources(&tasks, &sc.resources), assign_resources(&tasks, &scaled));
    }
}

/// Every ordering of the dynamic tasks under both fitting policies: runs
/// that leave the same tasks inside windows agree on lost cost, and that
/// cost is the baseline minus the inserted time.
fn dominance_case(sc: &Scenario) {
    let before = sc.baseline().unwrap().schedule;
    let p = CostParams::new(Money::new(100));
    let base_lost = lost_cost(&before, &p);
    let mut seen: BTreeMap<Vec<String>, Money> = BTreeMap::new();
    let n = sc.dynamic_tasks.len();
    for perm in permutations(n) {
        let order: Vec<_> = perm.iter().map(|&i| sc.dynamic_tasks[i].clone()).collect();
        for policy in [InsertionPolicy::FirstFit, InsertionPolicy::BestFit] {
            let out = insert_batch(&before, &order, policy, &sc.resources).unwrap();
            let mut placed: Vec<String> = out.records.iter().filter(|r| !r.appended).map(|r| r.placement.task_id.clone()).collect();
            placed.sort();
            let inserted: Duration = out.records.iter().filter(|r| !r.appended).map(|r| r.placement.duration()).sum();
            let lost = lost_cost(&out.schedule, &p);
            assert_eq!(lost, base_lost - p.hourly_rate.for_span(inserted));
            let prev = *seen.entry(placed.clone()).or_insert(lost);
            assert_eq!(prev, lost, "{placed:?}");
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn policy_dominance_small_instances(sc in scenario(Shape { max_tasks: 6, max_dynamics: 4, max_resources: 2, grid: 60 })) {
        prop_assume!(compute_windows(&sc.baseline().unwrap().schedule).len() <= 5);
        dominance_case(&sc);
    }
}

#[test]
fn permutation_count() {
    assert_eq!(permutations(4).len(), 24);
    let mut all = permutations(3);
    all.sort();
    all.dedup();
    assert_eq!(all.len(), 6);
}

#[test]
fn competence_scaling_preserves_order() {
    let a: Competence = "15.75".parse().unwrap();
    let b: Competence = "16".parse().unwrap();
    let f = Ratio::new(7, 3);
    assert!(a.scaled(f) < b.scaled(f));
}
