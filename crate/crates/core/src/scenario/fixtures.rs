//! Bundled reference runs: a ten-task preventive week and two published
//! insertion runs on top of it (three and nine corrective tasks).
//!
//! Each fixture carries the scenario, the published placements verbatim,
//! the strictly recomputed totals, and an `as_printed` annotation holding
//! the values as they were originally printed, typos included.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{json, Scenario};
use crate::domain::{parse_iso, Money, Placement, Schedule, TaskKind};
use crate::error::{Error, Result};

const TABLEAU1: &str = include_str!("../../../../fixtures/tableau1.json");
const DYN3: &str = include_str!("../../../../fixtures/dyn3.json");
const DYN9: &str = include_str!("../../../../fixtures/dyn9.json");
const TABLEAU1_EXPECTED: &str = include_str!("../../../../fixtures/tableau1.expected.json");
const RUN3DYN_EXPECTED: &str = include_str!("../../../../fixtures/run3dyn.expected.json");
const RUN9DYN_EXPECTED: &str = include_str!("../../../../fixtures/run9dyn.expected.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureName {
    Tableau1,
    Run3dyn,
    Run9dyn,
}

impl FixtureName {
    pub const ALL: [FixtureName; 3] = [FixtureName::Tableau1, FixtureName::Run3dyn, FixtureName::Run9dyn];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Tableau1 => "tableau1",
            FixtureName::Run3dyn => "run3dyn",
            FixtureName::Run9dyn => "run9dyn",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FixtureName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}

/// Values exactly as they appear in the source listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedPlacement {
    /// `java.util.Date` style, e.g. `Fri Jan 02 08:00:00 GMT 2009`.
    pub start: String,
    pub end: String,
    pub hours: i64,
    pub resource: String,
    pub note: String,
    /// `None` where the listing is truncated.
    pub cost: Option<i64>,
    /// Resource given for the same task in the summary table, when it
    /// differs from the listing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_resource: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublishedPlacement {
    pub task_id: String,
    pub start: String,
    pub end: String,
    pub resource: String,
    pub as_printed: PrintedPlacement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictTotals {
    pub total_window_cost: Money,
    pub gap_rows: usize,
    pub idle_hours: i64,
    pub total_task_cost: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrintedTotals {
    pub window_hours: Option<Vec<i64>>,
    pub window_costs: Option<Vec<i64>>,
    pub total_window_cost: i64,
    pub total_task_cost: Option<i64>,
    pub global_cost: Option<i64>,
    pub reduction_percent: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExpectedDoc {
    fixture: FixtureName,
    scenario: String,
    dynamics: Option<String>,
    placements: Vec<PublishedPlacement>,
    expected: StrictTotals,
    as_printed: PrintedTotals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: FixtureName,
    /// Preventive week; for the insertion runs, its dynamic tasks are the
    /// corrective tasks in arrival order.
    pub scenario: Scenario,
    pub placements: Vec<PublishedPlacement>,
    pub expected: StrictTotals,
    pub as_printed: PrintedTotals,
}

pub fn load_fixture(name: FixtureName) -> Fixture {
    let (expected_text, dynamics) = match name {
        FixtureName::Tableau1 => (TABLEAU1_EXPECTED, None),
        FixtureName::Run3dyn => (RUN3DYN_EXPECTED, Some(DYN3)),
        FixtureName::Run9dyn => (RUN9DYN_EXPECTED, Some(DYN9)),
    };
    let mut scenario = json::parse_json(TABLEAU1).expect("bundled scenario is valid");
    if let Some(text) = dynamics {
        scenario.dynamic_tasks = json::parse_dynamic_tasks(text, &scenario.epoch).expect("bundled dynamics are valid");
        scenario.name = Some(name.as_str().to_string());
    }
    let doc: ExpectedDoc = serde_json::from_str(expected_text).expect("bundled expectations are valid");
    debug_assert_eq!(doc.fixture, name);
    Fixture {
        name,
        scenario,
        placements: doc.placements,
        expected: doc.expected,
        as_printed: doc.as_printed,
    }
}

/// Looks a fixture up by name.
pub fn load_fixture_named(name: &str) -> Result<Fixture> {
    Ok(load_fixture(name.parse()?))
}

/// The raw bundled file for a fixture-relative path such as `dyn3.json`.
pub fn bundled_file(path: &str) -> Option<&'static str> {
    match path {
        "tableau1.json" => Some(TABLEAU1),
        "dyn3.json" => Some(DYN3),
        "dyn9.json" => Some(DYN9),
        "tableau1.expected.json" => Some(TABLEAU1_EXPECTED),
        "run3dyn.expected.json" => Some(RUN3DYN_EXPECTED),
        "run9dyn.expected.json" => Some(RUN9DYN_EXPECTED),
        _ => None,
    }
}

impl Fixture {
    /// Rebuilds the published schedule verbatim. `t1`/`t2` of corrective
    /// tasks are the idle stretches around them in the published plan.
    pub fn published_schedule(&self) -> Result<Schedule> {
        let epoch = self.scenario.epoch;
        let mut placements = Vec::with_capacity(self.placements.len());
        for (i, p) in self.placements.iter().enumerate() {
            let path = format!("placements[{i}]");
            let task = self.scenario.task(&p.task_id).ok_or_else(|| {
                Error::validation(format!("{path}.task_id"), format!("unknown task {:?}", p.task_id))
            })?;
            if !self.scenario.resources.iter().any(|r| r.id == p.resource) {
                return Err(Error::validation(
                    format!("{path}.resource"),
                    format!("unknown resource reference {:?}", p.resource),
                ));
            }
            let at = |text: &str, field: &str| {
                parse_iso(text)
                    .and_then(|t| epoch.point_of(t))
                    .ok_or_else(|| Error::validation(format!("{path}.{field}"), format!("malformed timestamp {text:?}")))
            };
            let start = at(&p.start, "start")?;
            let end = at(&p.end, "end")?;
            placements.push(Placement {
                end,
                resource_id: Some(p.resource.clone()),
                ..Placement::of(task, start)
            });
        }
        let mut schedule = Schedule::from_placements(epoch, self.scenario.horizon, placements)?;
        let gaps = schedule.gaps();
        let with_slack: Vec<Placement> = schedule
            .placements()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let mut p = p.clone();
                if p.kind == TaskKind::Dynamic {
                    p.t1 = i.checked_sub(1).map_or(Default::default(), |g| gaps[g].length());
                    p.t2 = gaps.get(i).map_or(Default::default(), |g| g.length());
                }
                p
            })
            .collect();
        schedule = Schedule::from_placements(epoch, schedule.horizon(), with_slack)?;
        Ok(schedule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert_eq!("run9dyn".parse::<FixtureName>().unwrap(), FixtureName::Run9dyn);
        assert_eq!("nope".parse::<FixtureName>().unwrap_err().kind(), "unknown_fixture");
    }

    #[test]
    fn fixtures_load() {
        for name in FixtureName::ALL {
            let f = load_fixture(name);
            assert_eq!(f.scenario.preventive_tasks.len(), 10);
            assert_eq!(f.scenario.resources.len(), 10);
            let dyn_count = f.scenario.dynamic_tasks.len();
            assert_eq!(f.placements.len(), 10 + dyn_count);
            f.published_schedule().unwrap();
        }
    }
}
