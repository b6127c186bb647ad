use serde::{Deserialize, Serialize};

use super::task::{Task, TaskKind};
use super::time::{Duration, Epoch, TimeInterval, TimePoint};
use crate::error::{Error, Result};

/// A maximal idle stretch between two consecutive placements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    /// 1-based ordinal of the gap in schedule order.
    pub index: usize,
    pub start: TimePoint,
    pub end: TimePoint,
}

impl Window {
    pub fn length(&self) -> Duration {
        self.end - self.start
    }

    pub fn interval(&self) -> TimeInterval {
        TimeInterval {
            start: self.start,
            end: self.end,
        }
    }
}

pub fn window_length(w: &Window) -> Duration {
    w.length()
}

/// Gap between placement `index` and `index + 1` (1-based). Zero-length gaps
/// are kept here so reports can list them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub index: usize,
    pub start: TimePoint,
    pub end: TimePoint,
}

impl Gap {
    pub fn length(&self) -> Duration {
        self.end - self.start
    }

    pub fn as_window(&self) -> Option<Window> {
        (self.start < self.end).then_some(Window {
            index: self.index,
            start: self.start,
            end: self.end,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub task_id: String,
    pub title: String,
    pub kind: TaskKind,
    pub start: TimePoint,
    pub end: TimePoint,
    pub resource_id: Option<String>,
    /// Slack left before the task inside its host window.
    pub t1: Duration,
    /// Slack left after the task inside its host window.
    pub t2: Duration,
    /// Placed after the last task because no window could hold it.
    #[serde(default)]
    pub appended: bool,
}

impl Placement {
    /// Places `task` at `start` with no slack bookkeeping.
    pub fn of(task: &Task, start: TimePoint) -> Self {
        Placement {
            task_id: task.id.clone(),
            title: task.title.clone(),
            kind: task.kind,
            start,
            end: start + task.duration,
            resource_id: None,
            t1: Duration::ZERO,
            t2: Duration::ZERO,
            appended: false,
        }
    }

    pub fn interval(&self) -> TimeInterval {
        TimeInterval {
            start: self.start,
            end: self.end,
        }
    }

    pub fn duration(&self) -> Duration {
        self.end - self.start
    }
}

/// Placements on the single machine, ordered by start and pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    epoch: Epoch,
    horizon: TimeInterval,
    placements: Vec<Placement>,
}

impl Schedule {
    pub fn empty(epoch: Epoch, horizon: TimeInterval) -> Self {
        Schedule {
            epoch,
            horizon,
            placements: Vec::new(),
        }
    }

    /// Builds a schedule from placements in any order. Fails when two
    /// placements overlap or a placement has `end < start`.
    pub fn from_placements(epoch: Epoch, horizon: TimeInterval, mut placements: Vec<Placement>) -> Result<Self> {
        for (i, p) in placements.iter().enumerate() {
            if p.end <= p.start {
                return Err(Error::validation(
                    format!("placements[{i}]"),
                    format!("placement of {} must have positive length", p.task_id),
                ));
            }
        }
        placements.sort_by(|a, b| a.start.cmp(&b.start).then_with(|| a.task_id.cmp(&b.task_id)));
        for pair in placements.windows(2) {
            if pair[0].interval().overlaps(&pair[1].interval()) {
                return Err(Error::validation(
                    "placements",
                    format!("{} overlaps {} on the single machine", pair[0].task_id, pair[1].task_id),
                ));
            }
        }
        let mut horizon = horizon;
        if let (Some(first), Some(last)) = (placements.first(), placements.last()) {
            horizon = horizon.hull(&TimeInterval {
                start: first.start,
                end: last.end,
            });
        }
        Ok(Schedule {
            epoch,
            horizon,
            placements,
        })
    }

    pub fn epoch(&self) -> Epoch {
        self.epoch
    }

    pub fn horizon(&self) -> TimeInterval {
        self.horizon
    }

    pub fn placements(&self) -> &[Placement] {
        &self.placements
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn placement(&self, task_id: &str) -> Option<&Placement> {
        self.placements.iter().find(|p| p.task_id == task_id)
    }

    pub fn last_end(&self) -> Option<TimePoint> {
        self.placements.last().map(|p| p.end)
    }

    /// Returns a new schedule with `p` added, extending the horizon if `p`
    /// ends beyond it.
    pub fn with_placement(&self, p: Placement) -> Result<Schedule> {
        if p.end <= p.start {
            return Err(Error::validation("placement", "placement must have positive length"));
        }
        if self.placements.iter().any(|q| q.task_id == p.task_id) {
            return Err(Error::validation(
                "placement.task_id",
                format!("task {} is already scheduled", p.task_id),
            ));
        }
        let at = self.placements.partition_point(|q| q.start < p.start);
        let clashes = |q: Option<&Placement>| q.is_some_and(|q| q.interval().overlaps(&p.interval()));
        if clashes(at.checked_sub(1).and_then(|i| self.placements.get(i))) || clashes(self.placements.get(at)) {
            return Err(Error::validation(
                "placement",
                format!("{} overlaps an existing placement", p.task_id),
            ));
        }
        let mut next = self.clone();
        next.horizon = next.horizon.hull(&p.interval());
        next.placements.insert(at, p);
        Ok(next)
    }

    /// Gap rows between consecutive placements, zero-length ones included.
    pub fn gaps(&self) -> Vec<Gap> {
        self.placements
            .windows(2)
            .enumerate()
            .map(|(i, pair)| Gap {
                index: i + 1,
                start: pair[0].end,
                end: pair[1].start,
            })
            .collect()
    }

    /// Non-empty gaps only.
    pub fn windows(&self) -> Vec<Window> {
        self.gaps().iter().filter_map(Gap::as_window).collect()
    }

    /// Σ window lengths.
    pub fn idle_time(&self) -> Duration {
        self.gaps().iter().map(Gap::length).sum()
    }

    pub fn busy_time(&self) -> Duration {
        self.placements.iter().map(Placement::duration).sum()
    }

    /// From the first placement's start to the last placement's end.
    pub fn span(&self) -> Duration {
        match (self.placements.first(), self.placements.last()) {
            (Some(first), Some(last)) => last.end - first.start,
            _ => Duration::ZERO,
        }
    }

    pub fn placements_of(&self, resource_id: &str) -> impl Iterator<Item = &Placement> {
        let rid = resource_id.to_string();
        self.placements
            .iter()
            .filter(move |p| p.resource_id.as_deref() == Some(rid.as_str()))
    }
}

/// Maximal free stretches of `horizon` not covered by `busy`. `busy` must be
/// sorted and pairwise disjoint; parts of it outside the horizon are ignored.
pub fn subtract_busy(horizon: TimeInterval, busy: &[TimeInterval]) -> Result<Vec<Window>> {
    for (i, pair) in busy.windows(2).enumerate() {
        if pair[1].start < pair[0].start {
            return Err(Error::validation(format!("busy[{}]", i + 1), "busy intervals must be sorted"));
        }
        if pair[0].overlaps(&pair[1]) {
            return Err(Error::validation(
                format!("busy[{}]", i + 1),
                format!("{} overlaps {}", pair[1], pair[0]),
            ));
        }
    }
    let mut free = Vec::new();
    let mut cursor = horizon.start;
    let mut push = |start: TimePoint, end: TimePoint| {
        if start < end {
            free.push(Window {
                index: free.len() + 1,
                start,
                end,
            });
        }
    };
    for b in busy {
        let start = b.start.clamp(horizon.start, horizon.end);
        let end = b.end.clamp(horizon.start, horizon.end);
        if start > cursor {
            push(cursor, start);
        }
        cursor = cursor.max(end);
    }
    push(cursor, horizon.end);
    Ok(free)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> TimeInterval {
        TimeInterval::new(TimePoint::from_minutes(a), TimePoint::from_minutes(b)).unwrap()
    }

    fn bounds(ws: &[Window]) -> Vec<(i64, i64)> {
        ws.iter().map(|w| (w.start.minutes(), w.end.minutes())).collect()
    }

    #[test]
    fn subtract_busy_interior() {
        let free = subtract_busy(iv(0, 10), &[iv(2, 4), iv(6, 7)]).unwrap();
        assert_eq!(bounds(&free), vec![(0, 2), (4, 6), (7, 10)]);
        assert_eq!(free.iter().map(|w| w.index).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn subtract_busy_nothing_busy() {
        assert_eq!(bounds(&subtract_busy(iv(0, 10), &[]).unwrap()), vec![(0, 10)]);
    }

    #[test]
    fn subtract_busy_touching_and_edges() {
        let free = subtract_busy(iv(0, 10), &[iv(0, 3), iv(3, 5), iv(8, 12)]).unwrap();
        assert_eq!(bounds(&free), vec![(5, 8)]);
    }

    #[test]
    fn subtract_busy_rejects_overlap() {
        let err = subtract_busy(iv(0, 10), &[iv(2, 5), iv(4, 6)]).unwrap_err();
        assert_eq!(err.kind(), "validation");
    }

    #[test]
    fn window_length_one_minute() {
        let w = Window {
            index: 1,
            start: TimePoint::from_minutes(500),
            end: TimePoint::from_minutes(501),
        };
        assert_eq!(window_length(&w), Duration::from_minutes(1));
    }

    fn placed(id: &str, a: i64, b: i64) -> Placement {
        Placement::of(&Task::preventive(id, TimePoint::from_minutes(a), TimePoint::from_minutes(b)), TimePoint::from_minutes(a))
    }

    #[test]
    fn from_placements_sorts_and_rejects_overlap() {
        let s = Schedule::from_placements(Epoch::default(), iv(0, 0), vec![placed("b", 5, 8), placed("a", 0, 2)]).unwrap();
        assert_eq!(s.placements()[0].task_id, "a");
        assert_eq!(s.horizon(), iv(0, 8));
        assert!(Schedule::from_placements(Epoch::default(), iv(0, 10), vec![placed("a", 0, 5), placed("b", 4, 8)]).is_err());
    }

    #[test]
    fn gaps_keep_zero_rows_windows_drop_them() {
        let s = Schedule::from_placements(
            Epoch::default(),
            iv(0, 20),
            vec![placed("a", 0, 2), placed("b", 2, 4), placed("c", 7, 9)],
        )
        .unwrap();
        assert_eq!(s.gaps().len(), 2);
        let ws = s.windows();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].index, 2);
        assert_eq!(s.idle_time(), Duration::from_minutes(3));
        assert_eq!(s.span(), s.idle_time() + s.busy_time());
    }

    #[test]
    fn with_placement_rejects_clash_and_duplicates() {
        let s = Schedule::from_placements(Epoch::default(), iv(0, 20), vec![placed("a", 0, 2), placed("c", 7, 9)]).unwrap();
        assert!(s.with_placement(placed("x", 1, 3)).is_err());
        assert!(s.with_placement(placed("x", 6, 8)).is_err());
        assert!(s.with_placement(placed("a", 3, 4)).is_err());
        let next = s.with_placement(placed("b", 2, 7)).unwrap();
        assert_eq!(next.idle_time(), Duration::ZERO);
        // original untouched
        assert_eq!(s.len(), 2);
        let extended = s.with_placement(placed("z", 30, 31)).unwrap();
        assert_eq!(extended.horizon().end, TimePoint::from_minutes(31));
    }
}
