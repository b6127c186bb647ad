//! Integer-minute time arithmetic.
//!
//! A [`TimePoint`] counts minutes since the scenario's own epoch and a
//! [`Duration`] is a non-negative count of minutes. Nothing in here touches
//! floating point: every window, slack and horizon computation is exact.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use chrono::{DateTime, TimeDelta, Utc};
use serde::{Deserialize, Serialize};

pub const MINUTES_PER_HOUR: i64 = 60;

/// Minutes elapsed since the scenario epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimePoint(i64);

impl TimePoint {
    pub const ZERO: TimePoint = TimePoint(0);

    pub const fn from_minutes(minutes: i64) -> Self {
        TimePoint(minutes)
    }

    pub const fn from_hours(hours: i64) -> Self {
        TimePoint(hours * MINUTES_PER_HOUR)
    }

    pub const fn minutes(self) -> i64 {
        self.0
    }

    /// `self - earlier`, or `None` when `earlier` lies after `self`.
    pub fn checked_since(self, earlier: TimePoint) -> Option<Duration> {
        self.0.checked_sub(earlier.0).and_then(Duration::try_from_minutes)
    }

    /// Distance between the two points regardless of order.
    pub fn abs_diff(self, other: TimePoint) -> Duration {
        Duration(self.0.abs_diff(other.0) as i64)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t+{}", Duration(self.0.max(0)))?;
        Ok(())
    }
}

/// A non-negative span of whole minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Duration(i64);

impl Duration {
    pub const ZERO: Duration = Duration(0);

    /// Panics on a negative count; use [`Duration::try_from_minutes`] for
    /// untrusted input.
    pub const fn from_minutes(minutes: i64) -> Self {
        assert!(minutes >= 0, "negative duration");
        Duration(minutes)
    }

    pub const fn from_hours(hours: i64) -> Self {
        Duration::from_minutes(hours * MINUTES_PER_HOUR)
    }

    pub const fn try_from_minutes(minutes: i64) -> Option<Self> {
        if minutes >= 0 {
            Some(Duration(minutes))
        } else {
            None
        }
    }

    pub const fn minutes(self) -> i64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Whole hours when the span is an exact number of hours.
    pub const fn whole_hours(self) -> Option<i64> {
        if self.0 % MINUTES_PER_HOUR == 0 {
            Some(self.0 / MINUTES_PER_HOUR)
        } else {
            None
        }
    }

    pub fn hours_f64(self) -> f64 {
        self.0 as f64 / MINUTES_PER_HOUR as f64
    }

    pub fn checked_sub(self, rhs: Duration) -> Option<Duration> {
        Duration::try_from_minutes(self.0 - rhs.0)
    }

    pub fn saturating_sub(self, rhs: Duration) -> Duration {
        Duration((self.0 - rhs.0).max(0))
    }
}

impl TryFrom<i64> for Duration {
    type Error = String;

    fn try_from(value: i64) -> Result<Self, Self::Error> {
        Duration::try_from_minutes(value).ok_or_else(|| format!("negative duration: {value} min"))
    }
}

impl From<Duration> for i64 {
    fn from(d: Duration) -> i64 {
        d.0
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (h, m) = (self.0 / MINUTES_PER_HOUR, self.0 % MINUTES_PER_HOUR);
        if m == 0 {
            write!(f, "{h}h")
        } else {
            write!(f, "{h}h{m:02}")
        }
    }
}

impl Add for Duration {
    type Output = Duration;
    fn add(self, rhs: Duration) -> Duration {
        Duration(self.0 + rhs.0)
    }
}

impl AddAssign for Duration {
    fn add_assign(&mut self, rhs: Duration) {
        self.0 += rhs.0;
    }
}

impl Sum for Duration {
    fn sum<I: Iterator<Item = Duration>>(iter: I) -> Duration {
        iter.fold(Duration::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Duration> for Duration {
    fn sum<I: Iterator<Item = &'a Duration>>(iter: I) -> Duration {
        iter.copied().sum()
    }
}

impl Add<Duration> for TimePoint {
    type Output = TimePoint;
    fn add(self, rhs: Duration) -> TimePoint {
        TimePoint(self.0 + rhs.0)
    }
}

impl Sub for TimePoint {
    type Output = Duration;

    /// Panics when `rhs` is later than `self`.
    fn sub(self, rhs: TimePoint) -> Duration {
        self.checked_since(rhs)
            .unwrap_or_else(|| panic!("time went backwards: {} - {}", self.0, rhs.0))
    }
}

/// Half-open interval `[start, end)` of scenario time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeInterval {
    pub start: TimePoint,
    pub end: TimePoint,
}

impl TimeInterval {
    /// `None` when `end < start`.
    pub fn new(start: TimePoint, end: TimePoint) -> Option<Self> {
        (start <= end).then_some(TimeInterval { start, end })
    }

    pub fn starting_at(start: TimePoint, length: Duration) -> Self {
        TimeInterval { start, end: start + length }
    }

    pub fn length(&self) -> Duration {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    /// True when the two intervals share a non-empty stretch of time.
    /// Touching endpoints do not overlap.
    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains_interval(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn hull(&self, other: &TimeInterval) -> TimeInterval {
        TimeInterval {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
        }
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start.minutes(), self.end.minutes())
    }
}

/// Absolute anchor of a scenario's minute grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Epoch(DateTime<Utc>);

impl Epoch {
    pub fn new(at: DateTime<Utc>) -> Self {
        Epoch(at)
    }

    pub fn datetime(&self) -> DateTime<Utc> {
        self.0
    }

    pub fn at(&self, t: TimePoint) -> DateTime<Utc> {
        self.0 + TimeDelta::minutes(t.minutes())
    }

    /// Converts an absolute instant to the scenario grid. `None` when the
    /// instant is not on a whole minute relative to the epoch.
    pub fn point_of(&self, at: DateTime<Utc>) -> Option<TimePoint> {
        let delta = at - self.0;
        let secs = delta.num_seconds();
        if delta.subsec_nanos() != 0 || secs % 60 != 0 {
            return None;
        }
        Some(TimePoint(secs / 60))
    }

    /// RFC 3339 / ISO-8601 UTC with a `Z` suffix and second precision.
    pub fn iso(&self, t: TimePoint) -> String {
        format_iso(self.at(t))
    }
}

impl Default for Epoch {
    fn default() -> Self {
        Epoch(DateTime::<Utc>::UNIX_EPOCH)
    }
}

pub fn format_iso(at: DateTime<Utc>) -> String {
    at.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

pub fn parse_iso(text: &str) -> Option<DateTime<Utc>> {
    DateTime::parse_from_rfc3339(text.trim())
        .ok()
        .map(|d| d.with_timezone(&Utc))
}

/// Formats like `java.util.Date#toString` under GMT, e.g.
/// `Fri Jan 02 08:00:00 GMT 2009`.
pub fn format_java_gmt(at: DateTime<Utc>) -> String {
    at.format("%a %b %d %H:%M:%S GMT %Y").to_string()
}
