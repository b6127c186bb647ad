//! Value types shared by every other module: time, money, tasks,
//! resources and schedules. All of them are immutable values.

mod resource;
mod schedule;
mod task;
mod time;
mod value;

pub use resource::{Resource, MAX_NOTE};
pub use schedule::{subtract_busy, window_length, Gap, Placement, Schedule, Window};
pub use task::{Task, TaskKind, TaskType};
pub use time::{
    format_iso, format_java_gmt, parse_iso, Duration, Epoch, TimeInterval, TimePoint, MINUTES_PER_HOUR,
};
pub use value::{Competence, Money, ParseCompetenceError};

/// Price of one hour of idle or working time.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CostParams {
    pub hourly_rate: Money,
    #[serde(default = "default_currency")]
    pub currency_label: String,
    #[serde(default)]
    pub task_cost_mode: TaskCostMode,
}

/// How per-task cost is evaluated in a global cost report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskCostMode {
    /// duration × hourly rate
    #[default]
    Fixture,
    /// base cost plus earliness/tardiness penalties
    Deviation,
}

fn default_currency() -> String {
    "DHS".to_string()
}

impl CostParams {
    pub fn new(hourly_rate: Money) -> Self {
        CostParams {
            hourly_rate,
            currency_label: default_currency(),
            task_cost_mode: TaskCostMode::Fixture,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.hourly_rate.units() <= 0 {
            return Err(crate::Error::validation(
                "cost_params.hourly_rate",
                "hourly rate must be positive",
            ));
        }
        Ok(())
    }
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams::new(Money::new(100))
    }
}
