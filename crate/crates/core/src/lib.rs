//! Deterministic single-machine maintenance scheduling.
//!
//! Preventive tasks form a baseline plan; the idle stretches between them
//! ("windows") are priced at an hourly rate as lost cost. Corrective tasks
//! that arrive later are inserted into those windows to drive the lost cost
//! down, and every task is bound to the most competent free technician.
//!
//! ```
//! use maintsched_core::scenario::{load_fixture, FixtureName};
//!
//! let fixture = load_fixture(FixtureName::Run3dyn);
//! let run = fixture.scenario.run().unwrap();
//! assert_eq!(run.baseline_report.total_window_cost.units(), 13100);
//! assert_eq!(run.report.total_window_cost.units(), 8300);
//! ```

pub mod costing;
pub mod domain;
mod error;
pub mod scenario;
pub mod scheduler;

pub use costing::{CostReport, Reduction};
pub use domain::{
    CostParams, Competence, Duration, Epoch, Money, Placement, Resource, Schedule, Task, TaskKind, TimeInterval,
    TimePoint, Window,
};
pub use error::{Error, Result};
pub use scenario::{Format, Run, Scenario};
pub use scheduler::InsertionPolicy;
