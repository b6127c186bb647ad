use serde::{Deserialize, Serialize};

use super::task::TaskType;
use super::time::TimeInterval;
use super::value::Competence;
use crate::error::{Error, Result};

/// Highest admissible note on the competence scale.
pub const MAX_NOTE: i64 = 20;

/// A technician (or crew) that can be bound to tasks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub id: String,
    /// Overall competence score in `[0, 20]`.
    pub note: Competence,
    /// Competence per task type. A single-type scenario uses `[note]`.
    pub competence_row: Vec<Competence>,
    /// Calendar commitments outside this schedule, sorted and disjoint.
    pub busy: Vec<TimeInterval>,
}

impl Resource {
    /// Single-type resource whose row is just its note.
    pub fn with_note(id: impl Into<String>, note: Competence) -> Self {
        Resource {
            id: id.into(),
            competence_row: vec![note.clone()],
            note,
            busy: Vec::new(),
        }
    }

    pub fn with_busy(mut self, busy: Vec<TimeInterval>) -> Self {
        self.busy = busy;
        self
    }

    pub fn competence(&self, k: TaskType) -> Option<&Competence> {
        self.competence_row.get(k)
    }

    pub fn is_free_during(&self, interval: &TimeInterval) -> bool {
        !self.busy.iter().any(|b| b.overlaps(interval))
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        if self.id.trim().is_empty() {
            return Err(Error::validation(format!("{path}.id"), "resource id must not be empty"));
        }
        let in_scale = |c: &Competence| !c.is_negative() && *c <= Competence::from_integer(MAX_NOTE);
        if !in_scale(&self.note) {
            return Err(Error::validation(
                format!("{path}.note"),
                format!("note {} outside [0, {MAX_NOTE}]", self.note),
            ));
        }
        if self.competence_row.is_empty() {
            return Err(Error::validation(
                format!("{path}.competence_row"),
                "competence row must have at least one entry",
            ));
        }
        if self.competence_row.len() == 1 && self.competence_row[0] != self.note {
            return Err(Error::validation(
                format!("{path}.competence_row[0]"),
                "single-type competence row must equal the note",
            ));
        }
        for (k, c) in self.competence_row.iter().enumerate() {
            if c.is_negative() {
                return Err(Error::validation(
                    format!("{path}.competence_row[{k}]"),
                    "competence must be non-negative",
                ));
            }
        }
        for (i, pair) in self.busy.windows(2).enumerate() {
            if pair[0].start > pair[1].start {
                return Err(Error::validation(format!("{path}.busy[{}]", i + 1), "busy intervals must be sorted"));
            }
            if pair[0].overlaps(&pair[1]) {
                return Err(Error::validation(format!("{path}.busy[{}]", i + 1), "busy intervals overlap"));
            }
        }
        Ok(())
    }
}
