use std::collections::BTreeSet;

use crate::domain::Task;
use crate::error::{Error, Result};

/// Orders tasks by release, then duration, then id. Fails on duplicate ids.
pub fn sort_tasks(tasks: &[Task]) -> Result<Vec<Task>> {
    let mut seen = BTreeSet::new();
    for (i, t) in tasks.iter().enumerate() {
        if !seen.insert(t.id.as_str()) {
            return Err(Error::validation(format!("tasks[{i}].id"), format!("duplicate task id {:?}", t.id)));
        }
    }
    let mut out = tasks.to_vec();
    out.sort_by(|a, b| {
        a.release
            .cmp(&b.release)
            .then(a.duration.cmp(&b.duration))
            .then_with(|| a.id.cmp(&b.id))
    });
    Ok(out)
}
