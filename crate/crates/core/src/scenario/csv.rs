//! Flat CSV import in the layout of a hand-kept maintenance table:
//! `N°, Durée (H), Début, Fin, Coût, Ressource, type`.
//!
//! The delimiter is sniffed from the header (tab, `;` or `,`). Dates may be
//! ISO-8601 or day-first (`2/1/09 8:00`, `02/01/2009 10:00`). The resource
//! column reads `R8=15,75` (id and note) or a bare id defined on another
//! row; each task is pinned to the resource on its row.

use std::collections::BTreeMap;

use chrono::{DateTime, NaiveDateTime, Utc};

use super::Scenario;
use crate::domain::{parse_iso, Competence, Duration, Epoch, Resource, Task, TaskKind, TimeInterval, TimePoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Id,
    Hours,
    Start,
    End,
    Resource,
    Kind,
}

fn classify(header: &str) -> Option<Column> {
    let h = header.trim().to_lowercase();
    let h = h
        .replace(['é', 'è'], "e")
        .replace('û', "u")
        .replace('°', "");
    let starts = |p: &str| h.starts_with(p);
    if starts("ntache") || h == "n" || h == "no" || h == "id" || starts("task") {
        Some(Column::Id)
    } else if starts("duree") || starts("duration") {
        Some(Column::Hours)
    } else if starts("debut") || h == "start" || h == "release" {
        Some(Column::Start)
    } else if h == "fin" || h == "end" || h == "due" {
        Some(Column::End)
    } else if h.contains("ressour") || h.contains("resource") {
        Some(Column::Resource)
    } else if starts("type") || h == "kind" {
        Some(Column::Kind)
    } else {
        None
    }
}

fn parse_datetime(text: &str) -> Option<DateTime<Utc>> {
    if let Some(at) = parse_iso(text) {
        return Some(at);
    }
    let text = text.trim();
    let date = text.split_whitespace().next()?;
    let year = date.split('/').nth(2)?;
    let fmt = if year.len() == 4 { "%d/%m/%Y %H:%M" } else { "%d/%m/%y %H:%M" };
    NaiveDateTime::parse_from_str(text, fmt).ok().map(|n| n.and_utc())
}

fn parse_hours(text: &str) -> Option<Duration> {
    let c: Competence = text.parse().ok()?;
    let minutes = c.ratio() * 60;
    (minutes.is_integer() && *minutes.numer() >= 0).then(|| Duration::from_minutes(minutes.to_integer()))
}

struct Row {
    line: u64,
    id: String,
    hours: Option<Duration>,
    start: DateTime<Utc>,
    end: DateTime<Utc>,
    resource: Option<(String, Option<Competence>)>,
    kind: TaskKind,
}

/// Imports a scenario from CSV text. The epoch is the earliest start.
pub fn parse_csv(text: &str) -> Result<Scenario> {
    let first_line = text.lines().next().unwrap_or_default();
    let delimiter = if first_line.contains('\t') {
        b'\t'
    } else if first_line.contains(';') {
        b';'
    } else {
        b','
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers = reader.headers().map_err(csv_error)?.clone();
    let mut columns: BTreeMap<usize, Column> = BTreeMap::new();
    for (i, h) in headers.iter().enumerate() {
        if let Some(c) = classify(h) {
            // first matching header wins
            if !columns.values().any(|&seen| seen == c) {
                columns.insert(i, c);
            }
        }
    }
    for required in [Column::Id, Column::Start, Column::End] {
        if !columns.values().any(|&c| c == required) {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("missing {required:?} column in header"),
            });
        }
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let field = |want: Column| {
            columns
                .iter()
                .find(|(_, &c)| c == want)
                .and_then(|(&i, _)| record.get(i))
                .map(str::trim)
                .unwrap_or("")
        };
        let at = |col: Column, name: &str| {
            let raw = field(col);
            parse_datetime(raw)
                .ok_or_else(|| Error::validation(format!("line {line}, column {name}"), format!("malformed timestamp {raw:?}")))
        };
        let id = field(Column::Id).to_string();
        if id.is_empty() {
            return Err(Error::validation(format!("line {line}, column id"), "missing task id"));
        }
        let hours = match field(Column::Hours) {
            "" => None,
            raw => Some(parse_hours(raw).ok_or_else(|| {
                Error::validation(format!("line {line}, column duration"), format!("malformed hours {raw:?}"))
            })?),
        };
        let resource = match field(Column::Resource) {
            "" => None,
            raw => Some(match raw.split_once('=') {
                Some((rid, note)) => {
                    let note = note.parse::<Competence>().map_err(|e| {
                        Error::validation(format!("line {line}, column resource"), e.to_string())
                    })?;
                    (rid.trim().to_string(), Some(note))
                }
                None => (raw.to_string(), None),
            }),
        };
        let kind = match field(Column::Kind).to_lowercase().as_str() {
            "" | "preventive" | "preventif" | "préventive" => TaskKind::Preventive,
            "dynamic" | "dynamique" | "corrective" => TaskKind::Dynamic,
            other => {
                return Err(Error::validation(format!("line {line}, column type"), format!("unknown task type {other:?}")))
            }
        };
        rows.push(Row {
            line,
            id,
            hours,
            start: at(Column::Start, "start")?,
            end: at(Column::End, "end")?,
            resource,
            kind,
        });
    }

    let mut notes: BTreeMap<String, Competence> = BTreeMap::new();
    for row in &rows {
        if let Some((rid, Some(note))) = &row.resource {
            match notes.get(rid) {
                Some(prev) if prev != note => {
                    return Err(Error::validation(
                        format!("line {}, column resource", row.line),
                        format!("resource {rid} has conflicting notes {prev} and {note}"),
                    ))
                }
                _ => {
                    notes.insert(rid.clone(), note.clone());
                }
            }
        }
    }
    for row in &rows {
        if let Some((rid, None)) = &row.resource {
            if !notes.contains_key(rid) {
                return Err(Error::validation(
                    format!("line {}, column resource", row.line),
                    format!("unknown resource reference {rid:?}"),
                ));
            }
        }
    }

    let epoch = Epoch::new(rows.iter().map(|r| r.start).min().unwrap_or(DateTime::<Utc>::UNIX_EPOCH));
    let mut scenario = Scenario::empty(epoch);
    scenario.resources = notes.into_iter().map(|(id, note)| Resource::with_note(id, note)).collect();
    for row in rows {
        let point = |at: DateTime<Utc>, name: &str| {
            epoch.point_of(at).ok_or_else(|| {
                Error::validation(format!("line {}, column {name}", row.line), "timestamp is not on a whole minute")
            })
        };
        let release = point(row.start, "start")?;
        let due = point(row.end, "end")?;
        let mut task = Task::new(row.id, row.kind, release, due);
        if let Some(h) = row.hours {
            task.duration = h;
        }
        task.pinned_resource = row.resource.map(|(rid, _)| rid);
        match task.kind {
            TaskKind::Preventive => scenario.preventive_tasks.push(task),
            TaskKind::Dynamic => scenario.dynamic_tasks.push(task),
        }
    }
    scenario.horizon = scenario
        .preventive_tasks
        .iter()
        .map(Task::planned_interval)
        .reduce(|a, b| a.hull(&b))
        .unwrap_or(TimeInterval {
            start: TimePoint::ZERO,
            end: TimePoint::ZERO,
        });
    scenario.validate()?;
    Ok(scenario)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::Parse {
        line,
        column: 0,
        message: e.to_string(),
    }
}
