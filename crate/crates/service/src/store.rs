//! Session registry with optional append-only event log.
//!
//! The log holds one JSON object per line: a `created` event carrying the
//! canonical scenario, then one `mutated` event per accepted commit or
//! undo. Replaying it in order restores every session exactly.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, MutexGuard, PoisonError, RwLock};

use serde::{Deserialize, Serialize};

use maintsched_core::scenario::{parse_json, to_json};
use maintsched_core::{Error, InsertionPolicy, Scenario};

use crate::error::{ServiceError, ServiceResult};
use crate::session::{Mutation, Outcome, Session};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum LogEvent {
    Created {
        session: String,
        policy: InsertionPolicy,
        scenario: serde_json::Value,
    },
    Mutated {
        session: String,
        revision: u64,
        mutation: Mutation,
    },
}

#[derive(Debug)]
struct EventLog {
    path: PathBuf,
    file: File,
}

impl EventLog {
    fn open(path: &Path) -> std::io::Result<EventLog> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(EventLog {
            path: path.to_path_buf(),
            file,
        })
    }

    fn append(&mut self, event: &LogEvent) -> std::io::Result<()> {
        let mut line = serde_json::to_string(event).map_err(std::io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}

/// Reads every event of a log file.
pub fn read_log(path: &Path) -> ServiceResult<Vec<LogEvent>> {
    let reader = BufReader::new(File::open(path)?);
    let mut events = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            column: e.column(),
            message: format!("{}: {e}", path.display()),
        })?;
        events.push(event);
    }
    Ok(events)
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(PoisonError::into_inner)
}

/// All live sessions. Mutations of one session are serialized by its own
/// lock; sessions never block each other.
#[derive(Debug)]
pub struct SessionStore {
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
    log: Option<Mutex<EventLog>>,
    default_policy: InsertionPolicy,
}

impl SessionStore {
    pub fn in_memory(default_policy: InsertionPolicy) -> SessionStore {
        SessionStore {
            sessions: RwLock::new(BTreeMap::new()),
            next_id: AtomicU64::new(1),
            log: None,
            default_policy,
        }
    }

    /// Restores the sessions recorded in `path` (if it exists) and appends
    /// further events to it.
    pub fn with_log(path: &Path, default_policy: InsertionPolicy) -> ServiceResult<SessionStore> {
        let mut store = SessionStore::in_memory(default_policy);
        if path.exists() {
            store.restore(read_log(path)?)?;
        }
        store.log = Some(Mutex::new(EventLog::open(path)?));
        Ok(store)
    }

    fn restore(&mut self, events: Vec<LogEvent>) -> ServiceResult<()> {
        let sessions = self.sessions.get_mut().unwrap_or_else(PoisonError::into_inner);
        let mut max_id = 0;
        for event in events {
            match event {
                LogEvent::Created {
                    session,
                    policy,
                    scenario,
                } => {
                    let scenario = parse_json(&scenario.to_string())?;
                    if let Some(n) = session.strip_prefix('s').and_then(|n| n.parse::<u64>().ok()) {
                        max_id = max_id.max(n);
                    }
                    let s = Session::create(session.clone(), scenario, policy)?;
                    sessions.insert(session, Arc::new(Mutex::new(s)));
                }
                LogEvent::Mutated {
                    session,
                    revision,
                    mutation,
                } => {
                    let entry = sessions.get(&session).ok_or_else(|| ServiceError::NotFound(session.clone()))?;
                    let mut s = lock(entry);
                    let expected = revision
                        .checked_sub(1)
                        .ok_or_else(|| ServiceError::BadRequest(format!("event log: revision 0 for {session}")))?;
                    let pending = s.prepare(mutation, Some(expected))?;
                    s.accept(pending);
                }
            }
        }
        self.next_id = AtomicU64::new(max_id + 1);
        Ok(())
    }

    pub fn default_policy(&self) -> InsertionPolicy {
        self.default_policy
    }

    pub fn log_path(&self) -> Option<PathBuf> {
        self.log.as_ref().map(|l| lock(l).path.clone())
    }

    pub fn ids(&self) -> Vec<String> {
        self.sessions.read().unwrap_or_else(PoisonError::into_inner).keys().cloned().collect()
    }

    fn entry(&self, id: &str) -> ServiceResult<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .unwrap_or_else(PoisonError::into_inner)
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(id.to_string()))
    }

    fn log(&self, event: &LogEvent) -> ServiceResult<()> {
        if let Some(log) = &self.log {
            lock(log).append(event)?;
        }
        Ok(())
    }

    /// Creates a session and returns `f` applied to it.
    pub fn create<R>(
        &self,
        scenario: Scenario,
        policy: Option<InsertionPolicy>,
        f: impl FnOnce(&Session) -> R,
    ) -> ServiceResult<R> {
        let policy = policy.unwrap_or(self.default_policy);
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::SeqCst));
        let session = Session::create(id.clone(), scenario, policy)?;
        let canonical: serde_json::Value =
            serde_json::from_str(&to_json(session.scenario())).expect("canonical scenario is JSON");
        self.log(&LogEvent::Created {
            session: id.clone(),
            policy,
            scenario: canonical,
        })?;
        let out = f(&session);
        self.sessions
            .write()
            .unwrap_or_else(PoisonError::into_inner)
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(out)
    }

    /// Runs `f` on a consistent snapshot of the session.
    pub fn read<R>(&self, id: &str, f: impl FnOnce(&Session) -> R) -> ServiceResult<R> {
        let entry = self.entry(id)?;
        let s = lock(&entry);
        Ok(f(&s))
    }

    /// Validates, logs and applies a mutation, then runs `f` on the new
    /// state. Nothing changes if any step fails.
    pub fn mutate<R>(
        &self,
        id: &str,
        mutation: Mutation,
        expected_revision: Option<u64>,
        f: impl FnOnce(&Session, Option<&Outcome>) -> R,
    ) -> ServiceResult<R> {
        let entry = self.entry(id)?;
        let mut s = lock(&entry);
        let pending = s.prepare(mutation, expected_revision)?;
        self.log(&LogEvent::Mutated {
            session: id.to_string(),
            revision: s.revision() + 1,
            mutation: pending.mutation.clone(),
        })?;
        let outcome = pending.outcome().cloned();
        s.accept(pending);
        Ok(f(&s, outcome.as_ref()))
    }
}
