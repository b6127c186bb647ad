use std::net::SocketAddr;
use std::path::PathBuf;

use maintsched_core::InsertionPolicy;

use crate::error::{ServiceError, ServiceResult};

pub const ENV_LISTEN: &str = "MAINTSCHED_LISTEN";
pub const ENV_EVENT_LOG: &str = "MAINTSCHED_EVENT_LOG";
pub const ENV_POLICY: &str = "MAINTSCHED_POLICY";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    /// Append-only JSONL log; sessions are in memory only when `None`.
    pub event_log: Option<PathBuf>,
    pub default_policy: InsertionPolicy,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            event_log: None,
            default_policy: InsertionPolicy::FirstFit,
        }
    }
}

impl ServiceConfig {
    /// Defaults overridden by `MAINTSCHED_LISTEN`, `MAINTSCHED_EVENT_LOG`
    /// and `MAINTSCHED_POLICY`.
    pub fn from_env() -> ServiceResult<Self> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(var: impl Fn(&str) -> Option<String>) -> ServiceResult<Self> {
        let mut c = ServiceConfig::default();
        if let Some(v) = var(ENV_LISTEN) {
            c.listen = v
                .parse()
                .map_err(|e| ServiceError::BadRequest(format!("{ENV_LISTEN}={v:?}: {e}")))?;
        }
        if let Some(v) = var(ENV_EVENT_LOG).filter(|v| !v.is_empty()) {
            c.event_log = Some(PathBuf::from(v));
        }
        if let Some(v) = var(ENV_POLICY) {
            c.default_policy = v.parse()?;
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides() {
        let c = ServiceConfig::from_lookup(|k| match k {
            ENV_LISTEN => Some("0.0.0.0:9000".into()),
            ENV_POLICY => Some("best_fit".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(c.listen.port(), 9000);
        assert_eq!(c.default_policy, InsertionPolicy::BestFit);
        assert_eq!(c.event_log, None);
    }

    #[test]
    fn bad_policy_rejected() {
        assert!(ServiceConfig::from_lookup(|k| (k == ENV_POLICY).then(|| "worst".into())).is_err());
    }
}
